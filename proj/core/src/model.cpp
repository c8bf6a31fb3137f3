#include "convmine/model.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "convmine/error.hpp"

namespace convmine {

namespace {

[[noreturn]] void model_error(const std::string& name, const std::string& what) {
    throw Error(ErrorKind::Model, "model \"" + name + "\": " + what);
}

std::set<EventClass> reachable(const std::set<ModelDefinition::Edge>& edges, const EventClass& from,
                               bool forward) {
    std::map<EventClass, std::vector<EventClass>> adjacency;
    for (const auto& [a, b] : edges) {
        if (forward) adjacency[a].push_back(b);
        else adjacency[b].push_back(a);
    }
    std::set<EventClass> seen{from};
    std::deque<EventClass> queue{from};
    while (!queue.empty()) {
        EventClass node = queue.front();
        queue.pop_front();
        for (const auto& next : adjacency[node]) {
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    return seen;
}

} // namespace

std::set<EventClass> ModelDefinition::nodes() const {
    std::set<EventClass> result;
    for (const auto& [from, to] : edges) {
        result.insert(from);
        result.insert(to);
    }
    return result;
}

std::set<EventClass> ModelDefinition::successors(const EventClass& node) const {
    std::set<EventClass> result;
    for (const auto& [from, to] : edges) {
        if (from == node) result.insert(to);
    }
    return result;
}

bool ModelDefinition::has_edge(const EventClass& from, const EventClass& to) const {
    return edges.count({from, to}) > 0;
}

void ModelDefinition::validate() const {
    if (edges.empty()) model_error(name, "no edges");
    bool start_out = false, end_in = false;
    for (const auto& [from, to] : edges) {
        if (to.is_start()) model_error(name, "edge into START (" + from.name() + " -> START)");
        if (from.is_end()) model_error(name, "edge out of END (END -> " + to.name() + ")");
        if (from.is_start() && to.is_end()) {
            model_error(name, "direct START -> END edge (conversations are non-empty)");
        }
        if (from.is_start()) start_out = true;
        if (to.is_end()) end_in = true;
    }
    if (!start_out) model_error(name, "START has no outgoing edge");
    if (!end_in) model_error(name, "END has no incoming edge");

    auto from_start = reachable(edges, EventClass::start(), true);
    auto to_end = reachable(edges, EventClass::end(), false);
    for (const auto& node : nodes()) {
        if (!from_start.count(node)) {
            model_error(name, "node " + node.name() + " unreachable from START");
        }
        if (!to_end.count(node)) {
            model_error(name, "node " + node.name() + " cannot reach END");
        }
    }

    for (const auto& node : nodes()) {
        if (node.is_marker()) continue;
        auto label = node.as_label();
        if (layer == LabelLayer::Core && (!label || label->sub)) {
            model_error(name, "node " + node.name() + " is not a core-layer label");
        }
        if (layer == LabelLayer::Fine && !label) {
            model_error(name, "node " + node.name() + " is not a QRFA label");
        }
    }

    for (const auto& [cycle_name, cycle_edges] : cycles) {
        for (const auto& edge : cycle_edges) {
            if (!edges.count(edge)) {
                model_error(name, "cycle \"" + cycle_name + "\" references missing edge " +
                                      edge.first.name() + " -> " + edge.second.name());
            }
        }
    }
}

namespace {

ModelDefinition::Edge edge(const char* from, const char* to) {
    return {EventClass::named(from), EventClass::named(to)};
}

} // namespace

ModelDefinition builtin_qrfa() {
    ModelDefinition def;
    def.name = "qrfa";
    def.layer = LabelLayer::Core;
    def.edges = {
        edge("START", "Q"),
        edge("Q", "A"), edge("Q", "R"),
        edge("A", "Q"), edge("A", "F"), edge("A", "R"), edge("A", "END"),
        edge("R", "Q"), edge("R", "F"),
        edge("F", "A"), edge("F", "R"), edge("F", "Q"), edge("F", "END"),
    };
    def.cycles = {
        {"question_answering", {edge("Q", "A"), edge("A", "Q")}},
        {"query_refinement", {edge("Q", "R"), edge("R", "Q")}},
        {"offer_refinement", {edge("R", "F"), edge("F", "R")}},
        {"answer_refinement", {edge("A", "F"), edge("F", "A")}},
    };
    def.validate();
    return def;
}

ModelDefinition builtin_cor() {
    // Reconstruction of the COR conversation-for-action network over the
    // fine-layer images of its speech acts: request opens, offer opens,
    // promises/asserts answer, feedback evaluates, rejections and
    // withdrawals terminate. No COR act maps to R.Understand.
    ModelDefinition def;
    def.name = "cor";
    def.layer = LabelLayer::Fine;
    def.reconstructed = true;
    def.edges = {
        edge("START", "Q.Information"),              // A: request
        edge("START", "R.Offer"),                    // B: offer
        edge("Q.Information", "A.Backchannel"),      // B: promise
        edge("Q.Information", "A.Results"),          // B: assert
        edge("Q.Information", "A.Empty"),            // B: reject request
        edge("Q.Information", "Q.Prompt"),           // A: withdraw request
        edge("R.Offer", "F.Positive"),               // A: accept offer
        edge("R.Offer", "F.Negative"),               // A: reject offer
        edge("F.Positive", "A.Backchannel"),
        edge("F.Positive", "A.Results"),
        edge("F.Negative", "A.Backchannel"),         // renegotiate
        edge("F.Negative", "A.Results"),
        edge("A.Backchannel", "A.Results"),          // assert after promise
        edge("A.Results", "F.Positive"),             // A: be contented
        edge("A.Results", "F.Negative"),             // A: be discontented
        edge("A.Results", "END"),
        edge("A.Empty", "END"),
        edge("Q.Prompt", "END"),
        edge("F.Positive", "END"),
        edge("F.Negative", "END"),
    };
    def.validate();
    return def;
}

std::vector<std::string> builtin_model_names() { return {"qrfa", "cor"}; }

bool is_builtin_model(std::string_view name) { return name == "qrfa" || name == "cor"; }

ModelDefinition builtin_model(std::string_view name) {
    if (name == "qrfa") return builtin_qrfa();
    if (name == "cor") return builtin_cor();
    throw Error(ErrorKind::Usage, "unknown builtin model: " + std::string(name));
}

namespace {

std::set<ModelDefinition::Edge> edges_from_json(const nlohmann::json& j, const std::string& name) {
    if (!j.is_array()) model_error(name, "\"edges\" must be an array of [from, to] pairs");
    std::set<ModelDefinition::Edge> edges;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
            model_error(name, "each edge must be a [from, to] pair of strings");
        }
        edges.insert({EventClass::named(e[0].get<std::string>()),
                      EventClass::named(e[1].get<std::string>())});
    }
    return edges;
}

} // namespace

ModelDefinition parse_model(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Model, "model definition must be a JSON object");
    ModelDefinition def;
    def.name = j.value("name", std::string("unnamed"));
    if (auto layer_it = j.find("layer"); layer_it != j.end()) {
        auto layer = layer_it->is_string() ? parse_layer(layer_it->get<std::string>())
                                           : std::nullopt;
        if (!layer) model_error(def.name, "\"layer\" must be core, fine, or source");
        def.layer = *layer;
    }
    auto edges_it = j.find("edges");
    if (edges_it == j.end()) model_error(def.name, "missing \"edges\"");
    def.edges = edges_from_json(*edges_it, def.name);
    if (auto cycles_it = j.find("cycles"); cycles_it != j.end() && !cycles_it->is_null()) {
        if (!cycles_it->is_object()) model_error(def.name, "\"cycles\" must be an object");
        for (const auto& [cycle_name, cycle_edges] : cycles_it->items()) {
            def.cycles[cycle_name] = edges_from_json(cycle_edges, def.name);
        }
    }
    def.reconstructed = j.value("reconstructed", false);
    def.validate();
    return def;
}

ModelDefinition load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Usage, "cannot open model file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Model, path.string() + ": malformed JSON: " + e.what());
    }
    return parse_model(j);
}

nlohmann::json to_json(const ModelDefinition& def) {
    nlohmann::json j;
    j["name"] = def.name;
    j["layer"] = std::string(to_string(def.layer));
    auto edges = nlohmann::json::array();
    for (const auto& [from, to] : def.edges) {
        edges.push_back({from.name(), to.name()});
    }
    j["edges"] = std::move(edges);
    nlohmann::json cycles = nlohmann::json::object();
    for (const auto& [cycle_name, cycle_edges] : def.cycles) {
        auto arr = nlohmann::json::array();
        for (const auto& [from, to] : cycle_edges) arr.push_back({from.name(), to.name()});
        cycles[cycle_name] = std::move(arr);
    }
    j["cycles"] = std::move(cycles);
    j["reconstructed"] = def.reconstructed;
    return j;
}

namespace {

// Deterministic place order: START, labels in lexicographic order, END.
std::vector<std::string> ordered_places(const std::set<EventClass>& nodes) {
    std::vector<std::string> places;
    places.push_back(EventClass::start_name());
    for (const auto& node : nodes) {
        if (!node.is_marker()) places.push_back(node.name());
    }
    places.push_back(EventClass::end_name());
    return places;
}

} // namespace

ProcessNet from_definition(const ModelDefinition& def) {
    def.validate();
    ProcessNet net;
    net.name = def.name;
    net.reconstructed = def.reconstructed;
    net.places = ordered_places(def.nodes());
    std::map<std::string, std::uint32_t> place_index;
    for (std::uint32_t i = 0; i < net.places.size(); ++i) place_index[net.places[i]] = i;
    net.initial_place = place_index[EventClass::start_name()];
    net.final_place = place_index[EventClass::end_name()];
    for (const auto& [from, to] : def.edges) {
        ProcessNet::Transition transition;
        transition.id = from.name() + "->" + to.name();
        transition.from = place_index[from.name()];
        transition.to = place_index[to.name()];
        if (!to.is_end()) transition.label = to;
        net.transitions.push_back(std::move(transition));
    }
    return net;
}

ModelDefinition from_transition_graph(const TransitionGraph& graph, std::uint64_t min_edge_freq,
                                      PruneReport* report, const std::string& name) {
    if (min_edge_freq < 1) {
        throw Error(ErrorKind::Usage, "from_transition_graph: min_edge_freq must be >= 1");
    }
    std::set<ModelDefinition::Edge> kept;
    for (const auto& [edge, frequency] : graph.edges) {
        if (frequency >= min_edge_freq) kept.insert(edge);
    }
    auto from_start = reachable(kept, EventClass::start(), true);
    auto to_end = reachable(kept, EventClass::end(), false);
    if (!from_start.count(EventClass::end())) {
        model_error(name, "START cannot reach END at threshold " + std::to_string(min_edge_freq));
    }

    ModelDefinition def;
    def.name = name;
    std::set<EventClass> pruned;
    for (const auto& edge : kept) {
        bool keep = from_start.count(edge.first) && to_end.count(edge.first) &&
                    from_start.count(edge.second) && to_end.count(edge.second);
        if (keep) {
            def.edges.insert(edge);
        } else {
            if (!from_start.count(edge.first) || !to_end.count(edge.first)) pruned.insert(edge.first);
            if (!from_start.count(edge.second) || !to_end.count(edge.second)) pruned.insert(edge.second);
            if (report) ++report->pruned_edges;
        }
    }
    if (report) {
        report->pruned_nodes.assign(pruned.begin(), pruned.end());
    }

    // Infer the layer from the surviving alphabet.
    bool all_core = true, all_fine = true;
    for (const auto& node : def.nodes()) {
        if (node.is_marker()) continue;
        auto label = node.as_label();
        if (!label) all_core = all_fine = false;
        else if (label->sub) all_core = false;
    }
    def.layer = all_core ? LabelLayer::Core : (all_fine ? LabelLayer::Fine : LabelLayer::Source);
    def.validate();
    return def;
}

EventLog generate_traces(const ModelDefinition& def, std::size_t n, std::size_t max_len,
                         std::uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::Usage, "generate_traces: n must be >= 1");
    if (max_len < 1) throw Error(ErrorKind::Usage, "generate_traces: max_len must be >= 1");
    def.validate();

    std::map<EventClass, std::vector<EventClass>> successors;
    std::map<EventClass, std::vector<EventClass>> predecessors;
    for (const auto& [from, to] : def.edges) {
        successors[from].push_back(to);
        predecessors[to].push_back(from);
    }
    for (auto& [node, next] : successors) std::sort(next.begin(), next.end());

    // hop distance to END, for steering over-long walks
    std::map<EventClass, std::size_t> distance_to_end;
    distance_to_end[EventClass::end()] = 0;
    std::deque<EventClass> queue{EventClass::end()};
    while (!queue.empty()) {
        EventClass node = queue.front();
        queue.pop_front();
        for (const auto& prev : predecessors[node]) {
            if (!distance_to_end.count(prev)) {
                distance_to_end[prev] = distance_to_end[node] + 1;
                queue.push_back(prev);
            }
        }
    }

    std::mt19937_64 rng(seed);
    EventLog log;
    log.layer = def.layer;
    log.traces.reserve(n);

    int width = 1;
    for (std::size_t v = n; v >= 10; v /= 10) ++width;

    for (std::size_t k = 0; k < n; ++k) {
        Trace trace;
        std::ostringstream id;
        id << "gen-" << std::setfill('0') << std::setw(width) << k;
        trace.conversation_id = id.str();

        EventClass current = EventClass::start();
        while (!current.is_end()) {
            const auto& next_options = successors.at(current);
            EventClass next = next_options.front();
            if (trace.events.size() < max_len) {
                next = next_options[static_cast<std::size_t>(rng() % next_options.size())];
            } else {
                // steer home along a shortest hop-path
                for (const auto& option : next_options) {
                    if (distance_to_end.at(option) < distance_to_end.at(next)) next = option;
                }
            }
            if (!next.is_end()) trace.events.push_back(next);
            current = next;
        }
        log.traces.push_back(std::move(trace));
    }
    return log;
}

namespace {

void dot_header(std::ostringstream& out, const std::string& name,
                const std::vector<std::string>& places) {
    out << "digraph \"" << name << "\" {\n";
    out << "  rankdir=LR;\n";
    for (const auto& place : places) {
        if (place == EventClass::start_name()) {
            out << "  \"START\" [shape=point];\n";
        } else if (place == EventClass::end_name()) {
            out << "  \"END\" [shape=doublecircle, label=\"\"];\n";
        } else {
            out << "  \"" << place << "\" [shape=ellipse];\n";
        }
    }
}

} // namespace

std::string to_dot(const ModelDefinition& def) {
    std::ostringstream out;
    dot_header(out, def.name, ordered_places(def.nodes()));
    for (const auto& [from, to] : def.edges) {
        out << "  \"" << from.name() << "\" -> \"" << to.name() << "\";\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_dot(const TransitionGraph& graph) {
    std::ostringstream out;
    dot_header(out, "transitions", ordered_places(graph.nodes));
    std::uint64_t min_frequency = 0, max_frequency = 0;
    for (const auto& [edge, frequency] : graph.edges) {
        if (min_frequency == 0 || frequency < min_frequency) min_frequency = frequency;
        max_frequency = std::max(max_frequency, frequency);
    }
    constexpr unsigned kMinAlpha = 0x40, kMaxAlpha = 0xFF;
    for (const auto& [edge, frequency] : graph.edges) {
        unsigned alpha = kMaxAlpha;
        if (max_frequency > min_frequency) {
            double t = static_cast<double>(frequency - min_frequency) /
                       static_cast<double>(max_frequency - min_frequency);
            alpha = kMinAlpha + static_cast<unsigned>(t * (kMaxAlpha - kMinAlpha) + 0.5);
        }
        out << "  \"" << edge.first.name() << "\" -> \"" << edge.second.name() << "\" [label=\""
            << frequency << "\", color=\"#000000" << std::hex << std::setw(2) << std::setfill('0')
            << alpha << std::dec << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace convmine
