#include <deque>
#include <filesystem>
#include <random>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "convmine/error.hpp"
#include "convmine/ingest.hpp"
#include "convmine/model.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace convmine;

namespace {

ModelDefinition::Edge edge(const char* from, const char* to) {
    return {EventClass::named(from), EventClass::named(to)};
}

ModelDefinition chain_start_q_end() {
    ModelDefinition def;
    def.name = "chain";
    def.edges = {edge("START", "Q"), edge("Q", "END")};
    def.validate();
    return def;
}

void check_rejected(const ModelDefinition& def, const std::string& fragment) {
    try {
        def.validate();
        FAIL("expected validation to fail mentioning: " << fragment);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
}

} // namespace

TEST_CASE("the default QRFA model has the expected edges") {
    auto qrfa = builtin_qrfa();
    CHECK(qrfa.edges.size() == 13);
    CHECK(qrfa.layer == LabelLayer::Core);
    CHECK_FALSE(qrfa.reconstructed);

    CHECK(qrfa.has_edge(EventClass::named("F"), EventClass::named("Q")));
    CHECK(qrfa.has_edge(EventClass::named("A"), EventClass::named("R")));
    CHECK_FALSE(qrfa.has_edge(EventClass::named("Q"), EventClass::end()));
    CHECK_FALSE(qrfa.has_edge(EventClass::named("R"), EventClass::end()));
    CHECK(qrfa.has_edge(EventClass::named("A"), EventClass::end()));
    CHECK(qrfa.has_edge(EventClass::named("F"), EventClass::end()));

    REQUIRE(qrfa.cycles.size() == 4);
    for (const char* name :
         {"question_answering", "query_refinement", "offer_refinement", "answer_refinement"}) {
        REQUIRE(qrfa.cycles.count(name) == 1);
        CHECK(qrfa.cycles.at(name).size() == 2);
    }
}

TEST_CASE("QRFA user-to-agent edges mirror agent-to-user edges under role swap") {
    auto qrfa = builtin_qrfa();
    auto side = [](const EventClass& e) { return side_of(e.as_label()->core); };
    auto swap = [](const EventClass& e) -> EventClass {
        if (e.name() == "Q") return EventClass::named("R");
        if (e.name() == "R") return EventClass::named("Q");
        if (e.name() == "F") return EventClass::named("A");
        return EventClass::named("F");  // A
    };
    std::set<ModelDefinition::Edge> user_to_agent, agent_to_user;
    for (const auto& [from, to] : qrfa.edges) {
        if (from.is_marker() || to.is_marker()) continue;
        if (side(from) == Speaker::User && side(to) == Speaker::Agent) {
            user_to_agent.insert({from, to});
        }
        if (side(from) == Speaker::Agent && side(to) == Speaker::User) {
            agent_to_user.insert({from, to});
        }
    }
    CHECK(user_to_agent ==
          std::set<ModelDefinition::Edge>{edge("Q", "A"), edge("Q", "R"), edge("F", "A"),
                                          edge("F", "R")});
    std::set<ModelDefinition::Edge> mirrored;
    for (const auto& [from, to] : user_to_agent) mirrored.insert({swap(from), swap(to)});
    CHECK(mirrored == agent_to_user);
    CHECK(mirrored.size() == user_to_agent.size());
}

TEST_CASE("the COR reconstruction covers the fine-layer images of its acts") {
    auto cor = builtin_cor();
    CHECK(cor.layer == LabelLayer::Fine);
    CHECK(cor.reconstructed);

    std::set<std::string> names;
    for (const auto& node : cor.nodes()) {
        if (!node.is_marker()) names.insert(node.name());
    }
    CHECK(names == std::set<std::string>{"A.Backchannel", "A.Empty", "A.Results", "F.Negative",
                                         "F.Positive", "Q.Information", "Q.Prompt", "R.Offer"});

    // every COR mapping target is a node of the model
    for (const auto& [key, label] : builtin_mapping("cor").entries) {
        CHECK(names.count(label.str()) == 1);
    }
}

TEST_CASE("a request followed by an assert replays on the COR reconstruction") {
    auto net = from_definition(builtin_cor());
    auto table = builtin_mapping("cor");
    Trace trace;
    trace.conversation_id = "cor-1";
    trace.events = {
        EventClass::of(*table.lookup(Speaker::User, "request")),
        EventClass::of(*table.lookup(Speaker::Agent, "assert")),
    };
    CHECK(oracles::replay_accepts(trace.events, net));
    CHECK(oracles::brute_force_alignment_cost(trace.events, net) == 0);
    CHECK(trace_fitness(trace, net).fitness == 1.0);
}

TEST_CASE("from_definition builds a one-place-per-node state machine") {
    auto net = from_definition(builtin_qrfa());
    CHECK(net.places.size() == 6);
    std::size_t visible = 0, invisible = 0;
    for (const auto& transition : net.transitions) {
        if (transition.visible()) {
            ++visible;
            CHECK(transition.label->name() == net.places[transition.to]);
        } else {
            ++invisible;
            CHECK(net.places[transition.to] == "END");
        }
    }
    CHECK(visible == 11);
    CHECK(invisible == 2);
    CHECK(net.places[net.initial_place] == "START");
    CHECK(net.places[net.final_place] == "END");

    auto chain = from_definition(chain_start_q_end());
    CHECK(chain.places.size() == 3);
    CHECK(chain.transitions.size() == 2);
}

TEST_CASE("every reachable marking of a definition net holds exactly one token") {
    for (const auto& def : {builtin_qrfa(), builtin_cor()}) {
        auto net = from_definition(def);
        // exhaustive marking exploration with multiset markings
        using Marking = std::map<std::uint32_t, std::uint32_t>;
        Marking initial{{net.initial_place, 1}};
        std::set<Marking> seen{initial};
        std::deque<Marking> queue{initial};
        while (!queue.empty()) {
            Marking marking = queue.front();
            queue.pop_front();
            std::uint32_t tokens = 0;
            for (const auto& [place, count] : marking) tokens += count;
            CHECK(tokens == 1);
            for (const auto& transition : net.transitions) {
                auto it = marking.find(transition.from);
                if (it == marking.end() || it->second == 0) continue;
                Marking next = marking;
                if (--next[transition.from] == 0) next.erase(transition.from);
                ++next[transition.to];
                if (seen.insert(next).second) queue.push_back(next);
            }
        }
        CHECK(seen.size() <= net.places.size());
    }
}

TEST_CASE("model definitions survive a JSON round trip") {
    for (const auto& def : {builtin_qrfa(), builtin_cor(), chain_start_q_end()}) {
        auto parsed = parse_model(to_json(def));
        CHECK(to_json(parsed) == to_json(def));
    }
}

TEST_CASE("shipped model files match the built-ins") {
    auto data = std::filesystem::path(CONVMINE_DATA_DIR) / "models";
    CHECK(to_json(load_model(data / "qrfa.json")) == to_json(builtin_qrfa()));
    CHECK(to_json(load_model(data / "cor.json")) == to_json(builtin_cor()));
}

TEST_CASE("shipped mapping files match the built-ins") {
    auto data = std::filesystem::path(CONVMINE_DATA_DIR) / "mappings";
    for (const auto& name : builtin_mapping_names()) {
        auto from_file = parse_mapping(data / (name + ".csv"));
        auto builtin = builtin_mapping(name);
        CHECK(from_file.entries == builtin.entries);
    }
}

TEST_CASE("definition validation names the violated invariant") {
    ModelDefinition def;
    def.name = "bad";

    def.edges = {edge("START", "Q")};
    check_rejected(def, "END");

    def.edges = {edge("START", "Q"), edge("Q", "END"), edge("END", "Q")};
    check_rejected(def, "out of END");

    def.edges = {edge("START", "Q"), edge("Q", "END"), edge("Q", "START")};
    check_rejected(def, "into START");

    def.edges = {edge("START", "END")};
    check_rejected(def, "START -> END");

    def.edges = {edge("START", "Q"), edge("Q", "END"), edge("A", "Q")};
    check_rejected(def, "unreachable");

    def.edges = {edge("START", "Q"), edge("Q", "END"), edge("Q", "A"), edge("A", "A")};
    check_rejected(def, "cannot reach END");

    def.edges = {edge("START", "xyz"), edge("xyz", "END")};
    def.layer = LabelLayer::Core;
    check_rejected(def, "core-layer");
    def.layer = LabelLayer::Source;
    CHECK_NOTHROW(def.validate());
    def.layer = LabelLayer::Core;

    def = builtin_qrfa();
    def.cycles["broken"] = {edge("Q", "END")};
    check_rejected(def, "broken");
}

TEST_CASE("from_transition_graph drops frequencies and prunes dead nodes") {
    EventLog log;
    log.traces.push_back(Trace{"c0", {EventClass::named("Q"), EventClass::named("A")}});
    auto graph = directly_follows(log);
    auto def = from_transition_graph(graph, 1);
    CHECK(def.edges == std::set<ModelDefinition::Edge>{edge("START", "Q"), edge("Q", "A"),
                                                       edge("A", "END")});
    CHECK(def.layer == LabelLayer::Core);

    CHECK_THROWS_AS(from_transition_graph(graph, 2), Error);

    // a branch that cannot reach END after thresholding gets pruned
    TransitionGraph partial;
    partial.trace_count = 5;
    auto add = [&partial](const char* from, const char* to, std::uint64_t f) {
        partial.edges[{EventClass::named(from), EventClass::named(to)}] = f;
        partial.nodes.insert(EventClass::named(from));
        partial.nodes.insert(EventClass::named(to));
    };
    add("START", "Q", 5);
    add("Q", "A", 5);
    add("A", "END", 5);
    add("Q", "R", 5);
    add("R", "F", 1);
    add("F", "END", 1);
    PruneReport report;
    auto pruned = from_transition_graph(partial, 2, &report);
    CHECK(pruned.edges == std::set<ModelDefinition::Edge>{edge("START", "Q"), edge("Q", "A"),
                                                          edge("A", "END")});
    REQUIRE(report.pruned_nodes.size() == 1);
    CHECK(report.pruned_nodes[0] == EventClass::named("R"));
    CHECK(report.pruned_edges == 1);
}

TEST_CASE("generated walks follow the model") {
    auto chain = chain_start_q_end();
    auto log = generate_traces(chain, 5, 10, 42);
    REQUIRE(log.traces.size() == 5);
    for (const auto& trace : log.traces) {
        CHECK(trace.events == std::vector<EventClass>{EventClass::named("Q")});
    }

    auto qrfa = builtin_qrfa();
    auto generated = generate_traces(qrfa, 1000, 32, 7);
    for (const auto& trace : generated.traces) {
        REQUIRE_FALSE(trace.events.empty());
        CHECK(trace.events.front() == EventClass::named("Q"));
    }

    // re-mining yields only definition edges
    auto mined = directly_follows(generated);
    for (const auto& [e, f] : mined.edges) {
        CHECK(qrfa.edges.count(e) == 1);
    }

    // deterministic per seed, ids unique
    auto again = generate_traces(qrfa, 1000, 32, 7);
    REQUIRE(again.traces.size() == generated.traces.size());
    std::set<std::string> ids;
    for (std::size_t i = 0; i < generated.traces.size(); ++i) {
        CHECK(again.traces[i].events == generated.traces[i].events);
        ids.insert(generated.traces[i].conversation_id);
    }
    CHECK(ids.size() == generated.traces.size());
}

TEST_CASE("generated walks stay inside random definitions too") {
    std::mt19937_64 rng(606);
    for (int round = 0; round < 15; ++round) {
        auto def = testgen::random_model(rng);
        auto log = generate_traces(def, 50, 12, rng());
        auto mined = directly_follows(log);
        for (const auto& [e, f] : mined.edges) {
            CHECK(def.edges.count(e) == 1);
        }
    }
}

TEST_CASE("self-loops are allowed in user definitions") {
    ModelDefinition def;
    def.name = "looped";
    def.edges = {edge("START", "Q"), edge("Q", "Q"), edge("Q", "A"), edge("A", "END")};
    CHECK_NOTHROW(def.validate());

    auto log = generate_traces(def, 100, 6, 3);
    auto net = from_definition(def);
    bool saw_loop = false;
    for (const auto& trace : log.traces) {
        CHECK(oracles::replay_accepts(trace.events, net));
        for (std::size_t i = 0; i + 1 < trace.events.size(); ++i) {
            saw_loop |= trace.events[i] == trace.events[i + 1];
        }
    }
    CHECK(saw_loop);

    Trace doubled;
    doubled.conversation_id = "qq";
    doubled.events = {EventClass::named("Q"), EventClass::named("Q"), EventClass::named("A")};
    CHECK(trace_fitness(doubled, net).fitness == 1.0);
}

TEST_CASE("steered walks terminate promptly after max_len") {
    auto qrfa = builtin_qrfa();
    auto log = generate_traces(qrfa, 200, 4, 99);
    for (const auto& trace : log.traces) {
        // Q and R cannot terminate; the steering tail is at most 2 events
        CHECK(trace.events.size() <= 4 + 2);
    }
}

TEST_CASE("dot export is deterministic and styled by frequency") {
    auto qrfa_dot = to_dot(builtin_qrfa());
    CHECK(qrfa_dot == to_dot(builtin_qrfa()));
    std::size_t nodes = 0, edges = 0;
    std::istringstream lines(qrfa_dot);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find("->") != std::string::npos) ++edges;
        else if (line.find("shape=") != std::string::npos) ++nodes;
    }
    CHECK(nodes == 6);
    CHECK(edges == 13);

    TransitionGraph graph;
    graph.trace_count = 10;
    graph.nodes = {EventClass::start(), EventClass::end(), EventClass::named("Q"),
                   EventClass::named("A"), EventClass::named("R")};
    graph.edges[{EventClass::named("Q"), EventClass::named("A")}] = 10;
    graph.edges[{EventClass::named("Q"), EventClass::named("R")}] = 1;
    auto dot = to_dot(graph);
    CHECK(dot.find("\"Q\" -> \"A\" [label=\"10\", color=\"#000000ff\"]") != std::string::npos);
    CHECK(dot.find("\"Q\" -> \"R\" [label=\"1\", color=\"#00000040\"]") != std::string::npos);
}
