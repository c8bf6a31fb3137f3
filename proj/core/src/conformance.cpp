#include "convmine/conformance.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iomanip>
#include <limits>
#include <queue>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "convmine/error.hpp"

namespace convmine {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kCostEps = 1e-9;

void validate_cost(const CostFunction& cost) {
    if (!(cost.log_only > 0.0) || !(cost.visible_model_only > 0.0)) {
        throw Error(ErrorKind::Usage,
                    "cost function: log-only and visible-model-only costs must be positive");
    }
}

// Net indexed for the product search. Transition order within a place is
// the deterministic tie-break order: by label, then target place, then id.
struct CompiledNet {
    struct Arc {
        std::uint32_t to = 0;
        std::uint32_t transition = 0;
    };

    const ProcessNet* net = nullptr;
    std::size_t place_count = 0;
    std::vector<std::vector<Arc>> visible_from;    // sorted by (label, to-place name, id)
    std::vector<std::vector<Arc>> invisible_from;  // sorted by (to-place name, id)
    std::vector<std::vector<Arc>> visible_into;
    std::vector<std::vector<Arc>> invisible_into;

    explicit CompiledNet(const ProcessNet& n) : net(&n), place_count(n.places.size()) {
        visible_from.resize(place_count);
        invisible_from.resize(place_count);
        visible_into.resize(place_count);
        invisible_into.resize(place_count);
        for (std::uint32_t t = 0; t < n.transitions.size(); ++t) {
            const auto& transition = n.transitions[t];
            if (transition.from >= place_count || transition.to >= place_count) {
                throw Error(ErrorKind::Model, "net \"" + n.name + "\": transition " +
                                                  transition.id + " references unknown place");
            }
            Arc arc{transition.to, t};
            Arc back{transition.from, t};
            if (transition.visible()) {
                visible_from[transition.from].push_back(arc);
                visible_into[transition.to].push_back(back);
            } else {
                invisible_from[transition.from].push_back(arc);
                invisible_into[transition.to].push_back(back);
            }
        }
        auto order = [&n](const Arc& a, const Arc& b) {
            const auto& ta = n.transitions[a.transition];
            const auto& tb = n.transitions[b.transition];
            auto label = [&n](const ProcessNet::Transition& t) {
                return t.label ? t.label->name() : std::string();
            };
            auto key_a = std::make_tuple(label(ta), n.places[ta.to], ta.id);
            auto key_b = std::make_tuple(label(tb), n.places[tb.to], tb.id);
            return key_a < key_b;
        };
        for (auto* buckets : {&visible_from, &invisible_from, &visible_into, &invisible_into}) {
            for (auto& bucket : *buckets) std::sort(bucket.begin(), bucket.end(), order);
        }
    }

    const ProcessNet::Transition& transition(std::uint32_t t) const {
        return net->transitions[t];
    }
};

// Cheapest visible-move cost of any firing sequence initial -> final.
// Dijkstra over places; invisible transitions are free.
double cheapest_visible_path(const CompiledNet& compiled, const CostFunction& cost) {
    const auto& net = *compiled.net;
    std::vector<double> dist(compiled.place_count, kInfinity);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[net.initial_place] = 0.0;
    queue.push({0.0, net.initial_place});
    while (!queue.empty()) {
        auto [d, place] = queue.top();
        queue.pop();
        if (d > dist[place] + kCostEps) continue;
        auto relax = [&](const CompiledNet::Arc& arc, double weight) {
            if (d + weight < dist[arc.to] - kCostEps) {
                dist[arc.to] = d + weight;
                queue.push({dist[arc.to], arc.to});
            }
        };
        for (const auto& arc : compiled.visible_from[place]) relax(arc, cost.visible_model_only);
        for (const auto& arc : compiled.invisible_from[place]) relax(arc, 0.0);
    }
    if (!std::isfinite(dist[net.final_place])) {
        throw Error(ErrorKind::Model,
                    "net \"" + net.name + "\": final marking unreachable from initial marking");
    }
    return dist[net.final_place];
}

// Exact cost-to-goal for every product state (trace position, place),
// computed by Dijkstra over the reversed product graph from the goal
// state (|trace|, final place).
std::vector<double> cost_to_goal(const std::vector<EventClass>& events,
                                 const CompiledNet& compiled, const CostFunction& cost) {
    const auto& net = *compiled.net;
    const std::size_t places = compiled.place_count;
    const std::size_t positions = events.size() + 1;
    std::vector<double> h(positions * places, kInfinity);
    auto at = [places](std::size_t i, std::uint32_t p) { return i * places + p; };

    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    const std::size_t goal = at(events.size(), net.final_place);
    h[goal] = 0.0;
    queue.push({0.0, goal});
    while (!queue.empty()) {
        auto [d, state] = queue.top();
        queue.pop();
        if (d > h[state] + kCostEps) continue;
        const std::size_t i = state / places;
        const auto p = static_cast<std::uint32_t>(state % places);
        auto relax = [&](std::size_t prev_state, double weight) {
            if (d + weight < h[prev_state] - kCostEps) {
                h[prev_state] = d + weight;
                queue.push({h[prev_state], prev_state});
            }
        };
        // predecessors via model-only moves at position i
        for (const auto& arc : compiled.visible_into[p]) relax(at(i, arc.to), cost.visible_model_only);
        for (const auto& arc : compiled.invisible_into[p]) relax(at(i, arc.to), 0.0);
        if (i > 0) {
            // predecessor via a log-only move on event i-1
            relax(at(i - 1, p), cost.log_only);
            // predecessors via synchronous moves on event i-1
            for (const auto& arc : compiled.visible_into[p]) {
                const auto& transition = compiled.transition(arc.transition);
                if (*transition.label == events[i - 1]) relax(at(i - 1, arc.to), 0.0);
            }
        }
    }
    return h;
}

} // namespace

Move Move::synchronous(EventClass label, std::string transition_id) {
    Move move;
    move.kind = Kind::Synchronous;
    move.label = std::move(label);
    move.transition_id = std::move(transition_id);
    move.visible = true;
    return move;
}

Move Move::log_only(EventClass label) {
    Move move;
    move.kind = Kind::LogOnly;
    move.label = std::move(label);
    move.visible = false;
    return move;
}

Move Move::model_only(std::string transition_id, std::optional<EventClass> label) {
    Move move;
    move.kind = Kind::ModelOnly;
    move.transition_id = std::move(transition_id);
    move.visible = label.has_value();
    if (label) move.label = *label;
    return move;
}

std::vector<EventClass> Alignment::log_projection() const {
    std::vector<EventClass> events;
    for (const auto& move : moves) {
        if (move.kind != Move::Kind::ModelOnly) events.push_back(move.label);
    }
    return events;
}

std::vector<std::string> Alignment::model_projection() const {
    std::vector<std::string> transitions;
    for (const auto& move : moves) {
        if (move.kind != Move::Kind::LogOnly) transitions.push_back(move.transition_id);
    }
    return transitions;
}

double optimal_alignment_cost(const Trace& trace, const ProcessNet& net, const CostFunction& cost) {
    validate_cost(cost);
    CompiledNet compiled(net);
    auto h = cost_to_goal(trace.events, compiled, cost);
    double optimal = h[net.initial_place];
    if (!std::isfinite(optimal)) {
        throw Error(ErrorKind::Model,
                    "net \"" + net.name + "\": final marking unreachable from initial marking");
    }
    return optimal;
}

Alignment optimal_alignment(const Trace& trace, const ProcessNet& net, const CostFunction& cost) {
    validate_cost(cost);
    CompiledNet compiled(net);
    const std::size_t places = compiled.place_count;
    auto h = cost_to_goal(trace.events, compiled, cost);
    auto at = [places](std::size_t i, std::uint32_t p) { return i * places + p; };

    Alignment alignment;
    alignment.cost = h[at(0, net.initial_place)];
    if (!std::isfinite(alignment.cost)) {
        throw Error(ErrorKind::Model,
                    "net \"" + net.name + "\": final marking unreachable from initial marking");
    }

    // Greedy reconstruction: from each state take the best-preference move
    // that stays on a least-cost path. Preference: synchronous, invisible
    // model, visible model, log; candidates within a class are already in
    // label-lexicographic order.
    std::size_t i = 0;
    std::uint32_t place = net.initial_place;
    const std::size_t goal = at(trace.events.size(), net.final_place);
    const std::size_t step_limit =
        (trace.events.size() + 2) * (places + 2) +
        static_cast<std::size_t>(alignment.cost / std::min(cost.log_only, cost.visible_model_only)) + 8;
    std::size_t steps = 0;
    while (at(i, place) != goal) {
        if (++steps > step_limit) {
            throw Error(ErrorKind::Model, "alignment reconstruction did not terminate");
        }
        const double here = h[at(i, place)];
        auto optimal_via = [&](double move_cost, std::size_t next_state) {
            return std::abs(move_cost + h[next_state] - here) <= kCostEps * (1.0 + here);
        };

        bool moved = false;
        if (i < trace.events.size()) {
            for (const auto& arc : compiled.visible_from[place]) {
                const auto& transition = compiled.transition(arc.transition);
                if (*transition.label != trace.events[i]) continue;
                if (optimal_via(0.0, at(i + 1, arc.to))) {
                    alignment.moves.push_back(Move::synchronous(trace.events[i], transition.id));
                    place = arc.to;
                    ++i;
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
        }
        for (const auto& arc : compiled.invisible_from[place]) {
            if (optimal_via(0.0, at(i, arc.to))) {
                alignment.moves.push_back(
                    Move::model_only(compiled.transition(arc.transition).id, std::nullopt));
                place = arc.to;
                moved = true;
                break;
            }
        }
        if (moved) continue;
        for (const auto& arc : compiled.visible_from[place]) {
            if (optimal_via(cost.visible_model_only, at(i, arc.to))) {
                const auto& transition = compiled.transition(arc.transition);
                alignment.moves.push_back(Move::model_only(transition.id, transition.label));
                place = arc.to;
                moved = true;
                break;
            }
        }
        if (moved) continue;
        if (i < trace.events.size() && optimal_via(cost.log_only, at(i + 1, place))) {
            alignment.moves.push_back(Move::log_only(trace.events[i]));
            ++i;
            continue;
        }
        throw Error(ErrorKind::Model, "alignment reconstruction lost the optimal path");
    }

    assert(alignment.log_projection() == trace.events);
    return alignment;
}

double worst_case_cost(const Trace& trace, const ProcessNet& net, const CostFunction& cost) {
    validate_cost(cost);
    CompiledNet compiled(net);
    return static_cast<double>(trace.events.size()) * cost.log_only +
           cheapest_visible_path(compiled, cost);
}

namespace {

TraceFitness fitness_from_costs(const Trace& trace, double optimal, double worst) {
    TraceFitness result;
    result.conversation_id = trace.conversation_id;
    result.optimal_cost = optimal;
    result.worst_case_cost = worst;
    if (trace.events.empty()) {
        result.empty_trace = true;
        result.fitness = 0.0;
        return result;
    }
    if (optimal > worst + kCostEps) {
        throw Error(ErrorKind::Model, "optimal alignment cost exceeds worst-case cost for trace " +
                                          trace.conversation_id);
    }
    result.fitness = 1.0 - optimal / worst;
    return result;
}

} // namespace

TraceFitness trace_fitness(const Trace& trace, const ProcessNet& net, const CostFunction& cost) {
    validate_cost(cost);
    CompiledNet compiled(net);
    double base = cheapest_visible_path(compiled, cost);
    double worst = static_cast<double>(trace.events.size()) * cost.log_only + base;
    double optimal = trace.events.empty()
                         ? base
                         : optimal_alignment_cost(trace, net, cost);
    return fitness_from_costs(trace, optimal, worst);
}

FitnessReport log_fitness(const EventLog& log, const ProcessNet& net,
                          const LogFitnessOptions& options) {
    if (log.traces.empty()) throw Error(ErrorKind::Data, "log_fitness: empty log");
    validate_cost(options.cost);
    CompiledNet compiled(net);
    const double base_visible = cheapest_visible_path(compiled, options.cost);

    // trace variants: identical event sequences are aligned once
    std::map<std::vector<EventClass>, std::vector<std::size_t>> variants;
    for (std::size_t t = 0; t < log.traces.size(); ++t) {
        variants[log.traces[t].events].push_back(t);
    }
    std::vector<const std::vector<EventClass>*> variant_events;
    variant_events.reserve(variants.size());
    for (const auto& [events, indices] : variants) variant_events.push_back(&events);

    std::vector<double> variant_cost(variant_events.size(), 0.0);
    auto align_range = [&](std::size_t begin, std::size_t end) {
        CompiledNet local(net);
        for (std::size_t v = begin; v < end; ++v) {
            const auto& events = *variant_events[v];
            if (events.empty()) {
                variant_cost[v] = base_visible;
                continue;
            }
            auto h = cost_to_goal(events, local, options.cost);
            variant_cost[v] = h[net.initial_place];
            if (!std::isfinite(variant_cost[v])) {
                throw Error(ErrorKind::Model, "net \"" + net.name +
                                                  "\": final marking unreachable from initial marking");
            }
        }
    };

    unsigned threads = options.threads;
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, std::max<std::size_t>(variant_events.size(), 1)));
    if (threads <= 1 || variant_events.size() < 2) {
        align_range(0, variant_events.size());
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(threads);
        const std::size_t chunk = (variant_events.size() + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(variant_events.size(), begin + chunk);
            workers.emplace_back([&, w, begin, end] {
                try {
                    align_range(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& worker : workers) worker.join();
        for (const auto& error : errors) {
            if (error) std::rethrow_exception(error);
        }
    }

    FitnessReport report;
    report.model_name = net.name;
    report.model_reconstructed = net.reconstructed;
    report.traces.reserve(log.traces.size());
    std::size_t v = 0;
    for (const auto& [events, indices] : variants) {
        const double optimal = variant_cost[v++];
        const double worst =
            static_cast<double>(events.size()) * options.cost.log_only + base_visible;
        for (std::size_t index : indices) {
            report.traces.push_back(fitness_from_costs(log.traces[index], optimal, worst));
        }
    }
    std::sort(report.traces.begin(), report.traces.end(),
              [](const TraceFitness& a, const TraceFitness& b) {
                  return a.conversation_id < b.conversation_id;
              });

    double sum = 0.0;
    std::uint64_t fit_cases = 0;
    report.max_fitness = 0.0;
    report.min_fitness = report.traces.empty() ? 0.0 : 1.0;
    for (const auto& row : report.traces) {
        sum += row.fitness;
        report.max_fitness = std::max(report.max_fitness, row.fitness);
        report.min_fitness = std::min(report.min_fitness, row.fitness);
        if (row.empty_trace) ++report.empty_traces;
        if (!row.empty_trace && row.optimal_cost <= kCostEps) ++fit_cases;
    }
    const auto count = static_cast<double>(report.traces.size());
    report.average = sum / count;
    double squared = 0.0;
    for (const auto& row : report.traces) {
        const double d = row.fitness - report.average;
        squared += d * d;
    }
    report.std_deviation = std::sqrt(squared / count);
    report.cases_with_value_1 = static_cast<double>(fit_cases) / count;
    return report;
}

nlohmann::json to_json(const Alignment& alignment) {
    nlohmann::json j;
    j["cost"] = alignment.cost;
    auto moves = nlohmann::json::array();
    for (const auto& move : alignment.moves) {
        nlohmann::json m;
        switch (move.kind) {
            case Move::Kind::Synchronous:
                m["kind"] = "synchronous";
                m["label"] = move.label.name();
                m["transition"] = move.transition_id;
                break;
            case Move::Kind::LogOnly:
                m["kind"] = "log_only";
                m["label"] = move.label.name();
                break;
            case Move::Kind::ModelOnly:
                m["kind"] = "model_only";
                m["transition"] = move.transition_id;
                m["visible"] = move.visible;
                break;
        }
        moves.push_back(std::move(m));
    }
    j["moves"] = std::move(moves);
    return j;
}

nlohmann::json to_json(const FitnessReport& report) {
    nlohmann::json j;
    j["model"] = report.model_name;
    j["model_reconstructed"] = report.model_reconstructed;
    j["aggregates"] = {{"average_case", report.average},
                       {"max", report.max_fitness},
                       {"min", report.min_fitness},
                       {"std_deviation", report.std_deviation},
                       {"cases_with_value_1", report.cases_with_value_1},
                       {"empty_traces", report.empty_traces},
                       {"traces", report.traces.size()}};
    auto rows = nlohmann::json::array();
    for (const auto& row : report.traces) {
        rows.push_back({{"conversation_id", row.conversation_id},
                        {"optimal_cost", row.optimal_cost},
                        {"worst_case_cost", row.worst_case_cost},
                        {"fitness", row.fitness},
                        {"empty_trace", row.empty_trace}});
    }
    j["traces"] = std::move(rows);
    return j;
}

std::string to_table(const FitnessReport& report) {
    std::ostringstream out;
    out << "Model: " << report.model_name;
    if (report.model_reconstructed) out << "  [reconstructed model]";
    out << "\n";
    out << std::fixed << std::setprecision(4);
    out << "Average/case        " << report.average << "\n";
    out << "Max.                " << report.max_fitness << "\n";
    out << "Min.                " << report.min_fitness << "\n";
    out << "Std. Deviation      " << report.std_deviation << "\n";
    out << "Cases with value 1  " << report.cases_with_value_1 << "\n";
    if (report.empty_traces > 0) {
        out << "Empty traces        " << report.empty_traces << "\n";
    }
    return out.str();
}

} // namespace convmine
