#include "convmine/discovery.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "convmine/error.hpp"

namespace convmine {

namespace {

void require_nonempty(const EventLog& log, const char* op) {
    if (log.traces.empty()) {
        throw Error(ErrorKind::Data, std::string(op) + ": empty log");
    }
}

void require_trace_events(const Trace& trace) {
    if (trace.events.empty()) {
        throw Error(ErrorKind::Data, "empty trace: " + trace.conversation_id);
    }
    for (const auto& event : trace.events) {
        if (event.is_marker()) {
            throw Error(ErrorKind::Data,
                        "reserved event class " + event.name() + " in trace " + trace.conversation_id);
        }
    }
}

} // namespace

std::uint64_t TransitionGraph::frequency(const EventClass& from, const EventClass& to) const {
    auto it = edges.find({from, to});
    return it == edges.end() ? 0 : it->second;
}

TransitionGraph directly_follows(const EventLog& log) {
    require_nonempty(log, "directly_follows");
    TransitionGraph graph;
    graph.trace_count = log.traces.size();
    graph.nodes.insert(EventClass::start());
    graph.nodes.insert(EventClass::end());
    for (const auto& trace : log.traces) {
        require_trace_events(trace);
        ++graph.edges[{EventClass::start(), trace.events.front()}];
        for (std::size_t i = 0; i + 1 < trace.events.size(); ++i) {
            ++graph.edges[{trace.events[i], trace.events[i + 1]}];
        }
        ++graph.edges[{trace.events.back(), EventClass::end()}];
        graph.nodes.insert(trace.events.begin(), trace.events.end());
    }
    return graph;
}

SuccessionStats mine_succession(const EventLog& log) {
    require_nonempty(log, "mine_succession");
    SuccessionStats stats;
    for (const auto& trace : log.traces) {
        require_trace_events(trace);
        // positions seen so far, bucketed by label
        std::map<EventClass, std::vector<std::size_t>> positions;
        for (std::size_t j = 0; j < trace.events.size(); ++j) {
            const auto& current = trace.events[j];
            for (const auto& [earlier, indices] : positions) {
                auto& pair = stats.pairs[{earlier, current}];
                pair.count += indices.size();
                for (std::size_t i : indices) ++pair.distances[j - i];
            }
            positions[current].push_back(j);
            auto& occ = stats.occurrences[current];
            ++occ.total;
            ++occ.per_trace[trace.conversation_id];
        }
    }
    return stats;
}

std::vector<EpisodePattern> mine_episodes(const EventLog& log, std::size_t max_len,
                                          std::uint64_t min_support, EpisodeCounting counting) {
    require_nonempty(log, "mine_episodes");
    if (max_len < 2) throw Error(ErrorKind::Usage, "mine_episodes: max_len must be >= 2");
    if (min_support < 1) throw Error(ErrorKind::Usage, "mine_episodes: min_support must be >= 1");

    struct Counts {
        std::uint64_t support = 0;
        std::uint64_t occurrences = 0;
    };
    std::map<std::vector<EventClass>, Counts> counts;
    std::vector<EventClass> window;
    for (const auto& trace : log.traces) {
        require_trace_events(trace);
        std::set<std::vector<EventClass>> seen_in_trace;
        for (std::size_t len = 2; len <= max_len; ++len) {
            if (trace.events.size() < len) break;
            for (std::size_t start = 0; start + len <= trace.events.size(); ++start) {
                window.assign(trace.events.begin() + start, trace.events.begin() + start + len);
                auto& c = counts[window];
                ++c.occurrences;
                if (seen_in_trace.insert(window).second) ++c.support;
            }
        }
    }

    std::vector<EpisodePattern> episodes;
    for (auto& [sequence, c] : counts) {
        std::uint64_t key = counting == EpisodeCounting::TraceSupport ? c.support : c.occurrences;
        if (key < min_support) continue;
        episodes.push_back(EpisodePattern{sequence, c.support, c.occurrences});
    }
    std::sort(episodes.begin(), episodes.end(),
              [counting](const EpisodePattern& a, const EpisodePattern& b) {
                  std::uint64_t ka = counting == EpisodeCounting::TraceSupport ? a.support : a.occurrences;
                  std::uint64_t kb = counting == EpisodeCounting::TraceSupport ? b.support : b.occurrences;
                  if (ka != kb) return ka > kb;
                  return a.sequence < b.sequence;
              });
    return episodes;
}

TransitionGraph extract_model(const TransitionGraph& graph, std::uint64_t min_edge_freq) {
    if (min_edge_freq < 1) throw Error(ErrorKind::Usage, "extract_model: min_edge_freq must be >= 1");
    TransitionGraph result;
    result.trace_count = graph.trace_count;
    for (const auto& [edge, frequency] : graph.edges) {
        if (frequency >= min_edge_freq) {
            result.edges.emplace(edge, frequency);
            result.nodes.insert(edge.first);
            result.nodes.insert(edge.second);
        }
    }
    if (result.edges.empty()) {
        throw Error(ErrorKind::Data, "extract_model: no edge survives threshold " +
                                         std::to_string(min_edge_freq));
    }
    return result;
}

TransitionGraph extract_model_relative(const TransitionGraph& graph, double min_fraction) {
    if (!(min_fraction > 0.0) || min_fraction > 1.0) {
        throw Error(ErrorKind::Usage, "extract_model: fraction must be in (0, 1]");
    }
    auto threshold =
        static_cast<std::uint64_t>(std::ceil(min_fraction * static_cast<double>(graph.trace_count)));
    return extract_model(graph, std::max<std::uint64_t>(threshold, 1));
}

nlohmann::json to_json(const TransitionGraph& graph) {
    nlohmann::json j;
    j["trace_count"] = graph.trace_count;
    auto nodes = nlohmann::json::array();
    for (const auto& node : graph.nodes) nodes.push_back(node.name());
    j["nodes"] = std::move(nodes);
    auto edges = nlohmann::json::array();
    for (const auto& [edge, frequency] : graph.edges) {
        edges.push_back({{"from", edge.first.name()},
                         {"to", edge.second.name()},
                         {"count", frequency}});
    }
    j["edges"] = std::move(edges);
    return j;
}

nlohmann::json to_json(const SuccessionStats& stats) {
    nlohmann::json j;
    auto pairs = nlohmann::json::array();
    for (const auto& [key, pair] : stats.pairs) {
        nlohmann::json distances;
        for (const auto& [distance, count] : pair.distances) {
            distances[std::to_string(distance)] = count;
        }
        pairs.push_back({{"from", key.first.name()},
                         {"to", key.second.name()},
                         {"count", pair.count},
                         {"distances", std::move(distances)}});
    }
    j["pairs"] = std::move(pairs);
    auto occurrences = nlohmann::json::array();
    for (const auto& [label, occ] : stats.occurrences) {
        nlohmann::json per_trace;
        for (const auto& [id, count] : occ.per_trace) per_trace[id] = count;
        occurrences.push_back({{"label", label.name()},
                               {"total", occ.total},
                               {"per_trace", std::move(per_trace)}});
    }
    j["occurrences"] = std::move(occurrences);
    return j;
}

nlohmann::json to_json(const std::vector<EpisodePattern>& episodes) {
    auto j = nlohmann::json::array();
    for (const auto& episode : episodes) {
        auto sequence = nlohmann::json::array();
        for (const auto& event : episode.sequence) sequence.push_back(event.name());
        j.push_back({{"sequence", std::move(sequence)},
                     {"support", episode.support},
                     {"occurrences", episode.occurrences}});
    }
    return j;
}

} // namespace convmine
