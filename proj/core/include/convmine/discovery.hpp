#ifndef convmine_discovery_hpp
#define convmine_discovery_hpp

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "convmine/log.hpp"

namespace convmine {

// Frequency-weighted directly-follows model with synthetic START/END
// nodes. For every non-marker node, inflow equals outflow.
struct TransitionGraph {
    using Edge = std::pair<EventClass, EventClass>;

    std::set<EventClass> nodes;
    std::map<Edge, std::uint64_t> edges;
    std::uint64_t trace_count = 0;

    std::uint64_t frequency(const EventClass& from, const EventClass& to) const;
};

// For each trace <e1..en>, counts START->e1, ek->ek+1, en->END.
TransitionGraph directly_follows(const EventLog& log);

// Eventual-follows counts with distance statistics, plus per-label
// occurrence counts per log and per trace.
struct SuccessionStats {
    struct PairStats {
        std::uint64_t count = 0;
        // gap (j - i, in event positions) -> occurrences
        std::map<std::uint64_t, std::uint64_t> distances;
    };
    struct Occurrences {
        std::uint64_t total = 0;
        std::map<std::string, std::uint64_t> per_trace;  // conversation id -> count
    };

    std::map<std::pair<EventClass, EventClass>, PairStats> pairs;
    std::map<EventClass, Occurrences> occurrences;
};

// One linear pass per trace over per-label position lists; total work is
// the number of ordered index pairs, which the counts themselves require.
SuccessionStats mine_succession(const EventLog& log);

struct EpisodePattern {
    std::vector<EventClass> sequence;   // contiguous subsequence, length >= 2
    std::uint64_t support = 0;          // traces containing it at least once
    std::uint64_t occurrences = 0;      // total windows across all traces
};

enum class EpisodeCounting : unsigned char { TraceSupport, Occurrences };

// All contiguous subsequences of length 2..max_len whose count (per the
// counting mode) reaches min_support, sorted by descending count then
// lexicographic sequence.
std::vector<EpisodePattern> mine_episodes(const EventLog& log, std::size_t max_len,
                                          std::uint64_t min_support,
                                          EpisodeCounting counting = EpisodeCounting::TraceSupport);

// Subgraph keeping edges with frequency >= min_edge_freq; nodes with no
// remaining edge are removed. The result is a model skeleton and may
// violate flow conservation. Error if no edge survives.
TransitionGraph extract_model(const TransitionGraph& graph, std::uint64_t min_edge_freq);

// Relative threshold: fraction of trace_count, rounded up.
TransitionGraph extract_model_relative(const TransitionGraph& graph, double min_fraction);

nlohmann::json to_json(const TransitionGraph& graph);
nlohmann::json to_json(const SuccessionStats& stats);
nlohmann::json to_json(const std::vector<EpisodePattern>& episodes);

} // namespace convmine

#endif
