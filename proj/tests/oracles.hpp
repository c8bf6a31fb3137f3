#ifndef convmine_tests_oracles_hpp
#define convmine_tests_oracles_hpp

// Test-side reference implementations, kept deliberately naive and
// independent of the library's search/counting code paths.

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "convmine/conformance.hpp"
#include "convmine/discovery.hpp"
#include "convmine/log.hpp"
#include "convmine/model.hpp"

namespace convmine::oracles {

// Minimum alignment cost by breadth-first enumeration of every partial
// alignment up to the given cost budget. States are (trace position,
// place, accumulated cost); nothing smarter than deduplicating exact
// repeats of that triple.
inline std::uint64_t brute_force_alignment_cost(const std::vector<EventClass>& events,
                                                const ProcessNet& net,
                                                std::uint64_t log_cost = 1,
                                                std::uint64_t visible_cost = 1) {
    // budget: replay nothing + one pass through the net (a path never
    // needs to revisit a place when all costs are non-negative)
    const std::uint64_t budget =
        static_cast<std::uint64_t>(events.size()) * log_cost +
        static_cast<std::uint64_t>(net.places.size()) * visible_cost;

    struct State {
        std::size_t position;
        std::uint32_t place;
        std::uint64_t cost;
    };
    std::set<std::tuple<std::size_t, std::uint32_t, std::uint64_t>> seen;
    std::deque<State> queue;
    queue.push_back({0, net.initial_place, 0});
    seen.insert({0, net.initial_place, 0});
    std::uint64_t best = budget + 1;

    while (!queue.empty()) {
        State state = queue.front();
        queue.pop_front();
        if (state.position == events.size() && state.place == net.final_place) {
            if (state.cost < best) best = state.cost;
            continue;
        }
        auto push = [&](std::size_t position, std::uint32_t place, std::uint64_t cost) {
            if (cost > budget) return;
            if (seen.insert({position, place, cost}).second) {
                queue.push_back({position, place, cost});
            }
        };
        for (const auto& transition : net.transitions) {
            if (transition.from != state.place) continue;
            if (transition.visible()) {
                // synchronous move
                if (state.position < events.size() && *transition.label == events[state.position]) {
                    push(state.position + 1, transition.to, state.cost);
                }
                // visible model-only move
                push(state.position, transition.to, state.cost + visible_cost);
            } else {
                // invisible model-only move
                push(state.position, transition.to, state.cost);
            }
        }
        // log-only move
        if (state.position < events.size()) {
            push(state.position + 1, state.place, state.cost + log_cost);
        }
    }
    return best;
}

// Whether the trace is the label projection of some firing sequence from
// the initial to the final marking (synchronous and invisible moves only).
inline bool replay_accepts(const std::vector<EventClass>& events, const ProcessNet& net) {
    std::set<std::pair<std::size_t, std::uint32_t>> seen;
    std::deque<std::pair<std::size_t, std::uint32_t>> queue;
    queue.push_back({0, net.initial_place});
    seen.insert({0, net.initial_place});
    while (!queue.empty()) {
        auto [position, place] = queue.front();
        queue.pop_front();
        if (position == events.size() && place == net.final_place) return true;
        for (const auto& transition : net.transitions) {
            if (transition.from != place) continue;
            std::pair<std::size_t, std::uint32_t> next{position, transition.to};
            if (transition.visible()) {
                if (position < events.size() && *transition.label == events[position]) {
                    next.first = position + 1;
                } else {
                    continue;
                }
            }
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    return false;
}

// Ordered-pair succession counts by a double loop over index pairs.
struct BruteSuccession {
    std::map<std::pair<EventClass, EventClass>, std::uint64_t> counts;
    std::map<std::pair<EventClass, EventClass>, std::map<std::uint64_t, std::uint64_t>> distances;
};

inline BruteSuccession brute_force_succession(const EventLog& log) {
    BruteSuccession result;
    for (const auto& trace : log.traces) {
        for (std::size_t i = 0; i < trace.events.size(); ++i) {
            for (std::size_t j = i + 1; j < trace.events.size(); ++j) {
                auto key = std::make_pair(trace.events[i], trace.events[j]);
                ++result.counts[key];
                ++result.distances[key][j - i];
            }
        }
    }
    return result;
}

// Contiguous-window episode counts by re-scanning every trace per window.
struct BruteEpisodes {
    std::map<std::vector<EventClass>, std::uint64_t> supports;
    std::map<std::vector<EventClass>, std::uint64_t> occurrences;
};

inline BruteEpisodes brute_force_episodes(const EventLog& log, std::size_t max_len) {
    BruteEpisodes result;
    for (const auto& trace : log.traces) {
        std::set<std::vector<EventClass>> seen;
        for (std::size_t len = 2; len <= max_len; ++len) {
            for (std::size_t start = 0; start + len <= trace.events.size(); ++start) {
                std::vector<EventClass> window(trace.events.begin() + start,
                                               trace.events.begin() + start + len);
                ++result.occurrences[window];
                seen.insert(window);
            }
        }
        for (const auto& window : seen) ++result.supports[window];
    }
    return result;
}

} // namespace convmine::oracles

#endif
