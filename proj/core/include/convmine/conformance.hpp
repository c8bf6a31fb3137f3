#ifndef convmine_conformance_hpp
#define convmine_conformance_hpp

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "convmine/log.hpp"
#include "convmine/model.hpp"

namespace convmine {

// Uniform move costs. Synchronous and invisible-model moves are free by
// definition and not configurable.
struct CostFunction {
    double log_only = 1.0;
    double visible_model_only = 1.0;
};

struct Move {
    enum class Kind : unsigned char { Synchronous, LogOnly, ModelOnly };

    Kind kind = Kind::Synchronous;
    EventClass label;           // synchronous / log-only: the trace event
    std::string transition_id;  // synchronous / model-only: the fired transition
    bool visible = true;        // model-only: whether the transition is visible

    static Move synchronous(EventClass label, std::string transition_id);
    static Move log_only(EventClass label);
    static Move model_only(std::string transition_id, std::optional<EventClass> label);
};

struct Alignment {
    std::vector<Move> moves;
    double cost = 0.0;

    // The trace, recovered from synchronous + log-only moves.
    std::vector<EventClass> log_projection() const;
    // The firing sequence, recovered from synchronous + model-only moves.
    std::vector<std::string> model_projection() const;
};

// Minimum-cost alignment via shortest-path search over the synchronous
// product of the trace automaton and the net's reachability graph. Ties
// are broken by preferring synchronous, then invisible-model, then
// visible-model, then log moves, then lexicographic label order, so the
// result is deterministic. Error(Model) if the final marking is
// unreachable.
Alignment optimal_alignment(const Trace& trace, const ProcessNet& net,
                            const CostFunction& cost = {});

// Cost of the optimal alignment without reconstructing the moves.
double optimal_alignment_cost(const Trace& trace, const ProcessNet& net,
                              const CostFunction& cost = {});

// Cost of the reference worst-case alignment: every trace event as a
// log-only move plus the cheapest visible firing sequence from the
// initial to the final marking.
double worst_case_cost(const Trace& trace, const ProcessNet& net, const CostFunction& cost = {});

struct TraceFitness {
    std::string conversation_id;
    double optimal_cost = 0.0;
    double worst_case_cost = 0.0;
    double fitness = 0.0;  // 1 - optimal / worst-case
    bool empty_trace = false;
};

TraceFitness trace_fitness(const Trace& trace, const ProcessNet& net,
                           const CostFunction& cost = {});

struct FitnessReport {
    std::string model_name;
    bool model_reconstructed = false;
    std::vector<TraceFitness> traces;  // sorted by conversation id
    double average = 0.0;
    double max_fitness = 0.0;
    double min_fitness = 0.0;
    double std_deviation = 0.0;      // population
    double cases_with_value_1 = 0.0; // fraction of traces with fitness exactly 1
    std::uint64_t empty_traces = 0;
};

struct LogFitnessOptions {
    CostFunction cost;
    unsigned threads = 0;  // 0: pick from hardware
};

// Per-trace fitness plus the aggregate rows. Identical event sequences
// (trace variants) are aligned once and the result replicated.
FitnessReport log_fitness(const EventLog& log, const ProcessNet& net,
                          const LogFitnessOptions& options = {});

nlohmann::json to_json(const FitnessReport& report);
nlohmann::json to_json(const Alignment& alignment);
// Metric rows, one per aggregate, human readable.
std::string to_table(const FitnessReport& report);

} // namespace convmine

#endif
