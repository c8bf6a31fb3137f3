#ifndef convmine_model_hpp
#define convmine_model_hpp

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "convmine/discovery.hpp"
#include "convmine/log.hpp"

namespace convmine {

// A reference conversation-flow model: a digraph over event classes with
// reserved START/END nodes. Every node lies on some START->...->END path;
// START has no incoming and END no outgoing edges; a direct START->END
// edge is rejected (conversations are non-empty).
struct ModelDefinition {
    using Edge = std::pair<EventClass, EventClass>;

    std::string name;
    LabelLayer layer = LabelLayer::Core;
    std::set<Edge> edges;
    // Named edge subsets, for documentation (e.g. the refinement loops).
    std::map<std::string, std::set<Edge>> cycles;
    // Topology reconstructed from a published figure rather than an
    // enumerated edge list; reports carry a banner when set.
    bool reconstructed = false;

    std::set<EventClass> nodes() const;
    std::set<EventClass> successors(const EventClass& node) const;
    bool has_edge(const EventClass& from, const EventClass& to) const;

    // Throws Error(Model) describing the first violated invariant.
    void validate() const;
};

// The default QRFA model: the four refinement loops plus the
// agent-side/user-side mirror edges, terminating from A and F only.
ModelDefinition builtin_qrfa();

// Best-effort COR reconstruction over the fine-layer images of the COR
// speech acts; flagged reconstructed.
ModelDefinition builtin_cor();

bool is_builtin_model(std::string_view name);
std::vector<std::string> builtin_model_names();
ModelDefinition builtin_model(std::string_view name);

// Model-definition JSON:
// {"name": ..., "layer": "core"|"fine"|"source",
//  "edges": [["Q","A"], ...],
//  "cycles": {"question_answering": [["Q","A"],["A","Q"]], ...},
//  "reconstructed": false}
ModelDefinition parse_model(const nlohmann::json& j);
ModelDefinition load_model(const std::filesystem::path& path);
nlohmann::json to_json(const ModelDefinition& def);

// Workflow-shaped state-machine net: one place per model node, one
// transition per edge. Transitions into END are invisible (termination
// plumbing, cost-exempt); all others are visible and labeled with their
// target's event class.
struct ProcessNet {
    struct Transition {
        std::string id;
        std::optional<EventClass> label;  // nullopt for invisible
        std::uint32_t from = 0;
        std::uint32_t to = 0;

        bool visible() const { return label.has_value(); }
    };

    std::string name;
    bool reconstructed = false;
    std::vector<std::string> places;
    std::vector<Transition> transitions;
    std::uint32_t initial_place = 0;
    std::uint32_t final_place = 0;
};

ProcessNet from_definition(const ModelDefinition& def);

struct PruneReport {
    std::vector<EventClass> pruned_nodes;
    std::uint64_t pruned_edges = 0;
};

// Thresholded edge set with frequencies dropped; nodes off every
// START->...->END path are pruned and reported. Error(Model) if START
// cannot reach END after thresholding.
ModelDefinition from_transition_graph(const TransitionGraph& graph, std::uint64_t min_edge_freq,
                                      PruneReport* report = nullptr,
                                      const std::string& name = "discovered");

// n random walks from START, uniform over outgoing edges, stopping at END.
// Walks that hit max_len are steered along shortest hop-paths to END, so
// every generated trace replays on the definition. Deterministic per seed.
EventLog generate_traces(const ModelDefinition& def, std::size_t n, std::size_t max_len,
                         std::uint64_t seed);

std::string to_dot(const ModelDefinition& def);
// Edges carry frequency labels; stroke opacity scales linearly between the
// minimum and maximum observed frequency.
std::string to_dot(const TransitionGraph& graph);

} // namespace convmine

#endif
