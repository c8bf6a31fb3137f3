#ifndef convmine_log_hpp
#define convmine_log_hpp

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convmine/labels.hpp"

namespace convmine {

// One labeled turn. `labels` is non-empty; a label whose side disagrees
// with the speaker is kept (source annotations may disagree) and surfaced
// as a warning at ingestion time.
struct Utterance {
    Speaker speaker = Speaker::User;
    std::optional<std::string> text;
    std::vector<Label> labels;
};

struct Conversation {
    std::string id;
    std::vector<Utterance> utterances;
    std::optional<bool> gold_success;
};

// A conversation reduced to its event classes. START/END are implicit;
// they never appear among `events`.
struct Trace {
    std::string conversation_id;
    std::vector<EventClass> events;
};

// Which label layer the events of a log carry.
//   Core:   bare Q/R/F/A
//   Fine:   QRFA labels, sublabels permitted
//   Source: raw source-label strings, untouched by any mapping
enum class LabelLayer : unsigned char { Core, Fine, Source };

std::string_view to_string(LabelLayer layer);
std::optional<LabelLayer> parse_layer(std::string_view s);

struct EventLog {
    std::vector<Trace> traces;
    LabelLayer layer = LabelLayer::Core;
};

enum class MultiLabelPolicy : unsigned char { Expand, First };

std::string_view to_string(MultiLabelPolicy p);
std::optional<MultiLabelPolicy> parse_multilabel_policy(std::string_view s);

struct ReduceOptions {
    LabelLayer layer = LabelLayer::Fine;
    MultiLabelPolicy policy = MultiLabelPolicy::Expand;
    // Collapse consecutive identical labels within one utterance after
    // layer projection (off by default: duplicates change trace lengths).
    bool dedup_within_utterance = false;
};

// One trace per conversation, conversation order preserved. Under Expand
// an utterance with k labels yields k consecutive events in annotation
// order; under First only the first label is used. Core layer strips
// sublabels. Throws Error(Usage) when layer is Source (reduction is
// defined on QRFA labels only).
EventLog reduce_to_log(const std::vector<Conversation>& conversations,
                       const ReduceOptions& options);
EventLog reduce_to_log(const std::vector<Conversation>& conversations,
                       LabelLayer layer, MultiLabelPolicy policy);

struct LogStatistics {
    std::uint64_t dialogues = 0;
    std::uint64_t utterances = 0;       // events, one per recorded label
    std::uint64_t distinct_labels = 0;  // distinct event classes at the log's layer
};

LogStatistics log_statistics(const EventLog& log);

} // namespace convmine

#endif
