#include "convmine/log.hpp"

#include <set>

#include "convmine/error.hpp"

namespace convmine {

std::string_view to_string(LabelLayer layer) {
    switch (layer) {
        case LabelLayer::Core: return "core";
        case LabelLayer::Fine: return "fine";
        case LabelLayer::Source: return "source";
    }
    return "?";
}

std::optional<LabelLayer> parse_layer(std::string_view s) {
    if (s == "core") return LabelLayer::Core;
    if (s == "fine") return LabelLayer::Fine;
    if (s == "source") return LabelLayer::Source;
    return std::nullopt;
}

std::string_view to_string(MultiLabelPolicy p) {
    return p == MultiLabelPolicy::Expand ? "expand" : "first";
}

std::optional<MultiLabelPolicy> parse_multilabel_policy(std::string_view s) {
    if (s == "expand") return MultiLabelPolicy::Expand;
    if (s == "first") return MultiLabelPolicy::First;
    return std::nullopt;
}

EventLog reduce_to_log(const std::vector<Conversation>& conversations,
                       const ReduceOptions& options) {
    if (options.layer == LabelLayer::Source) {
        throw Error(ErrorKind::Usage, "reduce_to_log: layer must be core or fine");
    }
    EventLog log;
    log.layer = options.layer;
    log.traces.reserve(conversations.size());
    for (const auto& conversation : conversations) {
        if (conversation.utterances.empty()) {
            throw Error(ErrorKind::Data,
                        "empty conversation: " + conversation.id);
        }
        Trace trace;
        trace.conversation_id = conversation.id;
        for (const auto& utterance : conversation.utterances) {
            if (utterance.labels.empty()) {
                throw Error(ErrorKind::Data,
                            "utterance without labels in conversation " + conversation.id);
            }
            std::size_t take = options.policy == MultiLabelPolicy::First
                                   ? 1
                                   : utterance.labels.size();
            std::optional<Label> previous;
            for (std::size_t i = 0; i < take; ++i) {
                Label label = utterance.labels[i];
                if (options.layer == LabelLayer::Core) label = label.stripped();
                if (options.dedup_within_utterance && previous && *previous == label) {
                    continue;
                }
                previous = label;
                trace.events.push_back(EventClass::of(label));
            }
        }
        log.traces.push_back(std::move(trace));
    }
    return log;
}

EventLog reduce_to_log(const std::vector<Conversation>& conversations,
                       LabelLayer layer, MultiLabelPolicy policy) {
    ReduceOptions options;
    options.layer = layer;
    options.policy = policy;
    return reduce_to_log(conversations, options);
}

LogStatistics log_statistics(const EventLog& log) {
    LogStatistics stats;
    stats.dialogues = log.traces.size();
    std::set<EventClass> distinct;
    for (const auto& trace : log.traces) {
        stats.utterances += trace.events.size();
        distinct.insert(trace.events.begin(), trace.events.end());
    }
    stats.distinct_labels = distinct.size();
    return stats;
}

} // namespace convmine
