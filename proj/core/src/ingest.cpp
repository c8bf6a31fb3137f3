#include "convmine/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "convmine/error.hpp"
#include "csv.hpp"

namespace convmine {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

[[noreturn]] void data_error(const std::string& source, std::size_t line, const std::string& what) {
    throw Error(ErrorKind::Data, source + ":" + std::to_string(line) + ": " + what);
}

RawUtterance utterance_from_json(const json& j, const std::string& source, std::size_t line) {
    if (!j.is_object()) data_error(source, line, "utterance is not an object");
    RawUtterance utterance;
    auto speaker_it = j.find("speaker");
    if (speaker_it == j.end() || !speaker_it->is_string()) {
        data_error(source, line, "utterance missing \"speaker\"");
    }
    auto speaker = parse_speaker(speaker_it->get<std::string>());
    if (!speaker) data_error(source, line, "speaker must be \"user\" or \"agent\"");
    utterance.speaker = *speaker;
    if (auto text_it = j.find("text"); text_it != j.end() && !text_it->is_null()) {
        if (!text_it->is_string()) data_error(source, line, "\"text\" must be a string or null");
        utterance.text = text_it->get<std::string>();
    }
    auto labels_it = j.find("labels");
    if (labels_it == j.end() || !labels_it->is_array()) {
        data_error(source, line, "utterance missing \"labels\" array");
    }
    for (const auto& label : *labels_it) {
        if (!label.is_string()) data_error(source, line, "labels must be strings");
        utterance.labels.push_back(label.get<std::string>());
    }
    if (utterance.labels.empty()) data_error(source, line, "utterance without labels");
    return utterance;
}

std::vector<RawConversation> parse_jsonl(std::istream& in, const std::string& source) {
    std::vector<RawConversation> conversations;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            data_error(source, line_number, std::string("malformed JSON: ") + e.what());
        }
        if (!record.is_object()) data_error(source, line_number, "record is not an object");
        RawConversation conversation;
        auto id_it = record.find("id");
        if (id_it == record.end() || !id_it->is_string()) {
            data_error(source, line_number, "record missing \"id\"");
        }
        conversation.id = id_it->get<std::string>();
        if (!seen_ids.insert(conversation.id).second) {
            data_error(source, line_number, "duplicate conversation id \"" + conversation.id + "\"");
        }
        if (auto s = record.find("success"); s != record.end() && !s->is_null()) {
            if (!s->is_boolean()) data_error(source, line_number, "\"success\" must be boolean or null");
            conversation.gold_success = s->get<bool>();
        }
        auto utterances_it = record.find("utterances");
        if (utterances_it == record.end() || !utterances_it->is_array()) {
            data_error(source, line_number, "record missing \"utterances\" array");
        }
        for (const auto& u : *utterances_it) {
            conversation.utterances.push_back(utterance_from_json(u, source, line_number));
        }
        if (conversation.utterances.empty()) data_error(source, line_number, "empty conversation");
        conversations.push_back(std::move(conversation));
    }
    return conversations;
}

std::vector<std::string> split_labels(const std::string& field) {
    std::vector<std::string> labels;
    std::string current;
    std::istringstream ss(field);
    while (std::getline(ss, current, '|')) {
        auto trimmed = trim(current);
        if (!trimmed.empty()) labels.push_back(std::move(trimmed));
    }
    return labels;
}

std::vector<RawConversation> parse_csv_transcripts(std::istream& in, const std::string& source) {
    auto rows = csv::read(in);
    if (rows.empty()) return {};
    const std::vector<std::string> expected{"conversation_id", "turn_index", "speaker",
                                            "labels",          "text",       "success"};
    if (rows.front().fields != expected) {
        data_error(source, rows.front().line,
                   "expected header conversation_id,turn_index,speaker,labels,text,success");
    }

    std::vector<RawConversation> conversations;
    std::set<std::string> finished_ids;
    long long previous_turn = -1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != expected.size()) {
            data_error(source, row.line, "expected 6 columns, got " + std::to_string(row.fields.size()));
        }
        const std::string id = trim(row.fields[0]);
        if (id.empty()) data_error(source, row.line, "empty conversation_id");
        long long turn = 0;
        try {
            turn = std::stoll(trim(row.fields[1]));
        } catch (const std::exception&) {
            data_error(source, row.line, "turn_index is not an integer");
        }
        if (conversations.empty() || conversations.back().id != id) {
            if (!finished_ids.insert(id).second) {
                data_error(source, row.line, "duplicate conversation id \"" + id + "\"");
            }
            conversations.emplace_back();
            conversations.back().id = id;
            previous_turn = -1;
        }
        if (turn <= previous_turn) {
            data_error(source, row.line, "turn_index not increasing within conversation \"" + id + "\"");
        }
        previous_turn = turn;
        RawUtterance utterance;
        auto speaker = parse_speaker(trim(row.fields[2]));
        if (!speaker) data_error(source, row.line, "speaker must be \"user\" or \"agent\"");
        utterance.speaker = *speaker;
        utterance.labels = split_labels(row.fields[3]);
        if (utterance.labels.empty()) data_error(source, row.line, "utterance without labels");
        if (!row.fields[4].empty()) utterance.text = row.fields[4];
        const std::string success = trim(row.fields[5]);
        if (!success.empty()) {
            bool value = false;
            if (success == "true" || success == "1") value = true;
            else if (success == "false" || success == "0") value = false;
            else data_error(source, row.line, "success must be true/false/1/0 or empty");
            auto& conversation = conversations.back();
            if (conversation.gold_success && *conversation.gold_success != value) {
                data_error(source, row.line, "conflicting success values for \"" + id + "\"");
            }
            conversation.gold_success = value;
        }
        conversations.back().utterances.push_back(std::move(utterance));
    }
    return conversations;
}

} // namespace

std::optional<TranscriptFormat> parse_transcript_format(std::string_view s) {
    if (s == "jsonl") return TranscriptFormat::Jsonl;
    if (s == "csv") return TranscriptFormat::Csv;
    return std::nullopt;
}

std::vector<RawConversation> parse_transcripts(std::istream& in, TranscriptFormat format,
                                               const std::string& source_name) {
    return format == TranscriptFormat::Jsonl ? parse_jsonl(in, source_name)
                                             : parse_csv_transcripts(in, source_name);
}

std::vector<RawConversation> parse_transcripts(const std::filesystem::path& path,
                                               TranscriptFormat format) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Usage, "cannot open transcript file: " + path.string());
    return parse_transcripts(in, format, path.string());
}

std::string_view to_string(UnmappedPolicy p) {
    switch (p) {
        case UnmappedPolicy::Error: return "error";
        case UnmappedPolicy::DropEvent: return "drop_event";
        case UnmappedPolicy::DropTrace: return "drop_trace";
    }
    return "?";
}

std::optional<UnmappedPolicy> parse_unmapped_policy(std::string_view s) {
    if (s == "error") return UnmappedPolicy::Error;
    if (s == "drop_event") return UnmappedPolicy::DropEvent;
    if (s == "drop_trace") return UnmappedPolicy::DropTrace;
    return std::nullopt;
}

const Label* MappingTable::lookup(Speaker speaker, std::string_view source_label) const {
    std::string key = std::string(to_string(speaker)) + ":" + std::string(source_label);
    if (auto it = entries.find(key); it != entries.end()) return &it->second;
    if (auto it = entries.find(std::string(source_label)); it != entries.end()) return &it->second;
    return nullptr;
}

MappingTable parse_mapping(std::istream& in, std::string scheme_name) {
    auto rows = csv::read(in);
    if (rows.empty()) throw Error(ErrorKind::Data, scheme_name + ": empty mapping file");
    const std::vector<std::string> expected{"source_label", "core", "sub"};
    if (rows.front().fields != expected) {
        data_error(scheme_name, rows.front().line, "expected header source_label,core,sub");
    }
    MappingTable table;
    table.scheme_name = std::move(scheme_name);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 3) {
            data_error(table.scheme_name, row.line, "expected 3 columns");
        }
        const std::string source_label = trim(row.fields[0]);
        const std::string core_text = trim(row.fields[1]);
        const std::string sub_text = trim(row.fields[2]);
        if (source_label.empty()) data_error(table.scheme_name, row.line, "empty source_label");
        auto core = parse_core_label(core_text);
        if (!core) {
            data_error(table.scheme_name, row.line,
                       "unknown core label \"" + core_text + "\" for \"" + source_label + "\"");
        }
        Label label = Label::of(*core);
        if (!sub_text.empty()) {
            auto sub = parse_sub_label(sub_text);
            if (!sub) {
                data_error(table.scheme_name, row.line,
                           "unknown sublabel \"" + sub_text + "\" for \"" + source_label + "\"");
            }
            if (!valid_under(*core, *sub)) {
                data_error(table.scheme_name, row.line,
                           sub_text + " is not a sublabel of " + core_text +
                               " (source label \"" + source_label + "\")");
            }
            label = Label::of(*core, *sub);
        }
        if (!table.entries.emplace(source_label, label).second) {
            data_error(table.scheme_name, row.line,
                       "duplicate source label \"" + source_label + "\"");
        }
    }
    return table;
}

MappingTable parse_mapping(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Usage, "cannot open mapping file: " + path.string());
    return parse_mapping(in, path.string());
}

namespace {

// Shared skeleton for mapped and canonical conversion. `map_label` returns
// the label or nullopt for an unmapped/invalid source label.
template <typename MapLabel>
IngestResult convert(const std::vector<RawConversation>& raw, UnmappedPolicy policy,
                     MapLabel&& map_label) {
    IngestResult result;
    for (const auto& raw_conversation : raw) {
        Conversation conversation;
        conversation.id = raw_conversation.id;
        conversation.gold_success = raw_conversation.gold_success;
        std::vector<UnmappedReport> unmapped_here;
        for (std::size_t u = 0; u < raw_conversation.utterances.size(); ++u) {
            const auto& raw_utterance = raw_conversation.utterances[u];
            Utterance utterance;
            utterance.speaker = raw_utterance.speaker;
            utterance.text = raw_utterance.text;
            for (std::size_t l = 0; l < raw_utterance.labels.size(); ++l) {
                const std::string source_label = trim(raw_utterance.labels[l]);
                std::optional<Label> label = map_label(raw_utterance.speaker, source_label);
                if (!label) {
                    UnmappedReport report{source_label, raw_conversation.id, u, l};
                    if (policy == UnmappedPolicy::Error) {
                        throw Error(ErrorKind::Data,
                                    "unmapped label \"" + source_label + "\" in conversation \"" +
                                        raw_conversation.id + "\", utterance " + std::to_string(u) +
                                        ", label " + std::to_string(l));
                    }
                    unmapped_here.push_back(std::move(report));
                    continue;
                }
                if (side_of(label->core) != raw_utterance.speaker) {
                    result.side_mismatches.push_back(
                        SideMismatch{raw_conversation.id, u, *label, raw_utterance.speaker});
                }
                utterance.labels.push_back(*label);
            }
            if (utterance.labels.empty()) {
                ++result.dropped_utterances;
                continue;
            }
            conversation.utterances.push_back(std::move(utterance));
        }
        bool drop_conversation =
            (policy == UnmappedPolicy::DropTrace && !unmapped_here.empty()) ||
            conversation.utterances.empty();
        result.unmapped.insert(result.unmapped.end(), unmapped_here.begin(), unmapped_here.end());
        if (drop_conversation) {
            ++result.dropped_conversations;
            continue;
        }
        result.conversations.push_back(std::move(conversation));
    }
    return result;
}

} // namespace

IngestResult apply_mapping(const std::vector<RawConversation>& raw, const MappingTable& table) {
    return convert(raw, table.unmapped_policy,
                   [&table](Speaker speaker, const std::string& source_label) {
                       const Label* label = table.lookup(speaker, source_label);
                       return label ? std::optional<Label>(*label) : std::nullopt;
                   });
}

IngestResult to_conversations(const std::vector<RawConversation>& raw) {
    return convert(raw, UnmappedPolicy::Error,
                   [](Speaker, const std::string& source_label) {
                       return Label::parse(source_label);
                   });
}

EventLog source_layer_log(const std::vector<RawConversation>& raw, MultiLabelPolicy policy) {
    EventLog log;
    log.layer = LabelLayer::Source;
    log.traces.reserve(raw.size());
    for (const auto& conversation : raw) {
        Trace trace;
        trace.conversation_id = conversation.id;
        for (const auto& utterance : conversation.utterances) {
            std::size_t take =
                policy == MultiLabelPolicy::First ? 1 : utterance.labels.size();
            take = std::min(take, utterance.labels.size());
            for (std::size_t i = 0; i < take; ++i) {
                auto event = EventClass::named(trim(utterance.labels[i]));
                if (event.is_marker()) {
                    throw Error(ErrorKind::Data, "reserved label \"" + event.name() +
                                                     "\" in conversation \"" + conversation.id + "\"");
                }
                trace.events.push_back(std::move(event));
            }
        }
        if (trace.events.empty()) {
            throw Error(ErrorKind::Data, "empty conversation: " + conversation.id);
        }
        log.traces.push_back(std::move(trace));
    }
    return log;
}

LogStatistics raw_statistics(const std::vector<RawConversation>& raw) {
    LogStatistics stats;
    stats.dialogues = raw.size();
    // Distinct labels are counted per role: source schemes may reuse one
    // name on both sides (SCS "Confirms").
    std::set<std::pair<Speaker, std::string>> distinct;
    for (const auto& conversation : raw) {
        stats.utterances += conversation.utterances.size();
        for (const auto& utterance : conversation.utterances) {
            for (const auto& label : utterance.labels) {
                distinct.insert({utterance.speaker, trim(label)});
            }
        }
    }
    stats.distinct_labels = distinct.size();
    return stats;
}

void write_transcripts(std::ostream& out, const std::vector<Conversation>& conversations) {
    for (const auto& conversation : conversations) {
        json record;
        record["id"] = conversation.id;
        record["success"] =
            conversation.gold_success ? json(*conversation.gold_success) : json(nullptr);
        json utterances = json::array();
        for (const auto& utterance : conversation.utterances) {
            json u;
            u["speaker"] = std::string(to_string(utterance.speaker));
            u["text"] = utterance.text ? json(*utterance.text) : json(nullptr);
            json labels = json::array();
            for (const auto& label : utterance.labels) labels.push_back(label.str());
            u["labels"] = std::move(labels);
            utterances.push_back(std::move(u));
        }
        record["utterances"] = std::move(utterances);
        out << record.dump() << '\n';
    }
}

std::map<std::string, bool> gold_from_conversations(const std::vector<Conversation>& conversations) {
    std::map<std::string, bool> gold;
    for (const auto& conversation : conversations) {
        if (conversation.gold_success) gold[conversation.id] = *conversation.gold_success;
    }
    return gold;
}

std::map<std::string, bool> parse_gold_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Usage, "cannot open gold file: " + path.string());
    auto rows = csv::read(in);
    const std::vector<std::string> expected{"conversation_id", "success"};
    if (rows.empty() || rows.front().fields != expected) {
        throw Error(ErrorKind::Data, path.string() + ": expected header conversation_id,success");
    }
    std::map<std::string, bool> gold;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 2) data_error(path.string(), row.line, "expected 2 columns");
        const std::string id = trim(row.fields[0]);
        const std::string value = trim(row.fields[1]);
        bool success = false;
        if (value == "true" || value == "1") success = true;
        else if (value == "false" || value == "0") success = false;
        else data_error(path.string(), row.line, "success must be true/false/1/0");
        if (!gold.emplace(id, success).second) {
            data_error(path.string(), row.line, "duplicate conversation id \"" + id + "\"");
        }
    }
    return gold;
}

} // namespace convmine
