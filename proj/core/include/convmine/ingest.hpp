#ifndef convmine_ingest_hpp
#define convmine_ingest_hpp

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "convmine/labels.hpp"
#include "convmine/log.hpp"

namespace convmine {

struct RawUtterance {
    Speaker speaker = Speaker::User;
    std::optional<std::string> text;
    std::vector<std::string> labels;
};

struct RawConversation {
    std::string id;
    std::optional<bool> gold_success;
    std::vector<RawUtterance> utterances;
};

enum class TranscriptFormat : unsigned char { Jsonl, Csv };

std::optional<TranscriptFormat> parse_transcript_format(std::string_view s);

// One RawConversation per input record, file order preserved. Errors carry
// the offending line number; duplicate conversation ids and empty
// conversations are rejected.
std::vector<RawConversation> parse_transcripts(const std::filesystem::path& path,
                                               TranscriptFormat format);
std::vector<RawConversation> parse_transcripts(std::istream& in, TranscriptFormat format,
                                               const std::string& source_name);

enum class UnmappedPolicy : unsigned char { Error, DropEvent, DropTrace };

std::string_view to_string(UnmappedPolicy p);
std::optional<UnmappedPolicy> parse_unmapped_policy(std::string_view s);

// Normalization of one annotation scheme onto the QRFA schema. Keys are
// source-label strings, matched exactly after whitespace trimming; a key
// may carry a "user:" or "agent:" prefix where the source scheme reuses
// one label name in both roles. Lookup prefers the speaker-qualified key.
struct MappingTable {
    std::string scheme_name;
    std::map<std::string, Label> entries;
    UnmappedPolicy unmapped_policy = UnmappedPolicy::Error;

    const Label* lookup(Speaker speaker, std::string_view source_label) const;
};

// Mapping CSV: header `source_label,core,sub`; core in {Q,R,F,A}, sub empty
// or a valid sublabel of core. Rejects duplicates and invalid pairs, naming
// the offending row.
MappingTable parse_mapping(const std::filesystem::path& path);
MappingTable parse_mapping(std::istream& in, std::string scheme_name);

// Mapping tables shipped with the library: cor, scs, ode, dstc1, dstc2.
std::vector<std::string> builtin_mapping_names();
bool is_builtin_mapping(std::string_view name);
MappingTable builtin_mapping(std::string_view name);
std::string_view builtin_mapping_csv(std::string_view name);

struct UnmappedReport {
    std::string source_label;
    std::string conversation_id;
    std::size_t utterance_index = 0;  // 0-based position within the conversation
    std::size_t label_index = 0;      // 0-based position within the utterance
};

struct SideMismatch {
    std::string conversation_id;
    std::size_t utterance_index = 0;
    Label label;
    Speaker speaker = Speaker::User;
};

struct IngestResult {
    std::vector<Conversation> conversations;
    std::vector<UnmappedReport> unmapped;
    std::vector<SideMismatch> side_mismatches;
    std::uint64_t dropped_utterances = 0;
    std::uint64_t dropped_conversations = 0;
};

// Replace every source label by its QRFA label. Unmapped labels follow
// table.unmapped_policy; every unmapped occurrence is recorded. Under
// DropEvent an utterance that loses all labels is dropped (and counted);
// a conversation that loses all utterances is dropped likewise.
IngestResult apply_mapping(const std::vector<RawConversation>& raw,
                           const MappingTable& table);

// For transcripts that already carry canonical QRFA labels ("Q",
// "A.Results", ...). Unparseable labels are a data error.
IngestResult to_conversations(const std::vector<RawConversation>& raw);

// Keep raw source labels as event classes (layer = Source). Used for
// dataset statistics and source-level discovery.
EventLog source_layer_log(const std::vector<RawConversation>& raw,
                          MultiLabelPolicy policy = MultiLabelPolicy::Expand);

LogStatistics raw_statistics(const std::vector<RawConversation>& raw);

// Normalized transcript JSONL, the same schema parse_transcripts reads.
// parse(write(x)) == x on normalized conversations.
void write_transcripts(std::ostream& out, const std::vector<Conversation>& conversations);

std::map<std::string, bool> gold_from_conversations(const std::vector<Conversation>& conversations);

// Sidecar gold CSV: header `conversation_id,success`, success in
// {true,false,1,0}.
std::map<std::string, bool> parse_gold_csv(const std::filesystem::path& path);

} // namespace convmine

#endif
