// convmine: conversation process-mining toolkit CLI.
//
// Subcommands: ingest, discover, check, evaluate, generate, model,
// mapping, pipeline. Exit codes: 0 ok, 1 usage/config, 2 data, 3 model.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "convmine/conformance.hpp"
#include "convmine/discovery.hpp"
#include "convmine/error.hpp"
#include "convmine/evaluation.hpp"
#include "convmine/ingest.hpp"
#include "convmine/model.hpp"

namespace fs = std::filesystem;
using namespace convmine;

namespace {

constexpr std::uint64_t kDefaultSeed = 17;

struct OutputPolicy {
    bool force = false;
};

void write_file(const fs::path& path, const std::string& content, const OutputPolicy& policy) {
    if (!policy.force && fs::exists(path)) {
        throw Error(ErrorKind::Usage,
                    "refusing to overwrite " + path.string() + " (use --force)");
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Usage, "cannot write " + path.string());
    out << content;
}

void emit(const std::string& output_path, const std::string& content,
          const OutputPolicy& policy) {
    if (output_path.empty() || output_path == "-") {
        std::cout << content;
    } else {
        write_file(output_path, content, policy);
    }
}

TranscriptFormat format_from(const std::string& name, const std::string& input) {
    if (!name.empty()) {
        auto format = parse_transcript_format(name);
        if (!format) throw Error(ErrorKind::Usage, "unknown format: " + name);
        return *format;
    }
    return input.size() >= 4 && input.substr(input.size() - 4) == ".csv"
               ? TranscriptFormat::Csv
               : TranscriptFormat::Jsonl;
}

LabelLayer layer_from(const std::string& name) {
    auto layer = parse_layer(name);
    if (!layer) throw Error(ErrorKind::Usage, "unknown layer: " + name);
    return *layer;
}

MultiLabelPolicy multilabel_from(const std::string& name) {
    auto policy = parse_multilabel_policy(name);
    if (!policy) throw Error(ErrorKind::Usage, "unknown multilabel policy: " + name);
    return *policy;
}

// --mapping accepts: builtin:NAME, a CSV path, "qrfa" (labels already
// canonical), or "source" (keep raw labels untouched).
struct MappingChoice {
    enum class Kind { Builtin, File, Canonical, Source } kind = Kind::Canonical;
    std::string value;
};

MappingChoice mapping_from(const std::string& spec) {
    MappingChoice choice;
    if (spec.empty() || spec == "qrfa") {
        choice.kind = MappingChoice::Kind::Canonical;
    } else if (spec == "source") {
        choice.kind = MappingChoice::Kind::Source;
    } else if (spec.rfind("builtin:", 0) == 0) {
        choice.kind = MappingChoice::Kind::Builtin;
        choice.value = spec.substr(8);
        if (!is_builtin_mapping(choice.value)) {
            throw Error(ErrorKind::Usage, "unknown builtin mapping: " + choice.value);
        }
    } else {
        choice.kind = MappingChoice::Kind::File;
        choice.value = spec;
    }
    return choice;
}

ModelDefinition model_from(const std::string& spec) {
    if (is_builtin_model(spec)) return builtin_model(spec);
    return load_model(spec);
}

struct IngestFlags {
    std::string input;
    std::string format;
    std::string mapping = "qrfa";
    std::string unmapped;
    std::string layer = "fine";
    std::string multilabel = "expand";
    bool dedup_labels = false;
};

struct IngestOutcome {
    std::vector<RawConversation> raw;
    std::vector<Conversation> conversations;  // empty for source mapping
    EventLog log;
    IngestResult details;
    bool source_layer = false;
};

IngestOutcome run_ingest_stage(const IngestFlags& flags) {
    IngestOutcome outcome;
    outcome.raw = parse_transcripts(flags.input, format_from(flags.format, flags.input));
    auto choice = mapping_from(flags.mapping);

    if (choice.kind == MappingChoice::Kind::Source) {
        outcome.source_layer = true;
        outcome.log = source_layer_log(outcome.raw, multilabel_from(flags.multilabel));
        return outcome;
    }

    if (choice.kind == MappingChoice::Kind::Canonical) {
        outcome.details = to_conversations(outcome.raw);
    } else {
        MappingTable table = choice.kind == MappingChoice::Kind::Builtin
                                 ? builtin_mapping(choice.value)
                                 : parse_mapping(fs::path(choice.value));
        if (!flags.unmapped.empty()) {
            auto policy = parse_unmapped_policy(flags.unmapped);
            if (!policy) throw Error(ErrorKind::Usage, "unknown unmapped policy: " + flags.unmapped);
            table.unmapped_policy = *policy;
        }
        outcome.details = apply_mapping(outcome.raw, table);
    }
    outcome.conversations = outcome.details.conversations;

    ReduceOptions reduce;
    reduce.layer = layer_from(flags.layer);
    reduce.policy = multilabel_from(flags.multilabel);
    reduce.dedup_within_utterance = flags.dedup_labels;
    if (reduce.layer == LabelLayer::Source) {
        throw Error(ErrorKind::Usage, "--layer source requires --mapping source");
    }
    if (reduce.layer == LabelLayer::Core) {
        // strip sublabels in the normalized transcript as well
        for (auto& conversation : outcome.conversations) {
            for (auto& utterance : conversation.utterances) {
                for (auto& label : utterance.labels) label = label.stripped();
            }
        }
    }
    outcome.log = reduce_to_log(outcome.conversations, reduce);
    return outcome;
}

std::string statistics_block(const IngestOutcome& outcome, const IngestFlags& flags) {
    std::ostringstream out;
    auto raw = raw_statistics(outcome.raw);
    out << "dataset statistics\n";
    out << "  dialogues        " << raw.dialogues << "\n";
    out << "  utterances       " << raw.utterances << "\n";
    out << "  distinct labels  " << raw.distinct_labels << "\n";
    auto log = log_statistics(outcome.log);
    out << "event log (layer=" << to_string(outcome.log.layer)
        << ", multilabel=" << flags.multilabel << ")\n";
    out << "  traces           " << log.dialogues << "\n";
    out << "  events           " << log.utterances << "\n";
    out << "  distinct classes " << log.distinct_labels << "\n";
    if (!outcome.source_layer) {
        out << "mapping\n";
        out << "  unmapped occurrences   " << outcome.details.unmapped.size() << "\n";
        out << "  dropped utterances     " << outcome.details.dropped_utterances << "\n";
        out << "  dropped conversations  " << outcome.details.dropped_conversations << "\n";
        out << "  side mismatches        " << outcome.details.side_mismatches.size() << "\n";
        std::map<std::string, std::uint64_t> unmapped_counts;
        for (const auto& report : outcome.details.unmapped) ++unmapped_counts[report.source_label];
        for (const auto& [label, count] : unmapped_counts) {
            out << "  unmapped label \"" << label << "\" x" << count << "\n";
        }
    }
    return out.str();
}

int cmd_ingest(const IngestFlags& flags, const std::string& output, const OutputPolicy& policy) {
    auto outcome = run_ingest_stage(flags);
    if (outcome.source_layer) {
        throw Error(ErrorKind::Usage,
                    "ingest writes normalized transcripts; --mapping source is for discover");
    }
    std::ostringstream normalized;
    write_transcripts(normalized, outcome.conversations);
    if (!output.empty()) write_file(output, normalized.str(), policy);
    std::cout << statistics_block(outcome, flags);
    for (const auto& mismatch : outcome.details.side_mismatches) {
        std::cerr << "warning: label " << mismatch.label.str() << " spoken by "
                  << to_string(mismatch.speaker) << " in conversation \""
                  << mismatch.conversation_id << "\" utterance " << mismatch.utterance_index
                  << "\n";
    }
    return 0;
}

struct DiscoverFlags {
    IngestFlags ingest;
    std::string graph_out, dot_out, succession_out, episodes_out, model_out;
    std::size_t max_len = 4;
    std::uint64_t min_support = 1;
    bool count_occurrences = false;
    std::uint64_t min_edge_freq = 1;
};

int cmd_discover(const DiscoverFlags& flags, const OutputPolicy& policy) {
    auto outcome = run_ingest_stage(flags.ingest);
    const auto& log = outcome.log;

    auto graph = directly_follows(log);
    if (!flags.graph_out.empty()) {
        write_file(flags.graph_out, to_json(graph).dump(2) + "\n", policy);
    }
    if (!flags.dot_out.empty()) {
        write_file(flags.dot_out, to_dot(graph), policy);
    }
    if (!flags.succession_out.empty()) {
        write_file(flags.succession_out, to_json(mine_succession(log)).dump(2) + "\n", policy);
    }
    if (!flags.episodes_out.empty()) {
        auto counting = flags.count_occurrences ? EpisodeCounting::Occurrences
                                                : EpisodeCounting::TraceSupport;
        auto episodes = mine_episodes(log, flags.max_len, flags.min_support, counting);
        write_file(flags.episodes_out, to_json(episodes).dump(2) + "\n", policy);
    }
    if (!flags.model_out.empty()) {
        PruneReport prune;
        auto def = from_transition_graph(graph, flags.min_edge_freq, &prune);
        write_file(flags.model_out, to_json(def).dump(2) + "\n", policy);
        for (const auto& node : prune.pruned_nodes) {
            std::cerr << "warning: pruned node " << node.name()
                      << " (off every START-to-END path at threshold " << flags.min_edge_freq
                      << ")\n";
        }
    }
    std::cout << "traces " << log.traces.size() << ", directly-follows edges "
              << graph.edges.size() << "\n";
    return 0;
}

struct CheckFlags {
    IngestFlags ingest;
    std::string model = "qrfa";
    std::string report = "md";
    unsigned threads = 0;
};

FitnessReport run_check_stage(const CheckFlags& flags, IngestFlags ingest_flags) {
    auto def = model_from(flags.model);
    if (ingest_flags.layer.empty()) ingest_flags.layer = to_string(def.layer);
    auto outcome = run_ingest_stage(ingest_flags);
    ProcessNet net = from_definition(def);
    LogFitnessOptions options;
    options.threads = flags.threads;
    return log_fitness(outcome.log, net, options);
}

int cmd_check(const CheckFlags& flags, const std::string& output, const OutputPolicy& policy) {
    auto report = run_check_stage(flags, flags.ingest);
    if (flags.report == "json") {
        emit(output, to_json(report).dump(2) + "\n", policy);
    } else if (flags.report == "md") {
        emit(output, to_table(report), policy);
    } else {
        throw Error(ErrorKind::Usage, "unknown report format: " + flags.report);
    }
    return 0;
}

struct EvaluateFlags {
    std::vector<std::string> logs;    // NAME=PATH
    std::vector<std::string> models;  // NAME or NAME=SPEC
    std::vector<std::string> gold;    // NAME=PATH sidecars
    std::string format;
    std::string multilabel = "expand";
    std::string report = "md";
    double threshold = 1.0;
    unsigned threads = 0;
};

std::pair<std::string, std::string> split_named(const std::string& item, const char* what) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorKind::Usage, std::string(what) + " must be NAME=PATH: " + item);
    }
    return {item.substr(0, eq), item.substr(eq + 1)};
}

int cmd_evaluate(const EvaluateFlags& flags, const std::string& output,
                 const OutputPolicy& policy) {
    if (flags.logs.empty()) throw Error(ErrorKind::Usage, "evaluate needs at least one --log");
    if (flags.models.empty()) throw Error(ErrorKind::Usage, "evaluate needs at least one --model");

    std::map<std::string, std::map<std::string, bool>> sidecars;
    for (const auto& item : flags.gold) {
        auto [name, path] = split_named(item, "--gold");
        sidecars[name] = parse_gold_csv(path);
    }

    std::map<std::string, LabeledConversations> datasets;
    for (const auto& item : flags.logs) {
        auto [name, path] = split_named(item, "--log");
        auto raw = parse_transcripts(path, format_from(flags.format, path));
        LabeledConversations labeled;
        labeled.conversations = to_conversations(raw).conversations;
        auto gold = gold_from_conversations(labeled.conversations);
        if (auto it = sidecars.find(name); it != sidecars.end()) {
            for (const auto& [id, success] : it->second) gold[id] = success;
        }
        if (!gold.empty()) labeled.gold = std::move(gold);
        datasets.emplace(name, std::move(labeled));
    }

    std::map<std::string, ModelDefinition> models;
    for (const auto& item : flags.models) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            models.emplace(item, model_from(item));
        } else {
            models.emplace(item.substr(0, eq), model_from(item.substr(eq + 1)));
        }
    }

    DatasetReportOptions options;
    options.success_threshold = flags.threshold;
    options.fitness.threads = flags.threads;
    auto report = dataset_report(datasets, models, multilabel_from(flags.multilabel), options);

    if (flags.report == "json") {
        emit(output, to_json(report).dump(2) + "\n", policy);
    } else if (flags.report == "md") {
        emit(output, to_markdown(report), policy);
    } else {
        throw Error(ErrorKind::Usage, "unknown report format: " + flags.report);
    }
    return 0;
}

struct GenerateFlags {
    std::string model = "qrfa";
    std::size_t count = 100;
    std::size_t max_len = 24;
    std::uint64_t seed = kDefaultSeed;
};

int cmd_generate(const GenerateFlags& flags, const std::string& output,
                 const OutputPolicy& policy) {
    auto def = model_from(flags.model);
    auto log = generate_traces(def, flags.count, flags.max_len, flags.seed);

    // emit as a normalized transcript: one utterance per event, speaker
    // derived from the label side where known
    std::vector<Conversation> conversations;
    conversations.reserve(log.traces.size());
    for (const auto& trace : log.traces) {
        Conversation conversation;
        conversation.id = trace.conversation_id;
        for (const auto& event : trace.events) {
            Utterance utterance;
            auto label = event.as_label();
            if (!label) {
                throw Error(ErrorKind::Model,
                            "model emits non-QRFA event class " + event.name() +
                                "; transcripts need QRFA labels");
            }
            utterance.speaker = side_of(label->core);
            utterance.labels = {*label};
            conversation.utterances.push_back(std::move(utterance));
        }
        conversations.push_back(std::move(conversation));
    }
    std::ostringstream out;
    write_transcripts(out, conversations);
    emit(output, out.str(), policy);
    return 0;
}

int cmd_model_show(const std::string& spec, const std::string& format, const std::string& output,
                   const OutputPolicy& policy) {
    auto def = model_from(spec);
    if (format == "dot") {
        emit(output, to_dot(def), policy);
    } else if (format == "json") {
        emit(output, to_json(def).dump(2) + "\n", policy);
    } else {
        throw Error(ErrorKind::Usage, "unknown model format: " + format);
    }
    return 0;
}

int cmd_mapping_show(const std::string& name, const std::string& output,
                     const OutputPolicy& policy) {
    if (!is_builtin_mapping(name)) {
        throw Error(ErrorKind::Usage, "unknown builtin mapping: " + name);
    }
    emit(output, std::string(builtin_mapping_csv(name)), policy);
    return 0;
}

// pipeline config: `key = value` lines, # comments. Chains
// ingest -> check -> evaluate over one transcript file.
std::map<std::string, std::string> parse_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Usage, "cannot open config: " + path.string());
    std::map<std::string, std::string> config;
    std::string line;
    std::size_t line_number = 0;
    auto trim = [](std::string s) {
        auto begin = s.find_first_not_of(" \t\r");
        auto end = s.find_last_not_of(" \t\r");
        return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
    };
    while (std::getline(in, line)) {
        ++line_number;
        auto text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Usage, path.string() + ":" + std::to_string(line_number) +
                                              ": expected key = value");
        }
        config[trim(text.substr(0, eq))] = trim(text.substr(eq + 1));
    }
    return config;
}

int cmd_pipeline(const fs::path& config_path, bool force_flag) {
    auto config = parse_config(config_path);
    auto get = [&config](const std::string& key, const std::string& fallback) {
        auto it = config.find(key);
        return it == config.end() ? fallback : it->second;
    };
    auto require = [&config, &config_path](const std::string& key) {
        auto it = config.find(key);
        if (it == config.end()) {
            throw Error(ErrorKind::Usage, config_path.string() + ": missing key \"" + key + "\"");
        }
        return it->second;
    };

    OutputPolicy policy;
    policy.force = force_flag || get("force", "false") == "true";

    IngestFlags ingest;
    ingest.input = require("input");
    ingest.format = get("format", "");
    ingest.mapping = get("mapping", "qrfa");
    ingest.unmapped = get("unmapped", "");
    ingest.layer = get("layer", "fine");
    ingest.multilabel = get("multilabel", "expand");
    ingest.dedup_labels = get("dedup_labels", "false") == "true";
    const std::string normalized = require("normalized");
    cmd_ingest(ingest, normalized, policy);

    CheckFlags check;
    check.ingest.input = normalized;
    check.ingest.multilabel = ingest.multilabel;
    check.ingest.layer = "";  // follow the model's layer
    check.model = get("check_model", "qrfa");
    check.report = get("check_report_format", "md");
    check.threads = static_cast<unsigned>(std::stoul(get("threads", "0")));
    cmd_check(check, get("check_report", ""), policy);

    EvaluateFlags evaluate;
    const std::string dataset_name = get("dataset_name", "dataset");
    evaluate.logs = {dataset_name + "=" + normalized};
    std::istringstream models(get("models", "qrfa"));
    std::string model;
    while (std::getline(models, model, ',')) {
        if (!model.empty()) evaluate.models.push_back(model);
    }
    if (auto gold = get("gold", ""); !gold.empty()) {
        evaluate.gold = {dataset_name + "=" + gold};
    }
    evaluate.multilabel = ingest.multilabel;
    evaluate.report = get("report_format", "md");
    evaluate.threshold = std::stod(get("threshold", "1"));
    evaluate.threads = check.threads;
    cmd_evaluate(evaluate, get("report", ""), policy);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conversation process mining: event logs, flow models, conformance"};
    app.require_subcommand(1);

    OutputPolicy policy;
    app.add_flag("--force", policy.force, "overwrite existing output files");

    // ingest
    IngestFlags ingest;
    std::string ingest_out;
    auto* ingest_cmd = app.add_subcommand("ingest", "normalize transcripts onto the QRFA schema");
    ingest_cmd->add_option("input", ingest.input, "transcript file")->required();
    ingest_cmd->add_option("--format", ingest.format, "jsonl or csv (default: by extension)");
    ingest_cmd->add_option("--mapping", ingest.mapping,
                           "builtin:NAME, mapping CSV path, or qrfa (already canonical)");
    ingest_cmd->add_option("--unmapped", ingest.unmapped, "error, drop_event, or drop_trace");
    ingest_cmd->add_option("--layer", ingest.layer, "core or fine (default fine)");
    ingest_cmd->add_option("--multilabel", ingest.multilabel, "expand or first");
    ingest_cmd->add_flag("--dedup-labels", ingest.dedup_labels,
                         "collapse repeated identical labels within an utterance");
    ingest_cmd->add_option("-o,--output", ingest_out, "normalized transcript JSONL");

    // discover
    DiscoverFlags discover;
    auto* discover_cmd = app.add_subcommand("discover", "mine flow structure from transcripts");
    discover_cmd->add_option("input", discover.ingest.input, "transcript file")->required();
    discover_cmd->add_option("--format", discover.ingest.format, "jsonl or csv");
    discover_cmd->add_option("--mapping", discover.ingest.mapping,
                             "builtin:NAME, CSV path, qrfa, or source");
    discover_cmd->add_option("--unmapped", discover.ingest.unmapped, "unmapped-label policy");
    discover_cmd->add_option("--layer", discover.ingest.layer, "core, fine, or source");
    discover_cmd->add_option("--multilabel", discover.ingest.multilabel, "expand or first");
    discover_cmd->add_flag("--dedup-labels", discover.ingest.dedup_labels, "");
    discover_cmd->add_option("--graph", discover.graph_out, "directly-follows JSON output");
    discover_cmd->add_option("--dot", discover.dot_out, "directly-follows DOT output");
    discover_cmd->add_option("--succession", discover.succession_out, "succession JSON output");
    discover_cmd->add_option("--episodes", discover.episodes_out, "episodes JSON output");
    discover_cmd->add_option("--max-len", discover.max_len, "episode length cap (default 4)");
    discover_cmd->add_option("--min-support", discover.min_support, "episode support floor");
    discover_cmd->add_flag("--occurrences", discover.count_occurrences,
                           "count episode occurrences instead of trace support");
    discover_cmd->add_option("--model-out", discover.model_out,
                             "thresholded model definition JSON output");
    discover_cmd->add_option("--min-edge-freq", discover.min_edge_freq,
                             "edge frequency floor for --model-out");

    // check
    CheckFlags check;
    std::string check_out;
    auto* check_cmd = app.add_subcommand("check", "conformance of a log against a model");
    check_cmd->add_option("input", check.ingest.input, "transcript file")->required();
    check_cmd->add_option("--format", check.ingest.format, "jsonl or csv");
    check_cmd->add_option("--mapping", check.ingest.mapping, "builtin:NAME, CSV path, or qrfa");
    check_cmd->add_option("--unmapped", check.ingest.unmapped, "unmapped-label policy");
    std::string check_layer;
    check_cmd->add_option("--layer", check_layer, "core or fine (default: the model's layer)");
    check_cmd->add_option("--multilabel", check.ingest.multilabel, "expand or first");
    check_cmd->add_flag("--dedup-labels", check.ingest.dedup_labels, "");
    check_cmd->add_option("--model", check.model, "qrfa, cor, or model JSON path");
    check_cmd->add_option("--report", check.report, "md or json");
    check_cmd->add_option("--threads", check.threads, "alignment worker threads (0 = auto)");
    check_cmd->add_option("-o,--output", check_out, "report output path (default stdout)");

    // evaluate
    EvaluateFlags evaluate;
    std::string evaluate_out;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "fitness and error-detection report");
    evaluate_cmd->add_option("--log", evaluate.logs, "NAME=PATH transcript (repeatable)");
    evaluate_cmd->add_option("--model", evaluate.models,
                             "model name or NAME=PATH (repeatable)");
    evaluate_cmd->add_option("--gold", evaluate.gold, "NAME=PATH gold CSV sidecar (repeatable)");
    evaluate_cmd->add_option("--format", evaluate.format, "jsonl or csv");
    evaluate_cmd->add_option("--multilabel", evaluate.multilabel, "expand or first");
    evaluate_cmd->add_option("--report", evaluate.report, "md or json");
    evaluate_cmd->add_option("--threshold", evaluate.threshold,
                             "success-prediction fitness threshold (default 1.0)");
    evaluate_cmd->add_option("--threads", evaluate.threads, "alignment worker threads");
    evaluate_cmd->add_option("-o,--output", evaluate_out, "report output path (default stdout)");

    // generate
    GenerateFlags generate;
    std::string generate_out;
    auto* generate_cmd = app.add_subcommand("generate", "random traces from a model");
    generate_cmd->add_option("--model", generate.model, "qrfa, cor, or model JSON path");
    generate_cmd->add_option("-n,--count", generate.count, "number of traces");
    generate_cmd->add_option("--max-len", generate.max_len, "steer to END after this many events");
    generate_cmd->add_option("--seed", generate.seed, "RNG seed (default 17)");
    generate_cmd->add_option("-o,--output", generate_out, "transcript JSONL output");

    // model show
    std::string model_spec = "qrfa", model_format = "json", model_out;
    auto* model_cmd = app.add_subcommand("model", "print a model definition");
    model_cmd->add_option("name", model_spec, "qrfa, cor, or model JSON path");
    model_cmd->add_option("--as", model_format, "json or dot");
    model_cmd->add_option("-o,--output", model_out, "output path (default stdout)");

    // mapping show
    std::string mapping_name, mapping_out;
    auto* mapping_cmd = app.add_subcommand("mapping", "print a builtin mapping CSV");
    mapping_cmd->add_option("name", mapping_name, "cor, scs, ode, dstc1, or dstc2")->required();
    mapping_cmd->add_option("-o,--output", mapping_out, "output path (default stdout)");

    // pipeline
    std::string pipeline_config;
    auto* pipeline_cmd = app.add_subcommand("pipeline", "ingest, check, evaluate from a config");
    pipeline_cmd->add_option("--config", pipeline_config, "key = value config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest_cmd->parsed()) return cmd_ingest(ingest, ingest_out, policy);
        if (discover_cmd->parsed()) return cmd_discover(discover, policy);
        if (check_cmd->parsed()) {
            check.ingest.layer = check_layer;
            return cmd_check(check, check_out, policy);
        }
        if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate, evaluate_out, policy);
        if (generate_cmd->parsed()) return cmd_generate(generate, generate_out, policy);
        if (model_cmd->parsed()) return cmd_model_show(model_spec, model_format, model_out, policy);
        if (mapping_cmd->parsed()) return cmd_mapping_show(mapping_name, mapping_out, policy);
        if (pipeline_cmd->parsed()) return cmd_pipeline(pipeline_config, policy.force);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
