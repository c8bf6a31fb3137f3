#include "convmine/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "convmine/error.hpp"

namespace convmine {

std::vector<SuccessPrediction> predict_success(const FitnessReport& report, double threshold) {
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw Error(ErrorKind::Usage, "predict_success: threshold must be in (0, 1]");
    }
    std::vector<SuccessPrediction> predictions;
    predictions.reserve(report.traces.size());
    for (const auto& row : report.traces) {
        predictions.push_back(
            SuccessPrediction{row.conversation_id, row.fitness >= threshold, row.fitness});
    }
    return predictions;
}

ErrorDetectionMetrics score_error_detection(const std::vector<SuccessPrediction>& predictions,
                                            const std::map<std::string, bool>& gold_success) {
    ErrorDetectionMetrics metrics;
    for (const auto& prediction : predictions) {
        auto it = gold_success.find(prediction.conversation_id);
        if (it == gold_success.end()) {
            metrics.missing_gold.push_back(prediction.conversation_id);
            continue;
        }
        const bool predicted_failure = !prediction.predicted_success;
        const bool gold_failure = !it->second;
        if (predicted_failure && gold_failure) ++metrics.true_positives;
        else if (predicted_failure && !gold_failure) ++metrics.false_positives;
        else if (!predicted_failure && gold_failure) ++metrics.false_negatives;
        else ++metrics.true_negatives;
    }
    if (metrics.scored() == 0) {
        throw Error(ErrorKind::Data,
                    "score_error_detection: no prediction has a gold annotation");
    }
    if (metrics.true_positives + metrics.false_positives > 0) {
        metrics.precision = static_cast<double>(metrics.true_positives) /
                            static_cast<double>(metrics.true_positives + metrics.false_positives);
    }
    if (metrics.true_positives + metrics.false_negatives > 0) {
        metrics.recall = static_cast<double>(metrics.true_positives) /
                         static_cast<double>(metrics.true_positives + metrics.false_negatives);
    }
    return metrics;
}

namespace {

DatasetReportEntry check_pair(const std::string& model_name, const ModelDefinition& model,
                              const std::string& log_name, const EventLog& log,
                              const std::optional<std::map<std::string, bool>>& gold,
                              const DatasetReportOptions& options) {
    DatasetReportEntry entry;
    entry.model_name = model_name;
    entry.log_name = log_name;
    entry.layer_mismatch = model.layer != log.layer;
    try {
        ProcessNet net = from_definition(model);
        net.name = model_name;
        entry.fitness = log_fitness(log, net, options.fitness);
        if (gold) {
            auto predictions = predict_success(entry.fitness, options.success_threshold);
            entry.error_detection = score_error_detection(predictions, *gold);
            entry.has_gold = true;
        }
    } catch (const Error& e) {
        entry.ok = false;
        entry.error = e.what();
    }
    return entry;
}

} // namespace

DatasetReport dataset_report(const std::map<std::string, LabeledLog>& logs,
                             const std::map<std::string, ModelDefinition>& models,
                             const DatasetReportOptions& options) {
    if (logs.empty() || models.empty()) {
        throw Error(ErrorKind::Usage, "dataset_report: need at least one log and one model");
    }
    DatasetReport report;
    for (const auto& [model_name, model] : models) {
        for (const auto& [log_name, labeled] : logs) {
            report.entries.push_back(
                check_pair(model_name, model, log_name, labeled.log, labeled.gold, options));
        }
    }
    return report;
}

DatasetReport dataset_report(const std::map<std::string, LabeledConversations>& datasets,
                             const std::map<std::string, ModelDefinition>& models,
                             MultiLabelPolicy policy, const DatasetReportOptions& options) {
    if (datasets.empty() || models.empty()) {
        throw Error(ErrorKind::Usage, "dataset_report: need at least one log and one model");
    }
    DatasetReport report;
    for (const auto& [model_name, model] : models) {
        for (const auto& [log_name, labeled] : datasets) {
            DatasetReportEntry entry;
            try {
                EventLog log = reduce_to_log(labeled.conversations, model.layer, policy);
                entry = check_pair(model_name, model, log_name, log, labeled.gold, options);
            } catch (const Error& e) {
                entry.model_name = model_name;
                entry.log_name = log_name;
                entry.ok = false;
                entry.error = e.what();
            }
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

nlohmann::json to_json(const DatasetReport& report) {
    auto entries = nlohmann::json::array();
    for (const auto& entry : report.entries) {
        nlohmann::json j;
        j["model"] = entry.model_name;
        j["log"] = entry.log_name;
        j["ok"] = entry.ok;
        if (!entry.ok) {
            j["error"] = entry.error;
            entries.push_back(std::move(j));
            continue;
        }
        if (entry.layer_mismatch) j["layer_mismatch"] = true;
        j["model_reconstructed"] = entry.fitness.model_reconstructed;
        j["fitness"] = {{"average_case", entry.fitness.average},
                        {"max", entry.fitness.max_fitness},
                        {"min", entry.fitness.min_fitness},
                        {"std_deviation", entry.fitness.std_deviation},
                        {"cases_with_value_1", entry.fitness.cases_with_value_1},
                        {"traces", entry.fitness.traces.size()},
                        {"empty_traces", entry.fitness.empty_traces}};
        if (entry.has_gold) {
            const auto& m = entry.error_detection;
            nlohmann::json e;
            e["positive_class"] = "failure";
            e["true_positives"] = m.true_positives;
            e["false_positives"] = m.false_positives;
            e["false_negatives"] = m.false_negatives;
            e["true_negatives"] = m.true_negatives;
            e["precision"] = m.precision ? nlohmann::json(*m.precision) : nlohmann::json(nullptr);
            e["recall"] = m.recall ? nlohmann::json(*m.recall) : nlohmann::json(nullptr);
            if (!m.missing_gold.empty()) e["missing_gold"] = m.missing_gold;
            j["error_detection"] = std::move(e);
        } else {
            j["error_detection"] = "no gold";
        }
        entries.push_back(std::move(j));
    }
    return nlohmann::json{{"results", std::move(entries)}};
}

namespace {

std::string fixed4(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << v;
    return out.str();
}

std::string metric_or_undefined(const std::optional<double>& v) {
    return v ? fixed4(*v) : std::string("undefined");
}

} // namespace

std::string to_markdown(const DatasetReport& report) {
    std::ostringstream out;
    out << "# Conformance evaluation\n\n";
    out << "Positive class for error detection: conversation failure.\n\n";

    bool any_reconstructed = false;
    for (const auto& entry : report.entries) {
        if (entry.ok && entry.fitness.model_reconstructed) any_reconstructed = true;
    }
    if (any_reconstructed) {
        out << "Note: models marked (r) use a reconstructed topology; read their"
               " numbers as indicative.\n\n";
    }

    out << "| Metric |";
    for (const auto& entry : report.entries) {
        out << ' ' << entry.log_name << " / " << entry.model_name;
        if (entry.ok && entry.fitness.model_reconstructed) out << " (r)";
        out << " |";
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < report.entries.size(); ++i) out << "---|";
    out << "\n";

    auto row = [&](const std::string& label, auto value_of) {
        out << "| " << label << " |";
        for (const auto& entry : report.entries) {
            out << ' ' << (entry.ok ? value_of(entry) : std::string("failed")) << " |";
        }
        out << "\n";
    };
    row("Average/case", [](const DatasetReportEntry& e) { return fixed4(e.fitness.average); });
    row("Max.", [](const DatasetReportEntry& e) { return fixed4(e.fitness.max_fitness); });
    row("Min.", [](const DatasetReportEntry& e) { return fixed4(e.fitness.min_fitness); });
    row("Std. Deviation",
        [](const DatasetReportEntry& e) { return fixed4(e.fitness.std_deviation); });
    row("Cases with value 1",
        [](const DatasetReportEntry& e) { return fixed4(e.fitness.cases_with_value_1); });
    row("Error detection Precision", [](const DatasetReportEntry& e) {
        return e.has_gold ? metric_or_undefined(e.error_detection.precision)
                          : std::string("no gold");
    });
    row("Error detection Recall", [](const DatasetReportEntry& e) {
        return e.has_gold ? metric_or_undefined(e.error_detection.recall)
                          : std::string("no gold");
    });

    bool any_failed = false;
    for (const auto& entry : report.entries) any_failed |= !entry.ok;
    if (any_failed) {
        out << "\nFailed pairs:\n";
        for (const auto& entry : report.entries) {
            if (!entry.ok) {
                out << "- " << entry.log_name << " / " << entry.model_name << ": " << entry.error
                    << "\n";
            }
        }
    }
    return out.str();
}

} // namespace convmine
