#ifndef convmine_evaluation_hpp
#define convmine_evaluation_hpp

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "convmine/conformance.hpp"

namespace convmine {

struct SuccessPrediction {
    std::string conversation_id;
    bool predicted_success = false;  // fitness >= threshold
    double fitness = 0.0;
};

// One prediction per trace in the report. Default threshold 1: only an
// exact fit predicts success.
std::vector<SuccessPrediction> predict_success(const FitnessReport& report,
                                               double threshold = 1.0);

// Confusion matrix for the conversation-failure detection task. The
// positive class is FAILURE: a true positive is a conversation predicted
// failed whose gold annotation is also failed. Zero-denominator precision
// or recall is left unset, never reported as 0 or 1.
struct ErrorDetectionMetrics {
    std::uint64_t true_positives = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
    std::uint64_t true_negatives = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::vector<std::string> missing_gold;  // prediction ids without gold, excluded

    std::uint64_t scored() const {
        return true_positives + false_positives + false_negatives + true_negatives;
    }
};

// Error(Data) if no prediction id has gold.
ErrorDetectionMetrics score_error_detection(const std::vector<SuccessPrediction>& predictions,
                                            const std::map<std::string, bool>& gold_success);

struct LabeledLog {
    EventLog log;
    std::optional<std::map<std::string, bool>> gold;
};

struct DatasetReportEntry {
    std::string model_name;
    std::string log_name;
    bool ok = true;
    std::string error;  // when !ok
    bool layer_mismatch = false;
    FitnessReport fitness;
    bool has_gold = false;
    ErrorDetectionMetrics error_detection;
};

struct DatasetReport {
    std::vector<DatasetReportEntry> entries;  // ordered by (model name, log name)
};

struct DatasetReportOptions {
    LogFitnessOptions fitness;
    double success_threshold = 1.0;
};

// One entry per (model, log) pair; a failing pair is marked and does not
// abort the others.
DatasetReport dataset_report(const std::map<std::string, LabeledLog>& logs,
                             const std::map<std::string, ModelDefinition>& models,
                             const DatasetReportOptions& options = {});

// Convenience: reduce each conversation set at every model's own layer
// before checking, so core- and fine-layer models see matching alphabets.
struct LabeledConversations {
    std::vector<Conversation> conversations;
    std::optional<std::map<std::string, bool>> gold;
};

DatasetReport dataset_report(const std::map<std::string, LabeledConversations>& datasets,
                             const std::map<std::string, ModelDefinition>& models,
                             MultiLabelPolicy policy,
                             const DatasetReportOptions& options = {});

nlohmann::json to_json(const DatasetReport& report);
std::string to_markdown(const DatasetReport& report);

} // namespace convmine

#endif
