#include <doctest.h>
#include <nlohmann/json.hpp>

#include "convmine/error.hpp"
#include "convmine/evaluation.hpp"

using namespace convmine;

namespace {

FitnessReport report_of(std::vector<std::pair<std::string, double>> rows) {
    FitnessReport report;
    for (auto& [id, fitness] : rows) {
        TraceFitness row;
        row.conversation_id = id;
        row.fitness = fitness;
        row.optimal_cost = fitness == 1.0 ? 0.0 : 1.0;
        row.worst_case_cost = 1.0;
        report.traces.push_back(std::move(row));
    }
    return report;
}

} // namespace

TEST_CASE("success is predicted at the fitness threshold") {
    auto report = report_of({{"a", 1.0}, {"b", 0.8}});

    auto strict = predict_success(report);
    REQUIRE(strict.size() == 2);
    CHECK(strict[0].predicted_success);
    CHECK_FALSE(strict[1].predicted_success);

    auto relaxed = predict_success(report, 0.8);
    CHECK(relaxed[0].predicted_success);
    CHECK(relaxed[1].predicted_success);

    auto all_fit = predict_success(report_of({{"a", 1.0}, {"b", 1.0}}));
    int failures = 0;
    for (const auto& p : all_fit) failures += !p.predicted_success;
    CHECK(failures == 0);

    CHECK_THROWS_AS(predict_success(report, 0.0), Error);
    CHECK_THROWS_AS(predict_success(report, 1.5), Error);
}

TEST_CASE("raising the threshold never adds predicted successes") {
    auto report = report_of({{"a", 1.0}, {"b", 0.9}, {"c", 0.7}, {"d", 0.4}, {"e", 0.0}});
    std::size_t previous = report.traces.size() + 1;
    for (double threshold : {0.2, 0.4, 0.7, 0.9, 1.0}) {
        auto predictions = predict_success(report, threshold);
        std::size_t successes = 0;
        for (const auto& p : predictions) successes += p.predicted_success;
        CHECK(successes <= previous);
        previous = successes;
    }
}

TEST_CASE("an all-success prediction against gold failures scores zero recall") {
    auto predictions = predict_success(report_of({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}}));
    std::map<std::string, bool> gold{{"a", true}, {"b", false}, {"c", true}};
    auto metrics = score_error_detection(predictions, gold);
    CHECK(metrics.true_positives == 0);
    CHECK(metrics.false_negatives == 1);
    CHECK(metrics.true_negatives == 2);
    REQUIRE(metrics.recall);
    CHECK(*metrics.recall == 0.0);
    CHECK_FALSE(metrics.precision);  // no predicted failures at all
}

TEST_CASE("confusion matrix arithmetic on a mixed fixture") {
    // 3 predicted failures, all confirmed; one gold failure unflagged
    auto predictions = predict_success(
        report_of({{"a", 0.5}, {"b", 0.5}, {"c", 0.5}, {"d", 1.0}, {"e", 1.0}}));
    std::map<std::string, bool> gold{
        {"a", false}, {"b", false}, {"c", false}, {"d", false}, {"e", true}};
    auto metrics = score_error_detection(predictions, gold);
    CHECK(metrics.true_positives == 3);
    CHECK(metrics.false_positives == 0);
    CHECK(metrics.false_negatives == 1);
    CHECK(metrics.true_negatives == 1);
    REQUIRE(metrics.precision);
    REQUIRE(metrics.recall);
    CHECK(*metrics.precision == 1.0);
    CHECK(*metrics.recall == 0.75);
    CHECK(metrics.scored() == 5);
}

TEST_CASE("zero denominators mark precision and recall undefined") {
    auto predictions = predict_success(report_of({{"a", 1.0}, {"b", 1.0}}));
    std::map<std::string, bool> gold{{"a", true}, {"b", true}};
    auto metrics = score_error_detection(predictions, gold);
    CHECK_FALSE(metrics.precision);
    CHECK_FALSE(metrics.recall);
    CHECK(metrics.true_negatives == 2);
}

TEST_CASE("predictions without gold are excluded and reported") {
    auto predictions = predict_success(report_of({{"a", 1.0}, {"zz", 0.5}}));
    std::map<std::string, bool> gold{{"a", true}};
    auto metrics = score_error_detection(predictions, gold);
    CHECK(metrics.scored() == 1);
    REQUIRE(metrics.missing_gold.size() == 1);
    CHECK(metrics.missing_gold[0] == "zz");

    std::map<std::string, bool> disjoint{{"other", true}};
    CHECK_THROWS_AS(score_error_detection(predictions, disjoint), Error);
}

TEST_CASE("the dataset report runs every model-log pair in order") {
    std::map<std::string, LabeledConversations> datasets;
    Conversation ok;
    ok.id = "c1";
    Utterance q;
    q.speaker = Speaker::User;
    q.labels = {Label::of(CoreLabel::Query)};
    Utterance a;
    a.speaker = Speaker::Agent;
    a.labels = {Label::of(CoreLabel::Answer)};
    ok.utterances = {q, a};
    Conversation lone;
    lone.id = "c2";
    lone.utterances = {q};

    datasets["beta"].conversations = {ok, lone};
    datasets["alpha"].conversations = {ok};
    datasets["alpha"].gold = std::map<std::string, bool>{{"c1", true}};

    std::map<std::string, ModelDefinition> models{{"qrfa", builtin_qrfa()},
                                                  {"cor", builtin_cor()}};
    auto report = dataset_report(datasets, models, MultiLabelPolicy::Expand);
    REQUIRE(report.entries.size() == 4);
    CHECK(report.entries[0].model_name == "cor");
    CHECK(report.entries[0].log_name == "alpha");
    CHECK(report.entries[1].log_name == "beta");
    CHECK(report.entries[2].model_name == "qrfa");

    // alpha carries gold, beta does not
    CHECK(report.entries[2].has_gold);
    CHECK_FALSE(report.entries[3].has_gold);
    CHECK(report.entries[2].fitness.average == 1.0);

    // the reconstructed flag propagates into json and markdown
    auto j = to_json(report);
    CHECK(j["results"][0]["model_reconstructed"] == true);
    auto md = to_markdown(report);
    CHECK(md.find("(r)") != std::string::npos);
    CHECK(md.find("no gold") != std::string::npos);
    CHECK(md.find("Average/case") != std::string::npos);

    // deterministic rendering
    CHECK(to_markdown(report) == md);
    CHECK(to_json(report) == j);
}

TEST_CASE("threshold-1 predictions mark exactly the cases-with-value-1 traces") {
    auto net = from_definition(builtin_qrfa());
    EventLog log;
    auto add = [&log](const std::string& id, std::vector<std::string> names) {
        Trace trace;
        trace.conversation_id = id;
        for (auto& name : names) trace.events.push_back(EventClass::named(name));
        log.traces.push_back(std::move(trace));
    };
    add("a", {"Q", "A"});
    add("b", {"Q"});
    add("c", {"Q", "R", "F", "A"});
    add("d", {"X", "Q"});
    add("e", {"Q", "A", "Q", "A"});

    auto report = log_fitness(log, net);
    auto predictions = predict_success(report, 1.0);
    std::size_t successes = 0;
    for (const auto& p : predictions) successes += p.predicted_success;
    CHECK(static_cast<double>(successes) ==
          report.cases_with_value_1 * static_cast<double>(report.traces.size()));
    CHECK(successes == 3);
}

TEST_CASE("a failing pair is marked without aborting the others") {
    std::map<std::string, LabeledLog> logs;
    EventLog good;
    good.layer = LabelLayer::Core;
    good.traces.push_back(Trace{"c1", {EventClass::named("Q"), EventClass::named("A")}});
    EventLog empty;  // log_fitness rejects empty logs
    logs["good"].log = good;
    logs["empty"].log = empty;
    std::map<std::string, ModelDefinition> models{{"qrfa", builtin_qrfa()}};

    auto report = dataset_report(logs, models);
    REQUIRE(report.entries.size() == 2);
    CHECK_FALSE(report.entries[0].ok);  // "empty" sorts first
    CHECK(report.entries[1].ok);
    auto md = to_markdown(report);
    CHECK(md.find("Failed pairs:") != std::string::npos);

    CHECK_THROWS_AS(dataset_report(std::map<std::string, LabeledLog>{}, models), Error);
}
