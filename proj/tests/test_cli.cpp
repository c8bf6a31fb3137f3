// End-to-end checks of the convmine CLI: exit codes, flag behaviors, and
// output shapes. Usage: convmine_cli_tests <cli> <fixture-dir> <work-dir>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
fs::path g_cli, g_fixtures, g_work;

struct Result {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

Result run(const std::string& args) {
    fs::path capture = g_work / "capture.txt";
    std::string command = g_cli.string() + " " + args + " > " + capture.string() + " 2>&1";
    int status = std::system(command.c_str());
    Result result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    std::ostringstream out;
    out << in.rdbuf();
    result.output = out.str();
    return result;
}

void expect(bool condition, const std::string& what, const Result& result) {
    if (condition) return;
    ++g_failures;
    std::cerr << "FAILED: " << what << "\n  exit=" << result.exit_code << "\n  output:\n"
              << result.output << "\n";
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::cerr << "usage: convmine_cli_tests <cli> <fixture-dir> <work-dir>\n";
        return 64;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];
    g_work = argv[3];
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    const std::string dstc2 = (g_fixtures / "dstc2_like.jsonl").string();
    const std::string unmapped = (g_fixtures / "unmapped.jsonl").string();
    const std::string tiny = (g_fixtures / "tiny.jsonl").string();
    const std::string tiny_csv = (g_fixtures / "tiny.csv").string();
    const std::string gold = (g_fixtures / "gold.csv").string();

    {
        auto r = run("ingest " + dstc2 + " --mapping builtin:dstc2 -o " +
                     (g_work / "norm.jsonl").string());
        expect(r.exit_code == 0, "ingest of a clean corpus succeeds", r);
        expect(contains(r.output, "dialogues        3"), "ingest prints dataset statistics", r);
        expect(fs::exists(g_work / "norm.jsonl"), "ingest writes the normalized file", r);
    }
    {
        auto r = run("ingest " + dstc2 + " --mapping builtin:dstc2 -o " +
                     (g_work / "norm.jsonl").string());
        expect(r.exit_code == 1, "existing output without --force is a usage error", r);
        expect(contains(r.output, "--force"), "overwrite error mentions --force", r);
    }
    {
        auto r = run("--force ingest " + dstc2 + " --mapping builtin:dstc2 -o " +
                     (g_work / "norm.jsonl").string());
        expect(r.exit_code == 0, "--force allows overwriting", r);
    }
    {
        auto r = run("ingest " + unmapped + " --mapping builtin:dstc2 --unmapped error -o " +
                     (g_work / "x.jsonl").string());
        expect(r.exit_code == 2, "unmapped label under policy error exits 2", r);
        expect(contains(r.output, "zzz-not-an-act"), "the report names the label", r);
    }
    {
        auto r = run("ingest " + unmapped + " --mapping builtin:dstc2 --unmapped drop_event -o " +
                     (g_work / "dropped.jsonl").string());
        expect(r.exit_code == 0, "drop_event keeps going", r);
        expect(contains(r.output, "unmapped occurrences   1"), "dropped-event count in stats", r);
        expect(contains(r.output, "unmapped label \"zzz-not-an-act\" x1"),
               "unmapped summary names the label", r);
    }
    {
        auto r = run("ingest " + tiny_csv + " --format csv -o " + (g_work / "csv.jsonl").string());
        expect(r.exit_code == 0, "csv transcripts ingest", r);
        expect(contains(r.output, "utterances       7"), "csv utterance count", r);
    }
    {
        auto r = run("ingest " + tiny + " --mapping builtin:dstc2 --unmapped error -o " +
                     (g_work / "y.jsonl").string());
        expect(r.exit_code == 2, "canonical labels are not dstc2 acts", r);
    }
    {
        auto r = run("check " + tiny + " --model qrfa");
        expect(r.exit_code == 0, "check against qrfa", r);
        expect(contains(r.output, "Average/case"), "check prints the metric rows", r);
        expect(!contains(r.output, "reconstructed"), "qrfa is not banner-flagged", r);
    }
    {
        auto r = run("check " + tiny + " --model cor");
        expect(r.exit_code == 0, "check against cor", r);
        expect(contains(r.output, "[reconstructed model]"), "cor is banner-flagged", r);
    }
    {
        auto r = run("check " + tiny + " --model nosuch.json");
        expect(r.exit_code == 1, "missing model file is a usage error", r);
    }
    {
        auto r = run("check " + (g_fixtures / "scs_like.jsonl").string() +
                     " --mapping builtin:scs --model qrfa --report json");
        expect(r.exit_code == 0, "check can map raw transcripts inline", r);
        expect(contains(r.output, "\"cases_with_value_1\""), "json report has aggregates", r);
    }
    {
        auto r = run("discover " + tiny + " --layer core --graph " +
                     (g_work / "g.json").string() + " --dot " + (g_work / "g.dot").string());
        expect(r.exit_code == 0, "discover writes artifacts", r);
        expect(contains(slurp(g_work / "g.dot"), "digraph"), "dot artifact is a digraph", r);
        expect(contains(slurp(g_work / "g.json"), "\"trace_count\": 3"), "graph artifact counts",
               r);
    }
    {
        auto r = run("evaluate --log tiny=" + tiny + " --model qrfa --model cor --gold tiny=" +
                     gold + " --report md");
        expect(r.exit_code == 0, "evaluate with gold sidecar", r);
        expect(contains(r.output, "| Metric | tiny / cor (r) | tiny / qrfa |"),
               "evaluate column layout is deterministic", r);
        expect(contains(r.output, "Error detection Precision"), "error-detection rows present", r);
    }
    {
        auto r = run("evaluate --model qrfa");
        expect(r.exit_code == 1, "evaluate without logs is a usage error", r);
    }
    {
        auto r = run("generate --model qrfa -n 25 --seed 5 -o " + (g_work / "gen.jsonl").string());
        expect(r.exit_code == 0, "generate writes transcripts", r);
        auto check = run("check " + (g_work / "gen.jsonl").string() + " --model qrfa");
        expect(check.exit_code == 0, "generated transcripts check cleanly", check);
        expect(contains(check.output, "Cases with value 1  1.0000"),
               "generated transcripts fit the generator", check);
    }
    {
        auto r = run("model qrfa --as json");
        expect(r.exit_code == 0, "model show json", r);
        expect(contains(r.output, "\"question_answering\""), "model json carries cycles", r);
        auto dot = run("model cor --as dot");
        expect(dot.exit_code == 0, "model show dot", dot);
    }
    {
        auto r = run("mapping dstc1");
        expect(r.exit_code == 0, "mapping show", r);
        expect(contains(r.output, "canthelp.uncovered_stop,A,Empty"), "mapping rows printed", r);
    }
    {
        std::ofstream config(g_work / "pipe.conf");
        config << "input = " << dstc2 << "\n"
               << "mapping = builtin:dstc2\n"
               << "normalized = " << (g_work / "pipe_norm.jsonl").string() << "\n"
               << "check_model = qrfa\n"
               << "check_report = " << (g_work / "pipe_check.md").string() << "\n"
               << "models = qrfa,cor\n"
               << "report = " << (g_work / "pipe_report.md").string() << "\n";
        config.close();
        auto r = run("pipeline --config " + (g_work / "pipe.conf").string());
        expect(r.exit_code == 0, "pipeline chains ingest, check, evaluate", r);
        expect(fs::exists(g_work / "pipe_norm.jsonl"), "pipeline wrote the normalized file", r);
        expect(fs::exists(g_work / "pipe_check.md"), "pipeline wrote the check report", r);
        expect(fs::exists(g_work / "pipe_report.md"), "pipeline wrote the evaluation report", r);
    }
    {
        auto r = run("pipeline --config " + (g_work / "missing.conf").string());
        expect(r.exit_code == 1, "missing config is a usage error", r);
    }
    {
        auto r = run("ingest " + (g_work / "nosuch.jsonl").string() + " -o " +
                     (g_work / "z.jsonl").string());
        expect(r.exit_code == 1, "missing input file is a usage error", r);
    }
    {
        auto r = run("bogus-subcommand");
        expect(r.exit_code != 0, "unknown subcommand fails", r);
    }

    if (g_failures == 0) {
        std::cout << "cli: all checks passed\n";
        return 0;
    }
    std::cerr << "cli: " << g_failures << " checks failed\n";
    return 1;
}
