#include <sstream>

#include "convmine/error.hpp"
#include "convmine/ingest.hpp"

namespace convmine {

namespace {

// Built-in scheme alignments onto the QRFA schema. Where a source scheme
// reuses one label name in both roles, the key carries a user:/agent:
// qualifier and lookup resolves it via the utterance speaker. Blank cells
// of the published alignments stay blank (notably no COR label maps to
// R.Understand).

constexpr std::string_view kCorCsv =
    "source_label,core,sub\n"
    "request,Q,Information\n"
    "user:withdraw,Q,Prompt\n"
    "accept,F,Positive\n"
    "be contented,F,Positive\n"
    "user:reject,F,Negative\n"
    "be discontented,F,Negative\n"
    "offer,R,Offer\n"
    "agent:withdraw,R,Offer\n"
    "assert,A,Results\n"
    "promise,A,Backchannel\n"
    "agent:reject,A,Empty\n";

constexpr std::string_view kScsCsv =
    "source_label,core,sub\n"
    "Initial information request,Q,Information\n"
    "Intent clarification,Q,Information\n"
    "Query repeat,Q,Information\n"
    "Query embellishment,Q,Information\n"
    "SERP information request,Q,Prompt\n"
    "user:Confirms,F,Positive\n"
    "Query refinement offer,R,Offer\n"
    "Asks to repeat,R,Understand\n"
    "SERP without modification,A,Results\n"
    "SERP with modification,A,Results\n"
    "SERP with modification + Suggestion,A,Results\n"
    "Scanning document theme,A,Results\n"
    "agent:Confirms,A,Backchannel\n";

constexpr std::string_view kOdeCsv =
    "source_label,core,sub\n"
    "set(keywords),Q,Information\n"
    "question(data),Q,Prompt\n"
    "more(),Q,Prompt\n"
    "user:prompt(link),Q,Prompt\n"
    "user:verify(),Q,Prompt\n"
    "user:confirm(),F,Positive\n"
    "user:success(),F,Positive\n"
    "reject(),F,Negative\n"
    "list(keywords),R,Offer\n"
    "agent:prompt(link),R,Offer\n"
    "prompt(keywords),R,Understand\n"
    "agent:verify(),R,Understand\n"
    "bool(data),A,Results\n"
    "count(data),A,Results\n"
    "top(keywords),A,Results\n"
    "link(dataset),A,Results\n"
    "agent:confirm(),A,Backchannel\n"
    "agent:success(),A,Backchannel\n";

constexpr std::string_view kDstc1Csv =
    "source_label,core,sub\n"
    "inform,Q,Information\n"
    "nextbus,Q,Information\n"
    "prevbus,Q,Information\n"
    "restart,Q,Prompt\n"
    "repeat,Q,Prompt\n"
    "tellchoices,Q,Prompt\n"
    "goback,Q,Prompt\n"
    "affirm,F,Positive\n"
    "negate,F,Negative\n"
    "request,R,Offer\n"
    "open-request,R,Offer\n"
    "example,R,Offer\n"
    "are-you-there,R,Understand\n"
    "bebrief,R,Understand\n"
    "expl-conf,R,Understand\n"
    "please-repeat,R,Understand\n"
    "please-rephrase,R,Understand\n"
    "schedule,A,Results\n"
    "morebuses,A,Results\n"
    "ack,A,Backchannel\n"
    "hold-on,A,Backchannel\n"
    "impl-conf,A,Backchannel\n"
    "sorry,A,Empty\n"
    "canthelp.cant_find_stop,A,Empty\n"
    "canthelp.from_equals_to,A,Empty\n"
    "canthelp.no_buses_at_time,A,Empty\n"
    "canthelp.no_connection,A,Empty\n"
    "canthelp.nonextbus,A,Empty\n"
    "canthelp.route_doesnt_run,A,Empty\n"
    "canthelp.system_error,A,Empty\n"
    "canthelp.uncovered_route,A,Empty\n"
    "canthelp.uncovered_stop,A,Empty\n";

constexpr std::string_view kDstc2Csv =
    "source_label,core,sub\n"
    "user:inform,Q,Information\n"
    "user:request,Q,Information\n"
    "confirm,Q,Information\n"
    "deny,Q,Information\n"
    "user:repeat,Q,Information\n"
    "reqalts,Q,Information\n"
    "ack,F,Positive\n"
    "affirm,F,Positive\n"
    "thankyou,F,Positive\n"
    "negate,F,Negative\n"
    "agent:request,R,Offer\n"
    "welcomemsg,R,Offer\n"
    "reqmore,R,Offer\n"
    "select,R,Offer\n"
    "expl-conf,R,Understand\n"
    "agent:repeat,R,Understand\n"
    "confirm-domain,R,Understand\n"
    "agent:inform,A,Results\n"
    "offer,A,Results\n"
    "impl-conf,A,Backchannel\n"
    "canthelp,A,Empty\n"
    "canthelp.exception,A,Empty\n";

struct BuiltinMapping {
    std::string_view name;
    std::string_view csv;
};

constexpr BuiltinMapping kBuiltins[] = {
    {"cor", kCorCsv},   {"scs", kScsCsv},     {"ode", kOdeCsv},
    {"dstc1", kDstc1Csv}, {"dstc2", kDstc2Csv},
};

} // namespace

std::vector<std::string> builtin_mapping_names() {
    std::vector<std::string> names;
    for (const auto& builtin : kBuiltins) names.emplace_back(builtin.name);
    return names;
}

bool is_builtin_mapping(std::string_view name) {
    for (const auto& builtin : kBuiltins) {
        if (builtin.name == name) return true;
    }
    return false;
}

std::string_view builtin_mapping_csv(std::string_view name) {
    for (const auto& builtin : kBuiltins) {
        if (builtin.name == name) return builtin.csv;
    }
    throw Error(ErrorKind::Usage, "unknown builtin mapping: " + std::string(name));
}

MappingTable builtin_mapping(std::string_view name) {
    std::istringstream in{std::string(builtin_mapping_csv(name))};
    return parse_mapping(in, "builtin:" + std::string(name));
}

} // namespace convmine
