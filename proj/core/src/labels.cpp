#include "convmine/labels.hpp"

#include "convmine/error.hpp"

namespace convmine {

std::string_view to_string(Speaker s) {
    return s == Speaker::User ? "user" : "agent";
}

std::optional<Speaker> parse_speaker(std::string_view s) {
    if (s == "user") return Speaker::User;
    if (s == "agent") return Speaker::Agent;
    return std::nullopt;
}

char core_letter(CoreLabel c) {
    switch (c) {
        case CoreLabel::Query: return 'Q';
        case CoreLabel::Request: return 'R';
        case CoreLabel::Feedback: return 'F';
        case CoreLabel::Answer: return 'A';
    }
    return '?';
}

std::string_view to_string(SubLabel s) {
    switch (s) {
        case SubLabel::Information: return "Information";
        case SubLabel::Prompt: return "Prompt";
        case SubLabel::Offer: return "Offer";
        case SubLabel::Understand: return "Understand";
        case SubLabel::Positive: return "Positive";
        case SubLabel::Negative: return "Negative";
        case SubLabel::Results: return "Results";
        case SubLabel::Backchannel: return "Backchannel";
        case SubLabel::Empty: return "Empty";
    }
    return "?";
}

Speaker side_of(CoreLabel c) {
    switch (c) {
        case CoreLabel::Query:
        case CoreLabel::Feedback: return Speaker::User;
        case CoreLabel::Request:
        case CoreLabel::Answer: return Speaker::Agent;
    }
    return Speaker::User;
}

CoreLabel parent_of(SubLabel s) {
    switch (s) {
        case SubLabel::Information:
        case SubLabel::Prompt: return CoreLabel::Query;
        case SubLabel::Offer:
        case SubLabel::Understand: return CoreLabel::Request;
        case SubLabel::Positive:
        case SubLabel::Negative: return CoreLabel::Feedback;
        case SubLabel::Results:
        case SubLabel::Backchannel:
        case SubLabel::Empty: return CoreLabel::Answer;
    }
    return CoreLabel::Query;
}

bool valid_under(CoreLabel core, SubLabel sub) {
    return parent_of(sub) == core;
}

std::optional<CoreLabel> parse_core_label(std::string_view s) {
    if (s.size() != 1) return std::nullopt;
    switch (s[0]) {
        case 'Q': return CoreLabel::Query;
        case 'R': return CoreLabel::Request;
        case 'F': return CoreLabel::Feedback;
        case 'A': return CoreLabel::Answer;
        default: return std::nullopt;
    }
}

std::optional<SubLabel> parse_sub_label(std::string_view s) {
    for (auto sub : {SubLabel::Information, SubLabel::Prompt, SubLabel::Offer,
                     SubLabel::Understand, SubLabel::Positive, SubLabel::Negative,
                     SubLabel::Results, SubLabel::Backchannel, SubLabel::Empty}) {
        if (s == to_string(sub)) return sub;
    }
    return std::nullopt;
}

Label Label::of(CoreLabel core, SubLabel sub) {
    if (!valid_under(core, sub)) {
        throw Error(ErrorKind::Data,
                    std::string(to_string(sub)) + " is not a sublabel of " + core_letter(core));
    }
    return Label{core, sub};
}

std::string Label::str() const {
    std::string out(1, core_letter(core));
    if (sub) {
        out += '.';
        out += to_string(*sub);
    }
    return out;
}

std::optional<Label> Label::parse(std::string_view s) {
    auto dot = s.find('.');
    if (dot == std::string_view::npos) {
        auto core = parse_core_label(s);
        if (!core) return std::nullopt;
        return Label{*core, std::nullopt};
    }
    auto core = parse_core_label(s.substr(0, dot));
    auto sub = parse_sub_label(s.substr(dot + 1));
    if (!core || !sub || !valid_under(*core, *sub)) return std::nullopt;
    return Label{*core, sub};
}

const std::string& EventClass::start_name() {
    static const std::string name = "START";
    return name;
}

const std::string& EventClass::end_name() {
    static const std::string name = "END";
    return name;
}

} // namespace convmine
