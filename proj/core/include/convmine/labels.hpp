#ifndef convmine_labels_hpp
#define convmine_labels_hpp

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace convmine {

enum class Speaker : unsigned char { User, Agent };

std::string_view to_string(Speaker s);
std::optional<Speaker> parse_speaker(std::string_view s);

// The four top-level utterance classes. Q and F are user-side,
// R and A are agent-side.
enum class CoreLabel : unsigned char { Query, Request, Feedback, Answer };

// Fine-grained sublabels; each is valid under exactly one CoreLabel.
enum class SubLabel : unsigned char {
    Information, Prompt,        // Query
    Offer, Understand,          // Request
    Positive, Negative,         // Feedback
    Results, Backchannel, Empty // Answer
};

char core_letter(CoreLabel c);
std::string_view to_string(SubLabel s);
Speaker side_of(CoreLabel c);
CoreLabel parent_of(SubLabel s);
bool valid_under(CoreLabel core, SubLabel sub);

std::optional<CoreLabel> parse_core_label(std::string_view s);
std::optional<SubLabel> parse_sub_label(std::string_view s);

// A validated two-layer label: a core class plus an optional sublabel.
// Canonical text form is "Q" or "Q.Information".
struct Label {
    CoreLabel core;
    std::optional<SubLabel> sub;

    static Label of(CoreLabel core) { return Label{core, std::nullopt}; }
    // Throws Error(Data) if sub is not valid under core.
    static Label of(CoreLabel core, SubLabel sub);

    Label stripped() const { return Label{core, std::nullopt}; }
    Speaker side() const { return side_of(core); }

    std::string str() const;
    static std::optional<Label> parse(std::string_view s);

    auto operator<=>(const Label&) const = default;
};

// An event-class name as it appears in traces and models: a canonical
// QRFA label, a raw source label, or one of the reserved markers
// START / END. Markers never occur inside traces.
class EventClass {
public:
    EventClass() = default;

    static const std::string& start_name();
    static const std::string& end_name();

    static EventClass start() { return EventClass(start_name()); }
    static EventClass end() { return EventClass(end_name()); }
    static EventClass of(const Label& l) { return EventClass(l.str()); }
    // Arbitrary name; "START"/"END" yield the markers.
    static EventClass named(std::string name) { return EventClass(std::move(name)); }

    const std::string& name() const { return name_; }
    bool is_start() const { return name_ == start_name(); }
    bool is_end() const { return name_ == end_name(); }
    bool is_marker() const { return is_start() || is_end(); }

    std::optional<Label> as_label() const { return Label::parse(name_); }

    auto operator<=>(const EventClass&) const = default;

private:
    explicit EventClass(std::string name) : name_(std::move(name)) {}

    std::string name_;
};

} // namespace convmine

#endif
