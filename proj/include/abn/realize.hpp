#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abn/http.hpp"
#include "abn/pathway.hpp"

namespace abn {

struct UtteranceTemplate {
    DialogAct act;
    Speaker role;
    std::string_view text;  // slots: {price} {amenity} {delta} {package} {services} {amenities} {preference_blurb}
};

const std::vector<UtteranceTemplate>& template_bank();
std::vector<std::string_view> templates_for(DialogAct act, Speaker role);

// Deterministic in seed. Throws Error{MissingTemplate}.
std::string render_template(const ActEvent& event, const Scenario& scenario, const TravelPackage& package,
                            std::uint64_t seed);
// Renders the index-th variant (modulo the variant count).
std::string render_variant(const ActEvent& event, const Scenario& scenario, const TravelPackage& package,
                           std::size_t index);

// "cozy cottage as accommodation, fine dining as meals and private standard as transportation"
std::string describe_services(const TierSelection& selection);

struct Prompt {
    std::string task_overview;
    std::string demonstration;
    std::string input;
};

Prompt build_prompt(const ActEvent& event, const Scenario& scenario, const TravelPackage& package);

class TextGenerator {
public:
    virtual ~TextGenerator() = default;
    virtual std::string generate(const Prompt& prompt) = 0;
    virtual std::string id() const = 0;
};

// POSTs {"task_overview","demonstration","input","top_p","temperature"} and
// reads {"text"}. Safe to share across threads.
class HttpGenerator : public TextGenerator {
public:
    explicit HttpGenerator(Endpoint endpoint, double top_p = 0.95, double temperature = 1.0);
    std::string generate(const Prompt& prompt) override;
    std::string id() const override { return endpoint_.url; }

private:
    Endpoint endpoint_;
    double top_p_;
    double temperature_;
};

enum class RealizeMode { Template, External };

std::string_view mode_name(RealizeMode m);
std::optional<RealizeMode> parse_mode(std::string_view s);

struct Turn {
    Speaker speaker = Speaker::Agent;
    std::optional<DialogAct> act;
    std::string text;
};

struct Conversation {
    std::string id;
    Pathway pathway;
    std::vector<Turn> turns;
    std::string provenance;  // "template" or "external:<endpoint>"
    // Generation problems the filter stage should see (e.g. blank replies).
    std::vector<std::string> defects;
};

// Template mode never touches the network. External mode needs a generator
// and throws Error{EndpointUnreachable}; blank replies are recorded as
// GenerationEmpty defects rather than thrown.
Conversation realize_conversation(const Pathway& pathway, const TravelPackage& package, RealizeMode mode,
                                  std::uint64_t seed, TextGenerator* generator = nullptr);

}  // namespace abn
