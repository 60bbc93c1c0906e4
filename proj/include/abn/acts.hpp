#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace abn {

enum class DialogAct {
    NegotiatePriceIncrease,
    NegotiatePriceDecrease,
    NegotiatePriceNochange,
    NegotiateAddX,
    NegotiateRemoveX,
    ConcernPrice,
    DisagreePrice,
    JustifyPrice,
    AssurancePrice,
    DisagreeX,
    JustifyX,
    AssuranceX,
    GreetAsk,
    Inform,
    ElicitPreference,
    AskPrice,
    TellPrice,
    AskClarificationX,
    ProvideClarificationX,
    ProvideConsent,
    ConsentResponse,
    Accept,
    AcknowledgeAcceptance,
};

inline constexpr std::size_t kDialogActCount = 23;
extern const std::array<DialogAct, kDialogActCount> kAllDialogActs;

enum class ActCategory { Negotiation, Argumentation, General };

enum class Phase { Opening, Discovery, PriceNegotiation, Argumentation, AmenityNegotiation, Closing };
inline constexpr std::array<Phase, 6> kAllPhases = {Phase::Opening,       Phase::Discovery,
                                                    Phase::PriceNegotiation, Phase::Argumentation,
                                                    Phase::AmenityNegotiation, Phase::Closing};

enum class Speaker { Agent, Traveler };
enum class RoleConstraint { Agent, Traveler, Either };

std::string_view act_name(DialogAct act);
std::optional<DialogAct> parse_act(std::string_view name);
std::string_view phase_name(Phase phase);
std::optional<Phase> parse_phase(std::string_view name);
std::string_view speaker_name(Speaker s);
std::optional<Speaker> parse_speaker(std::string_view name);
std::string_view role_name(RoleConstraint r);

inline Speaker other(Speaker s) { return s == Speaker::Agent ? Speaker::Traveler : Speaker::Agent; }

ActCategory category(DialogAct act);
std::string_view category_name(ActCategory c);

// Who the act definitions assign the act to. The transition graph may
// still route an "either" act to a specific party.
RoleConstraint speaker_role(DialogAct act);

bool is_terminal(DialogAct act);

// Acts whose event carries a price slot.
bool is_price_bearing(DialogAct act);
// The "-X" acts; their events carry an amenity slot.
bool is_x_act(DialogAct act);
// Negotiate-price-*.
bool is_price_act(DialogAct act);

struct DialogState {
    Phase phase;
    DialogAct act;
    Speaker speaker;

    auto operator<=>(const DialogState&) const = default;
};

inline constexpr DialogState kStartState{Phase::Opening, DialogAct::GreetAsk, Speaker::Agent};

std::string to_string(const DialogState& s);

// Legal (phase, act, speaker) -> (act, speaker, phase) continuations.
// Loaded from a line-oriented text file:
//     # comment
//     Opening Greet-Ask agent -> Elicit-preference traveler Discovery
class TransitionGraph {
public:
    static TransitionGraph parse(std::string_view content);
    static TransitionGraph load(const std::filesystem::path& path);

    // Throws Error{UnreachableState} for states no walk from the start visits.
    const std::set<DialogState>& legal_next(const DialogState& from) const;
    bool is_legal(const DialogState& from, const DialogState& to) const;
    bool reachable(const DialogState& s) const { return reachable_.contains(s); }

    const std::map<DialogState, std::set<DialogState>>& edges() const { return edges_; }
    std::size_t edge_count() const;
    std::string serialize() const;

private:
    void validate() const;

    std::map<DialogState, std::set<DialogState>> edges_;
    std::set<DialogState> reachable_;
};

}  // namespace abn
