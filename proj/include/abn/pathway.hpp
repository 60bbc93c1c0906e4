#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "abn/acts.hpp"
#include "abn/catalog.hpp"
#include "abn/concession.hpp"
#include "abn/personas.hpp"

namespace abn {

struct Scenario {
    TravelerPersona traveler;
    AgentPersona agent;
    std::string package;
    TierSelection tier_selection;
    // Amenities bundled into the opening offer.
    std::vector<std::string> included_amenities;
    double agent_init_price = 0.0;
    double traveler_init_price = 0.0;
    double phi = 0.05;
    std::map<std::string, double> amenity_pref;
    std::uint64_t seed = 0;

    bool operator==(const Scenario&) const = default;
};

struct ScenarioOptions {
    double base_ratio = 0.75;    // mean of traveler_init / agent_init before the buying-style shift
    double spread_ratio = 0.10;  // stddev as a fraction of agent_init
    int included_amenities = 3;
    PhiDistribution phi;
};

// Throws Error{EmptyCatalog}.
Scenario sample_scenario(const Catalog& catalog, std::uint64_t seed,
                         const PersonaTable& personas = PersonaTable::defaults(),
                         const ScenarioOptions& options = {});

struct Slots {
    std::optional<double> price;
    std::optional<std::string> amenity;
    std::optional<double> delta;

    bool operator==(const Slots&) const = default;
};

struct ActEvent {
    int turn = 0;
    Speaker speaker = Speaker::Agent;
    DialogAct act = DialogAct::GreetAsk;
    Phase phase = Phase::Opening;
    Slots slots;

    DialogState state() const { return {phase, act, speaker}; }
    bool operator==(const ActEvent&) const = default;
};

// Concession knobs the encoder applies on top of a scenario.
struct ConcessionSettings {
    std::array<double, 3> budget_c = kBudgetConcession;
    double traveler_c_ratio = kTravelerCRatio;
    double agent_min_ratio = kAgentMinRatio;
    TravelerVariant variant = TravelerVariant::Mirrored;
};

// Everything needed to replay a pathway's ledger.
struct NegotiationTerms {
    BudgetClass budget = BudgetClass::Moderate;
    double c_agent = 0.9;
    double c_traveler = 0.27;
    double agent_min_price = 0.0;
    TravelerVariant variant = TravelerVariant::Mirrored;

    bool operator==(const NegotiationTerms&) const = default;
};

NegotiationTerms make_terms(const Scenario& scenario, const BehaviorParams& traveler, const BehaviorParams& agent,
                            const ConcessionSettings& settings = {});

struct Pathway {
    Scenario scenario;
    NegotiationTerms terms;
    BehaviorParams traveler_params;
    BehaviorParams agent_params;
    std::vector<ActEvent> events;
    Outcome outcome = Outcome::Expired;
    // Agent's standing price when the dialogue stops; the deal price if Agreed.
    double final_price = 0.0;

    bool operator==(const Pathway&) const = default;
};

struct EncoderOptions {
    ConcessionSettings concession;
    int min_turns = 8;
    int max_turns = 24;
};

// Throws Error{GraphDeadEnd} when the graph offers no continuation the
// policy can use, Error{UnknownTier} / Error{InvalidArgument} on a scenario
// that does not fit the package.
Pathway encode_pathway(const Scenario& scenario, const TravelPackage& package, const TransitionGraph& graph,
                       const std::pair<BehaviorParams, BehaviorParams>& params, const EncoderOptions& options = {});

enum class ViolationKind {
    TurnCount,
    TurnNumbering,
    Prefix,
    Alternation,
    IllegalTransition,
    SlotMismatch,
    AcceptOutcome,
    AfterAccept,
    LedgerMismatch,
    LabelMismatch,
    AmenityDelta,
    PriceStretch,
    ArgumentStretch,
    AcceptCondition,
};

std::string_view violation_name(ViolationKind k);

struct Violation {
    ViolationKind kind;
    int turn = 0;  // 0 for pathway-level findings
    std::string detail;
};

struct ValidationLimits {
    int min_turns = 8;
    int max_turns = 24;
    double price_tolerance = 0.01;
};

// Re-derives every invariant, including the price ledger. When a catalog is
// given, amenity deltas are checked against catalog prices.
std::vector<Violation> validate_pathway(const Pathway& p, const TransitionGraph& graph,
                                        const Catalog* catalog = nullptr, const ValidationLimits& limits = {});

}  // namespace abn
