#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace abn {

class Rng;

enum class BudgetClass { Low, Moderate, High };

struct BudgetAssessment {
    BudgetClass budget;
    double c_agent;
};

std::string_view budget_name(BudgetClass b);

// Concession factor for each budget class, indexed by BudgetClass.
inline constexpr std::array<double, 3> kBudgetConcession = {1.2, 0.9, 0.6};
inline constexpr double kLowBudgetRatio = 0.65;
inline constexpr double kHighBudgetRatio = 0.85;

// Low if traveler_init <= 0.65 * agent_init, High if >= 0.85 * agent_init.
BudgetAssessment classify_budget(double traveler_init, double agent_init);

// How the traveler moves toward the agent.
//   Mirrored:    P_t' = P_a - (P_a - P_t) e^{-ck}   (default; larger c moves further)
//   OwnAnchored: P_t' = P_t + (P_a - P_t) e^{-ck}
//   Verbatim:    P_t' = P_a + (P_a - P_t) e^{-ck}   (overshoots the agent)
enum class TravelerVariant { Mirrored, OwnAnchored, Verbatim };

std::string_view variant_name(TravelerVariant v);
std::optional<TravelerVariant> parse_variant(std::string_view s);

struct NegotiationLedger {
    double agent_min_price = 0.0;
    double agent_price = 0.0;
    double traveler_price = 0.0;
    double phi = 0.05;
    double c_agent = 1.0;
    double c_traveler = 0.3;
    // Proposals made so far by each party; a step uses round + 1 as k.
    int agent_round = 0;
    int traveler_round = 0;
    TravelerVariant variant = TravelerVariant::Mirrored;

    int round_k() const { return agent_round > traveler_round ? agent_round : traveler_round; }
    double gap() const { return agent_price - traveler_price; }

    // Throws InvalidArgument / NonPositivePrice on a broken ledger.
    void check() const;

    void commit_agent(double price);
    void commit_traveler(double price);

    // Amenity change: shift the agent's offer and floor by the same amount.
    void apply_delta(double delta);
};

double agent_step(const NegotiationLedger& ledger);
double traveler_step(const NegotiationLedger& ledger);

// The tolerance rule as written: traveler_price <= agent_price - phi * agent_price.
bool should_accept(double traveler_price, double agent_price, double phi);

// Closing test used by the negotiation engine: the traveler's standing
// offer is within phi of the agent's, i.e. traveler_price >= (1 - phi) * agent_price.
bool within_tolerance(double traveler_price, double agent_price, double phi);

enum class Outcome { Agreed, Expired };

struct RecursionOptions {
    TravelerVariant variant = TravelerVariant::Mirrored;
    // Defaults to kAgentMinRatio * p_a0.
    std::optional<double> agent_min_price;
    bool round_to_cents = false;
};

inline constexpr double kAgentMinRatio = 0.85;
inline constexpr double kTravelerCRatio = 0.3;

struct Trajectory {
    // Index 0 holds the opening prices; index k the prices after round k.
    // When agreement lands after the agent's half of a round, the traveler
    // entry for that round repeats the previous offer.
    std::vector<double> agent_prices;
    std::vector<double> traveler_prices;
    Outcome outcome = Outcome::Expired;
    int rounds = 0;
    double final_price = 0.0;
};

// Each round: the agent counters, the engine checks for closure, then the
// traveler counters. Closure is checked once before the first round too.
Trajectory run_recursion(double p_t0, double p_a0, double c_a, double c_t, double phi, int max_rounds,
                         const RecursionOptions& options = {});

struct PhiDistribution {
    double mean = 0.05;
    double stddev = 0.01;
    double lo = 0.01;
    double hi = 0.10;
};

double sample_phi(Rng& rng, const PhiDistribution& dist = {});

}  // namespace abn
