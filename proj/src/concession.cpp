#include "abn/concession.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "abn/error.hpp"
#include "abn/money.hpp"
#include "abn/rng.hpp"

namespace abn {

std::string_view budget_name(BudgetClass b) {
    switch (b) {
        case BudgetClass::Low: return "Low";
        case BudgetClass::Moderate: return "Moderate";
        case BudgetClass::High: return "High";
    }
    return "";
}

BudgetAssessment classify_budget(double traveler_init, double agent_init) {
    if (!(traveler_init > 0.0) || !(agent_init > 0.0))
        throw Error(Errc::NonPositivePrice, fmt::format("classify_budget({}, {})", traveler_init, agent_init));
    BudgetClass b = BudgetClass::Moderate;
    if (traveler_init <= kLowBudgetRatio * agent_init)
        b = BudgetClass::Low;
    else if (traveler_init >= kHighBudgetRatio * agent_init)
        b = BudgetClass::High;
    return {b, kBudgetConcession[static_cast<std::size_t>(b)]};
}

std::string_view variant_name(TravelerVariant v) {
    switch (v) {
        case TravelerVariant::Mirrored: return "mirrored";
        case TravelerVariant::OwnAnchored: return "own-anchored";
        case TravelerVariant::Verbatim: return "verbatim";
    }
    return "";
}

std::optional<TravelerVariant> parse_variant(std::string_view s) {
    if (s == "mirrored") return TravelerVariant::Mirrored;
    if (s == "own-anchored") return TravelerVariant::OwnAnchored;
    if (s == "verbatim") return TravelerVariant::Verbatim;
    return std::nullopt;
}

void NegotiationLedger::check() const {
    if (!(traveler_price > 0.0) || !(agent_min_price > 0.0))
        throw Error(Errc::NonPositivePrice, "ledger prices must be positive");
    if (agent_price < agent_min_price)
        throw Error(Errc::InvalidArgument,
                    fmt::format("agent price {} below floor {}", agent_price, agent_min_price));
    if (!(phi > 0.0 && phi < 1.0)) throw Error(Errc::InvalidArgument, fmt::format("phi {} outside (0,1)", phi));
    if (!(c_agent > 0.0) || !(c_traveler > 0.0))
        throw Error(Errc::InvalidArgument, "concession factors must be positive");
    if (!(c_traveler < c_agent))
        throw Error(Errc::InvalidArgument, fmt::format("c_traveler {} must be below c_agent {}", c_traveler, c_agent));
}

void NegotiationLedger::commit_agent(double price) {
    agent_price = price;
    ++agent_round;
}

void NegotiationLedger::commit_traveler(double price) {
    traveler_price = price;
    ++traveler_round;
}

void NegotiationLedger::apply_delta(double delta) {
    agent_price = round_cents(agent_price + delta);
    agent_min_price = std::max(round_cents(agent_min_price + delta), 0.01);
    if (agent_price < agent_min_price) agent_price = agent_min_price;
}

namespace {

void require_gap(const NegotiationLedger& l, const char* who) {
    if (l.agent_price < l.traveler_price)
        throw Error(Errc::NegativeGap, fmt::format("{}: traveler {} above agent {}", who, l.traveler_price,
                                                   l.agent_price));
}

}  // namespace

double agent_step(const NegotiationLedger& l) {
    l.check();
    require_gap(l, "agent_step");
    const double k = l.agent_round + 1;
    const double proposed = l.traveler_price + (l.agent_price - l.traveler_price) * std::exp(-l.c_agent * k);
    return std::max(proposed, l.agent_min_price);
}

double traveler_step(const NegotiationLedger& l) {
    l.check();
    require_gap(l, "traveler_step");
    const double k = l.traveler_round + 1;
    const double decay = (l.agent_price - l.traveler_price) * std::exp(-l.c_traveler * k);
    switch (l.variant) {
        case TravelerVariant::Mirrored: return l.agent_price - decay;
        case TravelerVariant::OwnAnchored: return l.traveler_price + decay;
        case TravelerVariant::Verbatim: return l.agent_price + decay;
    }
    return l.traveler_price;
}

bool should_accept(double traveler_price, double agent_price, double phi) {
    return traveler_price <= agent_price - phi * agent_price;
}

bool within_tolerance(double traveler_price, double agent_price, double phi) {
    return traveler_price >= (1.0 - phi) * agent_price;
}

Trajectory run_recursion(double p_t0, double p_a0, double c_a, double c_t, double phi, int max_rounds,
                         const RecursionOptions& options) {
    if (p_t0 > p_a0) throw Error(Errc::NegativeGap, fmt::format("run_recursion: p_t0 {} > p_a0 {}", p_t0, p_a0));
    if (max_rounds < 0) throw Error(Errc::InvalidArgument, "max_rounds must be non-negative");

    NegotiationLedger l;
    l.agent_min_price = options.agent_min_price.value_or(kAgentMinRatio * p_a0);
    l.agent_price = p_a0;
    l.traveler_price = p_t0;
    l.phi = phi;
    l.c_agent = c_a;
    l.c_traveler = c_t;
    l.variant = options.variant;
    l.check();

    auto fix = [&](double v) { return options.round_to_cents ? round_cents(v) : v; };

    Trajectory t;
    t.agent_prices.push_back(p_a0);
    t.traveler_prices.push_back(p_t0);
    if (within_tolerance(p_t0, p_a0, phi)) {
        t.outcome = Outcome::Agreed;
        t.final_price = p_a0;
        return t;
    }
    for (int k = 1; k <= max_rounds; ++k) {
        l.commit_agent(fix(agent_step(l)));
        t.rounds = k;
        t.agent_prices.push_back(l.agent_price);
        if (within_tolerance(l.traveler_price, l.agent_price, phi)) {
            t.traveler_prices.push_back(l.traveler_price);
            t.outcome = Outcome::Agreed;
            t.final_price = l.agent_price;
            return t;
        }
        l.commit_traveler(fix(traveler_step(l)));
        t.traveler_prices.push_back(l.traveler_price);
        if (within_tolerance(l.traveler_price, l.agent_price, phi)) {
            t.outcome = Outcome::Agreed;
            t.final_price = l.agent_price;
            return t;
        }
    }
    t.outcome = Outcome::Expired;
    t.final_price = l.agent_price;
    return t;
}

double sample_phi(Rng& rng, const PhiDistribution& d) {
    return std::clamp(rng.normal(d.mean, d.stddev), d.lo, d.hi);
}

}  // namespace abn
