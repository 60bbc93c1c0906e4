#include "abn/pathway.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "abn/error.hpp"
#include "abn/money.hpp"
#include "abn/rng.hpp"

namespace abn {

namespace {

// Sub-stream ids for derive_seed; changing them changes every corpus.
enum Stream : std::uint64_t {
    kTravelerStream = 1,
    kAgentStream = 2,
    kPackageStream = 3,
    kPriceStream = 4,
    kPhiStream = 5,
    kEncoderStream = 6,
};

}  // namespace

Scenario sample_scenario(const Catalog& catalog, std::uint64_t seed, const PersonaTable& personas,
                         const ScenarioOptions& options) {
    if (catalog.packages.empty()) throw Error(Errc::EmptyCatalog, "sample_scenario");

    Scenario s;
    s.seed = seed;
    s.traveler = sample_traveler(derive_seed(seed, kTravelerStream, 0));
    s.agent = sample_agent(derive_seed(seed, kAgentStream, 0));

    Rng pkg_rng(derive_seed(seed, kPackageStream, 0));
    const TravelPackage& pkg = catalog.packages[pkg_rng.index(catalog.packages.size())];
    s.package = pkg.id;
    for (auto cat : kServiceCategories) {
        auto it = pkg.services.find(cat);
        if (it == pkg.services.end() || it->second.empty())
            throw Error(Errc::SchemaViolation, fmt::format("{}: no {} tiers", pkg.id, category_key(cat)));
        s.tier_selection[cat] = it->second[pkg_rng.index(it->second.size())].name;
    }

    auto amenities = pkg.all_amenities();
    const auto want = std::min<std::size_t>(static_cast<std::size_t>(std::max(options.included_amenities, 0)),
                                            amenities.size());
    long price = base_price(pkg, s.tier_selection);
    // Partial Fisher-Yates keeps the draw count fixed at `want`.
    for (std::size_t i = 0; i < want; ++i) {
        const std::size_t j = i + pkg_rng.index(amenities.size() - i);
        std::swap(amenities[i], amenities[j]);
        s.included_amenities.push_back(amenities[i].name);
        price += amenities[i].price;
    }
    s.agent_init_price = static_cast<double>(price);

    Rng price_rng(derive_seed(seed, kPriceStream, 0));
    double shift = 0.0;
    if (auto it = personas.buying_style_shift.find(s.traveler.buy); it != personas.buying_style_shift.end())
        shift = it->second;
    const double mean = (options.base_ratio + shift) * s.agent_init_price;
    const double draw = price_rng.normal(mean, options.spread_ratio * s.agent_init_price);
    s.traveler_init_price = round_cents(std::clamp(draw, 0.01 * s.agent_init_price, s.agent_init_price));

    Rng phi_rng(derive_seed(seed, kPhiStream, 0));
    s.phi = sample_phi(phi_rng, options.phi);

    const auto traveler_params = behavior_params(s.traveler, s.agent, personas).first;
    for (const auto& opt : pkg.all_amenities()) {
        double p = traveler_params.amenity_accept_prob;
        if (personas.matches_theme(s.traveler.pref, opt.name)) p += personas.theme_boost;
        s.amenity_pref[opt.name] = std::clamp(p, 0.0, 1.0);
    }
    return s;
}

NegotiationTerms make_terms(const Scenario& scenario, const BehaviorParams& traveler, const BehaviorParams& agent,
                            const ConcessionSettings& settings) {
    const auto assessed = classify_budget(scenario.traveler_init_price, scenario.agent_init_price);
    NegotiationTerms t;
    t.budget = assessed.budget;
    t.c_agent = settings.budget_c[static_cast<std::size_t>(assessed.budget)] * agent.concession_scale;
    t.c_traveler = settings.traveler_c_ratio * t.c_agent * traveler.concession_scale;
    t.agent_min_price = round_cents(settings.agent_min_ratio * scenario.agent_init_price);
    t.variant = settings.variant;
    if (!(t.c_traveler < t.c_agent))
        throw Error(Errc::InvalidArgument,
                    fmt::format("traveler concession {} not below agent concession {}", t.c_traveler, t.c_agent));
    return t;
}

namespace {

// Policy constants. They shape corpus texture only; the invariants the
// validator checks hold for any values in [0, 1].
constexpr double kDiscoveryClarifyProb = 0.3;
constexpr int kDiscoveryClarifyMax = 2;
constexpr double kAskPriceProb = 0.15;
constexpr double kOpenWithConcernProb = 0.3;
constexpr double kConcernProb = 0.12;
constexpr double kClarifyProb = 0.05;
constexpr double kAmenityClarifyProb = 0.15;
constexpr double kPostAmenityConcernProb = 0.3;
constexpr double kJustifiedConsentBoost = 0.25;
constexpr double kArgumentativeJustifyProb = 0.3;
constexpr double kOpenMindedJustifyProb = 0.15;
constexpr double kVoluntaryAmenityProb = 0.1;
constexpr int kVoluntaryAmenityMax = 2;
constexpr int kConcernAmenityMax = 3;
constexpr double kConcedeOnConcernProb = 0.7;
constexpr double kRemoveProb = 0.6;
constexpr double kThemedAddProb = 0.6;

struct Pending {
    std::string amenity;
    double delta = 0.0;
    bool add = true;
    bool consented = false;
};

class Encoder {
public:
    Encoder(const Scenario& sc, const TravelPackage& pkg, const TransitionGraph& graph,
            const std::pair<BehaviorParams, BehaviorParams>& params, const EncoderOptions& opt)
        : sc_(sc), pkg_(pkg), graph_(graph), tp_(params.first), ap_(params.second), opt_(opt),
          rng_(derive_seed(sc.seed, kEncoderStream, 0)), included_(sc.included_amenities) {
        if (sc.package != pkg.id)
            throw Error(Errc::InvalidArgument, fmt::format("scenario package {} vs {}", sc.package, pkg.id));
        if (sc.traveler_init_price > sc.agent_init_price)
            throw Error(Errc::NegativeGap, "traveler_init_price above agent_init_price");
        terms_ = make_terms(sc, tp_, ap_, opt.concession);
        ledger_.agent_min_price = terms_.agent_min_price;
        ledger_.agent_price = sc.agent_init_price;
        ledger_.traveler_price = sc.traveler_init_price;
        ledger_.phi = sc.phi;
        ledger_.c_agent = terms_.c_agent;
        ledger_.c_traveler = terms_.c_traveler;
        ledger_.variant = terms_.variant;
        ledger_.check();
        for (const auto& a : pkg.all_amenities()) price_of_[a.name] = a.price;
        p_justify_ = sc.agent.arg == ArgProfile::Argumentative ? kArgumentativeJustifyProb : kOpenMindedJustifyProb;
    }

    Pathway run() {
        emit({kStartState.act, Speaker::Agent, kStartState.phase, {}});
        while (static_cast<int>(events_.size()) < opt_.max_turns) {
            const ActEvent last = events_.back();
            if (is_terminal(last.act)) break;
            if (last.speaker == Speaker::Agent)
                traveler_turn(last);
            else
                agent_turn(last);
        }
        Pathway p;
        p.scenario = sc_;
        p.terms = terms_;
        p.traveler_params = tp_;
        p.agent_params = ap_;
        p.events = std::move(events_);
        p.outcome = accepted_ ? Outcome::Agreed : Outcome::Expired;
        p.final_price = ledger_.agent_price;
        return p;
    }

private:
    struct Move {
        DialogAct act;
        Speaker who;
        Phase phase;
        Slots slots;
    };

    int next_turn() const { return static_cast<int>(events_.size()) + 1; }
    bool converged() const { return within_tolerance(ledger_.traveler_price, ledger_.agent_price, sc_.phi); }

    // Events of `who` matching `pred` in the run of `phase` events at the tail.
    template <typename Pred>
    int stretch_count(Phase phase, Speaker who, Pred pred) const {
        int n = 0;
        for (auto it = events_.rbegin(); it != events_.rend() && it->phase == phase; ++it)
            if (it->speaker == who && pred(it->act)) ++n;
        return n;
    }
    int price_acts(Speaker who) const { return stretch_count(Phase::PriceNegotiation, who, is_price_act); }
    int arg_acts(Speaker who) const {
        return stretch_count(Phase::Argumentation, who,
                             [](DialogAct a) { return category(a) == ActCategory::Argumentation; });
    }

    double next_agent_price() const { return round_cents(agent_step(ledger_)); }
    double next_traveler_price() const {
        return traveler_stated_ ? round_cents(traveler_step(ledger_)) : sc_.traveler_init_price;
    }

    std::string clarify_topic() {
        if (pending_) return pending_->amenity;
        if (!included_.empty()) return included_[rng_.index(included_.size())];
        auto all = pkg_.all_amenities();
        return all[rng_.index(all.size())].name;
    }

    void emit(Move m) {
        ActEvent e{next_turn(), m.who, m.act, m.phase, std::move(m.slots)};
        if (!events_.empty() && !graph_.is_legal(events_.back().state(), e.state()))
            throw Error(Errc::GraphDeadEnd,
                        fmt::format("no edge {} -> {}", to_string(events_.back().state()), to_string(e.state())));
        switch (e.act) {
            case DialogAct::NegotiatePriceDecrease:
            case DialogAct::NegotiatePriceIncrease:
            case DialogAct::NegotiatePriceNochange:
                if (e.speaker == Speaker::Agent) {
                    ledger_.commit_agent(*e.slots.price);
                } else if (!traveler_stated_) {
                    traveler_stated_ = true;
                } else {
                    ledger_.commit_traveler(*e.slots.price);
                }
                break;
            case DialogAct::ProvideConsent:
                pending_->consented = true;
                break;
            case DialogAct::ConsentResponse:
                ledger_.apply_delta(pending_->delta);
                if (pending_->add)
                    included_.push_back(pending_->amenity);
                else
                    std::erase(included_, pending_->amenity);
                pending_.reset();
                e.slots.price = ledger_.agent_price;
                break;
            case DialogAct::Accept:
                accepted_ = true;
                break;
            default:
                break;
        }
        events_.push_back(std::move(e));
    }

    Slots price_slot(double p) const { return {p, std::nullopt, std::nullopt}; }
    Slots amenity_slot(std::string a) const { return {std::nullopt, std::move(a), std::nullopt}; }

    void clarify(Phase phase) {
        emit({DialogAct::AskClarificationX, Speaker::Traveler, phase, amenity_slot(clarify_topic())});
    }

    void traveler_offer() {
        emit({DialogAct::NegotiatePriceDecrease, Speaker::Traveler, Phase::PriceNegotiation,
              price_slot(next_traveler_price())});
    }

    void traveler_concern(Phase phase) { emit({DialogAct::ConcernPrice, Speaker::Traveler, phase, {}}); }

    void traveler_back_to_price() {
        if (rng_.bernoulli(kPostAmenityConcernProb))
            traveler_concern(Phase::PriceNegotiation);
        else
            traveler_offer();
    }

    void consent_or_refuse() {
        const double pref = sc_.amenity_pref.count(pending_->amenity) ? sc_.amenity_pref.at(pending_->amenity) : 0.5;
        const double p = pending_->add ? pref : 1.0 - pref;
        if (rng_.bernoulli(p))
            emit({DialogAct::ProvideConsent, Speaker::Traveler, Phase::AmenityNegotiation, {}});
        else
            emit({DialogAct::DisagreeX, Speaker::Traveler, Phase::AmenityNegotiation,
                  amenity_slot(pending_->amenity)});
    }

    void traveler_turn(const ActEvent& last) {
        if (last.act == DialogAct::GreetAsk) {
            emit({DialogAct::ElicitPreference, Speaker::Traveler, Phase::Discovery, {}});
            return;
        }
        // An unresolved amenity proposal cannot be accepted over.
        const bool proposal_open = pending_ && !pending_->consented;
        if (converged() && !proposal_open) {
            if (next_turn() + 1 < opt_.min_turns)
                clarify(last.phase);
            else
                emit({DialogAct::Accept, Speaker::Traveler, Phase::Closing, price_slot(ledger_.agent_price)});
            return;
        }
        switch (last.phase) {
            case Phase::Discovery: return discovery_reply(last);
            case Phase::PriceNegotiation: return price_reply(last);
            case Phase::Argumentation: return argument_reply(last);
            case Phase::AmenityNegotiation: return amenity_reply(last);
            default: break;
        }
        throw Error(Errc::GraphDeadEnd, "traveler has no move after " + to_string(last.state()));
    }

    void discovery_reply(const ActEvent& last) {
        if (discovery_clarifications_ < kDiscoveryClarifyMax && rng_.bernoulli(kDiscoveryClarifyProb)) {
            ++discovery_clarifications_;
            clarify(Phase::Discovery);
        } else if (!asked_price_ && last.act != DialogAct::TellPrice && rng_.bernoulli(kAskPriceProb)) {
            asked_price_ = true;
            emit({DialogAct::AskPrice, Speaker::Traveler, Phase::Discovery, {}});
        } else if (rng_.bernoulli(kOpenWithConcernProb)) {
            traveler_concern(Phase::PriceNegotiation);
        } else {
            traveler_offer();
        }
    }

    void price_reply(const ActEvent& last) {
        const bool capped = price_acts(Speaker::Traveler) >= tp_.max_price_rounds;
        const bool can_argue = tp_.argument_turn_budget > 0;
        if (capped) {
            if (can_argue)
                emit({DialogAct::DisagreePrice, Speaker::Traveler, Phase::Argumentation, {}});
            else
                traveler_concern(Phase::PriceNegotiation);
        } else if (can_argue && rng_.bernoulli(0.5 * tp_.justification_demand_prob)) {
            emit({DialogAct::DisagreePrice, Speaker::Traveler, Phase::Argumentation, {}});
        } else if (rng_.bernoulli(kConcernProb)) {
            traveler_concern(Phase::PriceNegotiation);
        } else if (last.act != DialogAct::ProvideClarificationX && rng_.bernoulli(kClarifyProb)) {
            clarify(Phase::PriceNegotiation);
        } else {
            traveler_offer();
        }
    }

    void argument_reply(const ActEvent& last) {
        if (arg_acts(Speaker::Traveler) < tp_.argument_turn_budget && rng_.bernoulli(tp_.justification_demand_prob)) {
            if (rng_.bernoulli(0.5))
                emit({DialogAct::DisagreePrice, Speaker::Traveler, Phase::Argumentation, {}});
            else
                traveler_concern(Phase::Argumentation);
        } else if (last.act != DialogAct::ProvideClarificationX && rng_.bernoulli(kClarifyProb)) {
            clarify(Phase::Argumentation);
        } else {
            traveler_offer();
        }
    }

    void amenity_reply(const ActEvent& last) {
        switch (last.act) {
            case DialogAct::NegotiateAddX:
            case DialogAct::NegotiateRemoveX:
                if (rng_.bernoulli(kAmenityClarifyProb))
                    clarify(Phase::AmenityNegotiation);
                else
                    consent_or_refuse();
                return;
            case DialogAct::ProvideClarificationX:
                if (pending_ && !pending_->consented)
                    consent_or_refuse();
                else
                    traveler_back_to_price();
                return;
            case DialogAct::JustifyX:
            case DialogAct::AssuranceX: {
                const double pref =
                    sc_.amenity_pref.count(pending_->amenity) ? sc_.amenity_pref.at(pending_->amenity) : 0.5;
                const double p = (pending_->add ? pref : 1.0 - pref) + kJustifiedConsentBoost;
                if (rng_.bernoulli(std::min(p, 1.0))) {
                    emit({DialogAct::ProvideConsent, Speaker::Traveler, Phase::AmenityNegotiation, {}});
                } else {
                    pending_.reset();
                    traveler_back_to_price();
                }
                return;
            }
            default:
                traveler_back_to_price();
                return;
        }
    }

    // Agent side.

    bool at_price_cap() const { return price_acts(Speaker::Agent) >= ap_.max_price_rounds; }

    std::vector<AmenityOption> addable() const {
        std::vector<AmenityOption> out;
        for (const auto& a : pkg_.all_amenities())
            if (std::find(included_.begin(), included_.end(), a.name) == included_.end()) out.push_back(a);
        return out;
    }

    void propose_amenity(bool allow_remove) {
        const auto candidates = addable();
        const bool remove = allow_remove && !included_.empty() && (candidates.empty() || rng_.bernoulli(kRemoveProb));
        Pending p;
        if (remove) {
            p.amenity = included_[rng_.index(included_.size())];
            p.add = false;
            p.delta = -static_cast<double>(price_of_.at(p.amenity));
        } else {
            if (candidates.empty()) throw Error(Errc::GraphDeadEnd, "no amenity left to add");
            std::vector<AmenityOption> themed;
            for (const auto& a : candidates) {
                auto it = sc_.amenity_pref.find(a.name);
                if (it != sc_.amenity_pref.end() && it->second > tp_.amenity_accept_prob) themed.push_back(a);
            }
            const auto& pool = (!themed.empty() && rng_.bernoulli(kThemedAddProb)) ? themed : candidates;
            const auto& pick = pool[rng_.index(pool.size())];
            p.amenity = pick.name;
            p.add = true;
            p.delta = static_cast<double>(pick.price);
        }
        ++amenity_moves_;
        const auto act = p.add ? DialogAct::NegotiateAddX : DialogAct::NegotiateRemoveX;
        Slots slots{std::nullopt, p.amenity, p.delta};
        pending_ = std::move(p);
        emit({act, Speaker::Agent, Phase::AmenityNegotiation, std::move(slots)});
    }

    void tell_price() {
        emit({DialogAct::TellPrice, Speaker::Agent, Phase::PriceNegotiation, price_slot(ledger_.agent_price)});
    }

    // Agent concession after a complaint rather than an offer.
    void concede() {
        const double np = next_agent_price();
        const auto act = np != ledger_.agent_price ? DialogAct::NegotiatePriceDecrease : DialogAct::NegotiatePriceNochange;
        emit({act, Speaker::Agent, Phase::PriceNegotiation, price_slot(np)});
    }

    void argue_price(Phase phase, bool allow_assurance) {
        (void)phase;
        const auto act = allow_assurance && rng_.bernoulli(0.5) ? DialogAct::AssurancePrice : DialogAct::JustifyPrice;
        emit({act, Speaker::Agent, Phase::Argumentation, {}});
    }

    void agent_turn(const ActEvent& last) {
        switch (last.act) {
            case DialogAct::ElicitPreference:
                emit({DialogAct::Inform, Speaker::Agent, Phase::Discovery, price_slot(ledger_.agent_price)});
                return;
            case DialogAct::AskClarificationX:
                emit({DialogAct::ProvideClarificationX, Speaker::Agent, last.phase, amenity_slot(*last.slots.amenity)});
                return;
            case DialogAct::AskPrice:
                emit({DialogAct::TellPrice, Speaker::Agent, Phase::Discovery, price_slot(ledger_.agent_price)});
                return;
            case DialogAct::Accept:
                emit({DialogAct::AcknowledgeAcceptance, Speaker::Agent, Phase::Closing, {}});
                return;
            case DialogAct::ProvideConsent:
                emit({DialogAct::ConsentResponse, Speaker::Agent, Phase::AmenityNegotiation, {}});
                return;
            case DialogAct::NegotiatePriceDecrease: return answer_offer();
            case DialogAct::ConcernPrice: return answer_concern(last);
            case DialogAct::DisagreePrice: return answer_disagreement();
            case DialogAct::DisagreeX: return answer_refusal();
            default: break;
        }
        throw Error(Errc::GraphDeadEnd, "agent has no move after " + to_string(last.state()));
    }

    void answer_offer() {
        if (converged()) return tell_price();
        if (at_price_cap()) return propose_amenity(true);
        if (ap_.argument_turn_budget > 0 && rng_.bernoulli(p_justify_))
            return argue_price(Phase::Argumentation, true);
        if (amenity_moves_ < kVoluntaryAmenityMax && rng_.bernoulli(kVoluntaryAmenityProb))
            return propose_amenity(true);
        const double np = next_agent_price();
        const auto act =
            np != ledger_.agent_price ? DialogAct::NegotiatePriceIncrease : DialogAct::NegotiatePriceNochange;
        emit({act, Speaker::Agent, Phase::PriceNegotiation, price_slot(np)});
    }

    void answer_concern(const ActEvent& last) {
        if (converged()) return tell_price();
        const int used = last.phase == Phase::Argumentation ? arg_acts(Speaker::Agent) : 0;
        const bool can_argue = used < ap_.argument_turn_budget;
        const bool capped = at_price_cap();
        const bool moves = next_agent_price() != ledger_.agent_price;
        if (can_argue && rng_.bernoulli(p_justify_ + 0.2)) return argue_price(Phase::Argumentation, true);
        if (!capped && moves && rng_.bernoulli(kConcedeOnConcernProb)) return concede();
        if (amenity_moves_ < kConcernAmenityMax && (!included_.empty() || !addable().empty()))
            return propose_amenity(true);
        if (!capped) return concede();
        tell_price();
    }

    void answer_disagreement() {
        const bool can_argue = arg_acts(Speaker::Agent) < ap_.argument_turn_budget;
        const bool moves = next_agent_price() != ledger_.agent_price;
        if (can_argue && rng_.bernoulli(0.5)) return argue_price(Phase::Argumentation, false);
        if (moves) return concede();
        if (!addable().empty()) return propose_amenity(false);
        if (can_argue) return argue_price(Phase::Argumentation, false);
        concede();
    }

    void answer_refusal() {
        if (rng_.bernoulli(tp_.justification_demand_prob)) {
            const auto act = rng_.bernoulli(0.5) ? DialogAct::AssuranceX : DialogAct::JustifyX;
            emit({act, Speaker::Agent, Phase::AmenityNegotiation, amenity_slot(pending_->amenity)});
            return;
        }
        pending_.reset();
        if (next_agent_price() != ledger_.agent_price) return concede();
        tell_price();
    }

    const Scenario& sc_;
    const TravelPackage& pkg_;
    const TransitionGraph& graph_;
    BehaviorParams tp_;
    BehaviorParams ap_;
    EncoderOptions opt_;
    Rng rng_;
    NegotiationTerms terms_;
    NegotiationLedger ledger_;
    std::vector<std::string> included_;
    std::map<std::string, long> price_of_;
    std::optional<Pending> pending_;
    std::vector<ActEvent> events_;
    double p_justify_ = 0.0;
    bool traveler_stated_ = false;
    bool asked_price_ = false;
    bool accepted_ = false;
    int discovery_clarifications_ = 0;
    int amenity_moves_ = 0;
};

}  // namespace

Pathway encode_pathway(const Scenario& scenario, const TravelPackage& package, const TransitionGraph& graph,
                       const std::pair<BehaviorParams, BehaviorParams>& params, const EncoderOptions& options) {
    return Encoder(scenario, package, graph, params, options).run();
}

std::string_view violation_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::TurnCount: return "TurnCount";
        case ViolationKind::TurnNumbering: return "TurnNumbering";
        case ViolationKind::Prefix: return "Prefix";
        case ViolationKind::Alternation: return "Alternation";
        case ViolationKind::IllegalTransition: return "IllegalTransition";
        case ViolationKind::SlotMismatch: return "SlotMismatch";
        case ViolationKind::AcceptOutcome: return "AcceptOutcome";
        case ViolationKind::AfterAccept: return "AfterAccept";
        case ViolationKind::LedgerMismatch: return "LedgerMismatch";
        case ViolationKind::LabelMismatch: return "LabelMismatch";
        case ViolationKind::AmenityDelta: return "AmenityDelta";
        case ViolationKind::PriceStretch: return "PriceStretch";
        case ViolationKind::ArgumentStretch: return "ArgumentStretch";
        case ViolationKind::AcceptCondition: return "AcceptCondition";
    }
    return "";
}

namespace {

class Replay {
public:
    Replay(const Pathway& p, const Catalog* catalog, const ValidationLimits& limits, std::vector<Violation>& out)
        : p_(p), limits_(limits), out_(out), included_(p.scenario.included_amenities) {
        if (catalog) pkg_ = catalog->find(p.scenario.package);
        if (catalog && !pkg_) add(ViolationKind::AmenityDelta, 0, "package " + p.scenario.package + " not in catalog");
        l_.agent_min_price = p.terms.agent_min_price;
        l_.agent_price = p.scenario.agent_init_price;
        l_.traveler_price = p.scenario.traveler_init_price;
        l_.phi = p.scenario.phi;
        l_.c_agent = p.terms.c_agent;
        l_.c_traveler = p.terms.c_traveler;
        l_.variant = p.terms.variant;
    }

    void step(const ActEvent& e) {
        const auto price = e.slots.price;
        auto expect = [&](double want, std::string_view what) {
            if (price && std::fabs(*price - want) > limits_.price_tolerance + 1e-9)
                add(ViolationKind::LedgerMismatch, e.turn,
                    fmt::format("{} {} expected {}", what, format_price(*price), format_price(want)));
        };
        try {
            switch (e.act) {
                case DialogAct::Inform:
                case DialogAct::TellPrice:
                    expect(l_.agent_price, act_name(e.act));
                    break;
                case DialogAct::NegotiatePriceIncrease:
                case DialogAct::NegotiatePriceDecrease:
                case DialogAct::NegotiatePriceNochange:
                    if (e.speaker == Speaker::Agent) {
                        const double prev = l_.agent_price;
                        const double want = round_cents(agent_step(l_));
                        expect(want, "agent price");
                        const bool unchanged = want == prev;
                        if (unchanged != (e.act == DialogAct::NegotiatePriceNochange))
                            add(ViolationKind::LabelMismatch, e.turn,
                                fmt::format("{} with price {} -> {}", act_name(e.act), format_price(prev),
                                            format_price(want)));
                        l_.commit_agent(want);
                    } else if (!stated_) {
                        expect(p_.scenario.traveler_init_price, "opening traveler offer");
                        stated_ = true;
                    } else {
                        const double want = round_cents(traveler_step(l_));
                        expect(want, "traveler price");
                        l_.commit_traveler(want);
                    }
                    break;
                case DialogAct::NegotiateAddX:
                case DialogAct::NegotiateRemoveX:
                    propose(e);
                    break;
                case DialogAct::ProvideConsent:
                    if (!pending_) add(ViolationKind::AmenityDelta, e.turn, "consent without a proposal");
                    break;
                case DialogAct::ConsentResponse:
                    if (!pending_) {
                        add(ViolationKind::AmenityDelta, e.turn, "consent response without a proposal");
                    } else {
                        l_.apply_delta(pending_->second);
                        if (pending_->second > 0)
                            included_.push_back(pending_->first);
                        else
                            std::erase(included_, pending_->first);
                        pending_.reset();
                    }
                    expect(l_.agent_price, "post-adjustment price");
                    break;
                case DialogAct::Accept:
                    expect(l_.agent_price, "accepted price");
                    if (!within_tolerance(l_.traveler_price, l_.agent_price, l_.phi))
                        add(ViolationKind::AcceptCondition, e.turn,
                            fmt::format("traveler {} not within {} of agent {}", format_price(l_.traveler_price),
                                        l_.phi, format_price(l_.agent_price)));
                    break;
                default:
                    break;
            }
        } catch (const Error& err) {
            add(ViolationKind::LedgerMismatch, e.turn, err.what());
        }
    }

private:
    void propose(const ActEvent& e) {
        if (!e.slots.amenity || !e.slots.delta) return;  // reported as a slot violation
        const std::string& name = *e.slots.amenity;
        const double delta = *e.slots.delta;
        const bool add_act = e.act == DialogAct::NegotiateAddX;
        if (add_act != (delta > 0))
            add(ViolationKind::AmenityDelta, e.turn, fmt::format("delta {} has the wrong sign", delta));
        const bool have = std::find(included_.begin(), included_.end(), name) != included_.end();
        if (add_act && have) add(ViolationKind::AmenityDelta, e.turn, name + " is already included");
        if (!add_act && !have) add(ViolationKind::AmenityDelta, e.turn, name + " is not included");
        if (pkg_) {
            const auto all = pkg_->all_amenities();
            auto it = std::find_if(all.begin(), all.end(), [&](const AmenityOption& o) { return o.name == name; });
            if (it == all.end())
                add(ViolationKind::AmenityDelta, e.turn, name + " not offered by " + pkg_->id);
            else if (std::fabs(std::fabs(delta) - static_cast<double>(it->price)) > 1e-9)
                add(ViolationKind::AmenityDelta, e.turn,
                    fmt::format("{} delta {} vs catalog price {}", name, delta, it->price));
        }
        pending_ = std::make_pair(name, delta);
    }

    void add(ViolationKind k, int turn, std::string detail) { out_.push_back({k, turn, std::move(detail)}); }

    const Pathway& p_;
    ValidationLimits limits_;
    std::vector<Violation>& out_;
    const TravelPackage* pkg_ = nullptr;
    NegotiationLedger l_;
    bool stated_ = false;
    std::vector<std::string> included_;
    std::optional<std::pair<std::string, double>> pending_;
};

void check_slots(const ActEvent& e, std::vector<Violation>& out) {
    auto bad = [&](std::string what) { out.push_back({ViolationKind::SlotMismatch, e.turn, std::move(what)}); };
    if (is_price_bearing(e.act) != e.slots.price.has_value())
        bad(fmt::format("{} {} a price slot", act_name(e.act), e.slots.price ? "must not carry" : "needs"));
    if (is_x_act(e.act) != e.slots.amenity.has_value())
        bad(fmt::format("{} {} an amenity slot", act_name(e.act), e.slots.amenity ? "must not carry" : "needs"));
    const bool wants_delta = e.act == DialogAct::NegotiateAddX || e.act == DialogAct::NegotiateRemoveX;
    if (wants_delta != e.slots.delta.has_value())
        bad(fmt::format("{} {} a delta slot", act_name(e.act), e.slots.delta ? "must not carry" : "needs"));
    if (e.slots.price && !(*e.slots.price > 0.0)) bad("non-positive price");
}

void check_stretches(const Pathway& p, std::vector<Violation>& out) {
    const auto& ev = p.events;
    std::size_t i = 0;
    while (i < ev.size()) {
        std::size_t j = i;
        while (j < ev.size() && ev[j].phase == ev[i].phase) ++j;
        const Phase phase = ev[i].phase;
        if (phase == Phase::PriceNegotiation || phase == Phase::Argumentation) {
            int agent = 0, traveler = 0;
            for (std::size_t k = i; k < j; ++k) {
                const auto& e = ev[k];
                const bool counts = phase == Phase::PriceNegotiation
                                        ? is_price_act(e.act)
                                        : category(e.act) == ActCategory::Argumentation;
                if (!counts) continue;
                int& n = e.speaker == Speaker::Agent ? agent : traveler;
                const auto& params = e.speaker == Speaker::Agent ? p.agent_params : p.traveler_params;
                const int cap = phase == Phase::PriceNegotiation ? params.max_price_rounds : params.argument_turn_budget;
                if (++n == cap + 1)
                    out.push_back({phase == Phase::PriceNegotiation ? ViolationKind::PriceStretch
                                                                    : ViolationKind::ArgumentStretch,
                                   e.turn,
                                   fmt::format("{} exceeds {} in one {} stretch", speaker_name(e.speaker), cap,
                                               phase_name(phase))});
            }
        }
        i = j;
    }
}

}  // namespace

std::vector<Violation> validate_pathway(const Pathway& p, const TransitionGraph& graph, const Catalog* catalog,
                                        const ValidationLimits& limits) {
    std::vector<Violation> out;
    const auto& ev = p.events;
    const int n = static_cast<int>(ev.size());
    if (n < limits.min_turns || n > limits.max_turns)
        out.push_back({ViolationKind::TurnCount, 0,
                       fmt::format("{} turns outside [{}, {}]", n, limits.min_turns, limits.max_turns)});

    constexpr std::array<std::pair<DialogAct, Speaker>, 3> kPrefix = {{
        {DialogAct::GreetAsk, Speaker::Agent},
        {DialogAct::ElicitPreference, Speaker::Traveler},
        {DialogAct::Inform, Speaker::Agent},
    }};
    for (std::size_t i = 0; i < kPrefix.size(); ++i) {
        if (i >= ev.size() || ev[i].act != kPrefix[i].first || ev[i].speaker != kPrefix[i].second) {
            out.push_back({ViolationKind::Prefix, static_cast<int>(i) + 1,
                           fmt::format("expected {} by {}", act_name(kPrefix[i].first),
                                       speaker_name(kPrefix[i].second))});
            break;
        }
    }

    Replay replay(p, catalog, limits, out);
    int accept_turn = 0;
    for (int i = 0; i < n; ++i) {
        const auto& e = ev[i];
        if (e.turn != i + 1)
            out.push_back({ViolationKind::TurnNumbering, i + 1, fmt::format("turn field {}", e.turn)});
        check_slots(e, out);
        if (i > 0) {
            const auto& prev = ev[i - 1];
            if (prev.speaker == e.speaker)
                out.push_back({ViolationKind::Alternation, e.turn,
                               fmt::format("{} speaks twice in a row", speaker_name(e.speaker))});
            if (!graph.is_legal(prev.state(), e.state()))
                out.push_back({ViolationKind::IllegalTransition, e.turn,
                               to_string(prev.state()) + " -> " + to_string(e.state())});
        }
        if (accept_turn) {
            if (e.act != DialogAct::AcknowledgeAcceptance || e.turn != accept_turn + 1)
                out.push_back({ViolationKind::AfterAccept, e.turn,
                               fmt::format("{} follows Accept", act_name(e.act))});
        } else if (e.act == DialogAct::AcknowledgeAcceptance) {
            out.push_back({ViolationKind::AfterAccept, e.turn, "Acknowledge-acceptance without Accept"});
        }
        if (e.act == DialogAct::Accept && !accept_turn) accept_turn = e.turn;
        replay.step(e);
    }

    const bool agreed = p.outcome == Outcome::Agreed;
    if (agreed != (accept_turn != 0))
        out.push_back({ViolationKind::AcceptOutcome, accept_turn,
                       agreed ? "Agreed outcome without Accept" : "Accept in an Expired pathway"});
    if (agreed && accept_turn) {
        const auto& acc = ev[accept_turn - 1];
        if (acc.slots.price && std::fabs(*acc.slots.price - p.final_price) > limits.price_tolerance + 1e-9)
            out.push_back({ViolationKind::AcceptOutcome, accept_turn,
                           fmt::format("final price {} vs accepted {}", format_price(p.final_price),
                                       format_price(*acc.slots.price))});
    }
    check_stretches(p, out);
    return out;
}

}  // namespace abn
