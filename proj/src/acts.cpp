#include "abn/acts.hpp"

#include <fstream>
#include <queue>
#include <sstream>

#include <fmt/format.h>

#include "abn/error.hpp"

namespace abn {

namespace {

struct ActInfo {
    DialogAct act;
    std::string_view name;
    ActCategory category;
    RoleConstraint role;
};

// Role column follows the act definitions: only acts whose definition names
// a party are pinned to it.
constexpr std::array<ActInfo, kDialogActCount> kActInfo = {{
    {DialogAct::NegotiatePriceIncrease, "Negotiate-price-increase", ActCategory::Negotiation, RoleConstraint::Agent},
    {DialogAct::NegotiatePriceDecrease, "Negotiate-price-decrease", ActCategory::Negotiation, RoleConstraint::Traveler},
    {DialogAct::NegotiatePriceNochange, "Negotiate-price-nochange", ActCategory::Negotiation, RoleConstraint::Either},
    {DialogAct::NegotiateAddX, "Negotiate-add-X", ActCategory::Negotiation, RoleConstraint::Either},
    {DialogAct::NegotiateRemoveX, "Negotiate-remove-X", ActCategory::Negotiation, RoleConstraint::Either},
    {DialogAct::ConcernPrice, "Concern-price", ActCategory::Argumentation, RoleConstraint::Either},
    {DialogAct::DisagreePrice, "Disagree-price", ActCategory::Argumentation, RoleConstraint::Either},
    {DialogAct::JustifyPrice, "Justify-price", ActCategory::Argumentation, RoleConstraint::Either},
    {DialogAct::AssurancePrice, "Assurance-price", ActCategory::Argumentation, RoleConstraint::Either},
    {DialogAct::DisagreeX, "Disagree-X", ActCategory::Argumentation, RoleConstraint::Either},
    {DialogAct::JustifyX, "Justify-X", ActCategory::Argumentation, RoleConstraint::Either},
    {DialogAct::AssuranceX, "Assurance-X", ActCategory::Argumentation, RoleConstraint::Either},
    {DialogAct::GreetAsk, "Greet-Ask", ActCategory::General, RoleConstraint::Agent},
    {DialogAct::Inform, "Inform", ActCategory::General, RoleConstraint::Agent},
    {DialogAct::ElicitPreference, "Elicit-preference", ActCategory::General, RoleConstraint::Traveler},
    {DialogAct::AskPrice, "Ask-price", ActCategory::General, RoleConstraint::Either},
    {DialogAct::TellPrice, "Tell-price", ActCategory::General, RoleConstraint::Either},
    {DialogAct::AskClarificationX, "Ask-clarification-X", ActCategory::General, RoleConstraint::Either},
    {DialogAct::ProvideClarificationX, "Provide-clarification-X", ActCategory::General, RoleConstraint::Either},
    {DialogAct::ProvideConsent, "Provide-consent", ActCategory::General, RoleConstraint::Either},
    {DialogAct::ConsentResponse, "Consent-response", ActCategory::General, RoleConstraint::Agent},
    {DialogAct::Accept, "Accept", ActCategory::General, RoleConstraint::Either},
    {DialogAct::AcknowledgeAcceptance, "Acknowledge-acceptance", ActCategory::General, RoleConstraint::Either},
}};

const ActInfo& info(DialogAct act) { return kActInfo[static_cast<std::size_t>(act)]; }

constexpr std::array<std::string_view, 6> kPhaseNames = {
    "Opening", "Discovery", "PriceNegotiation", "Argumentation", "AmenityNegotiation", "Closing"};

}  // namespace

const std::array<DialogAct, kDialogActCount> kAllDialogActs = [] {
    std::array<DialogAct, kDialogActCount> out{};
    for (std::size_t i = 0; i < kDialogActCount; ++i) out[i] = kActInfo[i].act;
    return out;
}();

std::string_view act_name(DialogAct act) { return info(act).name; }

std::optional<DialogAct> parse_act(std::string_view name) {
    for (const auto& row : kActInfo)
        if (row.name == name) return row.act;
    return std::nullopt;
}

std::string_view phase_name(Phase phase) { return kPhaseNames[static_cast<std::size_t>(phase)]; }

std::optional<Phase> parse_phase(std::string_view name) {
    for (std::size_t i = 0; i < kPhaseNames.size(); ++i)
        if (kPhaseNames[i] == name) return static_cast<Phase>(i);
    return std::nullopt;
}

std::string_view speaker_name(Speaker s) { return s == Speaker::Agent ? "agent" : "traveler"; }

std::optional<Speaker> parse_speaker(std::string_view name) {
    if (name == "agent") return Speaker::Agent;
    if (name == "traveler") return Speaker::Traveler;
    return std::nullopt;
}

std::string_view role_name(RoleConstraint r) {
    switch (r) {
        case RoleConstraint::Agent: return "agent";
        case RoleConstraint::Traveler: return "traveler";
        case RoleConstraint::Either: return "either";
    }
    return "";
}

ActCategory category(DialogAct act) { return info(act).category; }

std::string_view category_name(ActCategory c) {
    switch (c) {
        case ActCategory::Negotiation: return "Negotiation";
        case ActCategory::Argumentation: return "Argumentation";
        case ActCategory::General: return "General";
    }
    return "";
}

RoleConstraint speaker_role(DialogAct act) { return info(act).role; }

bool is_terminal(DialogAct act) { return act == DialogAct::AcknowledgeAcceptance; }

bool is_price_bearing(DialogAct act) {
    switch (act) {
        case DialogAct::Inform:
        case DialogAct::TellPrice:
        case DialogAct::NegotiatePriceIncrease:
        case DialogAct::NegotiatePriceDecrease:
        case DialogAct::NegotiatePriceNochange:
        case DialogAct::ConsentResponse:
        case DialogAct::Accept:
            return true;
        default:
            return false;
    }
}

bool is_x_act(DialogAct act) {
    switch (act) {
        case DialogAct::NegotiateAddX:
        case DialogAct::NegotiateRemoveX:
        case DialogAct::DisagreeX:
        case DialogAct::JustifyX:
        case DialogAct::AssuranceX:
        case DialogAct::AskClarificationX:
        case DialogAct::ProvideClarificationX:
            return true;
        default:
            return false;
    }
}

bool is_price_act(DialogAct act) {
    return act == DialogAct::NegotiatePriceIncrease || act == DialogAct::NegotiatePriceDecrease ||
           act == DialogAct::NegotiatePriceNochange;
}

std::string to_string(const DialogState& s) {
    return fmt::format("({}, {}, {})", phase_name(s.phase), act_name(s.act), speaker_name(s.speaker));
}

TransitionGraph TransitionGraph::parse(std::string_view content) {
    TransitionGraph g;
    std::istringstream in{std::string(content)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto fail = [&](const std::string& what) -> void {
            throw Error(Errc::SchemaViolation, fmt::format("transition graph line {}: {}", lineno, what));
        };
        if (tok.size() != 7 || tok[3] != "->") fail("expected 'phase act role -> act role phase'");
        const auto from_phase = parse_phase(tok[0]);
        const auto from_act = parse_act(tok[1]);
        const auto from_role = parse_speaker(tok[2]);
        const auto to_act = parse_act(tok[4]);
        const auto to_role = parse_speaker(tok[5]);
        const auto to_phase = parse_phase(tok[6]);
        if (!from_phase) fail("unknown phase '" + tok[0] + "'");
        if (!from_act) fail("unknown act '" + tok[1] + "'");
        if (!from_role) fail("unknown role '" + tok[2] + "'");
        if (!to_act) fail("unknown act '" + tok[4] + "'");
        if (!to_role) fail("unknown role '" + tok[5] + "'");
        if (!to_phase) fail("unknown phase '" + tok[6] + "'");
        if (*from_role == *to_role) fail("speakers must alternate");
        if (is_terminal(*from_act)) fail("terminal act cannot have successors");
        g.edges_[{*from_phase, *from_act, *from_role}].insert({*to_phase, *to_act, *to_role});
    }

    std::queue<DialogState> frontier;
    frontier.push(kStartState);
    g.reachable_.insert(kStartState);
    while (!frontier.empty()) {
        const auto s = frontier.front();
        frontier.pop();
        auto it = g.edges_.find(s);
        if (it == g.edges_.end()) continue;
        for (const auto& next : it->second)
            if (g.reachable_.insert(next).second) frontier.push(next);
    }
    g.validate();
    return g;
}

TransitionGraph TransitionGraph::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::MissingFile, path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void TransitionGraph::validate() const {
    auto fail = [](const std::string& what) { throw Error(Errc::SchemaViolation, "transition graph: " + what); };
    if (!edges_.contains(kStartState)) fail("no edge leaves " + to_string(kStartState));
    for (const auto& [from, tos] : edges_)
        for (const auto& to : tos)
            if (to.act == DialogAct::GreetAsk) fail("Greet-Ask must not have predecessors: " + to_string(from));

    // Totality: every reachable non-terminal state continues.
    for (const auto& s : reachable_)
        if (!is_terminal(s.act) && !edges_.contains(s)) fail("dead end at " + to_string(s));

    // Accept must stay reachable from every reachable state outside Closing.
    std::set<DialogState> reaches_accept;
    bool changed = true;
    for (const auto& s : reachable_)
        if (s.act == DialogAct::Accept) reaches_accept.insert(s);
    while (changed) {
        changed = false;
        for (const auto& s : reachable_) {
            if (reaches_accept.contains(s)) continue;
            auto it = edges_.find(s);
            if (it == edges_.end()) continue;
            for (const auto& next : it->second) {
                if (reaches_accept.contains(next)) {
                    reaches_accept.insert(s);
                    changed = true;
                    break;
                }
            }
        }
    }
    for (const auto& s : reachable_)
        if (s.phase != Phase::Closing && !reaches_accept.contains(s)) fail("Accept unreachable from " + to_string(s));
}

const std::set<DialogState>& TransitionGraph::legal_next(const DialogState& from) const {
    static const std::set<DialogState> kNone;
    if (!reachable_.contains(from)) throw Error(Errc::UnreachableState, to_string(from));
    auto it = edges_.find(from);
    return it == edges_.end() ? kNone : it->second;
}

bool TransitionGraph::is_legal(const DialogState& from, const DialogState& to) const {
    auto it = edges_.find(from);
    return it != edges_.end() && it->second.contains(to);
}

std::size_t TransitionGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& [_, tos] : edges_) n += tos.size();
    return n;
}

std::string TransitionGraph::serialize() const {
    std::string out;
    for (const auto& [from, tos] : edges_)
        for (const auto& to : tos)
            out += fmt::format("{} {} {} -> {} {} {}\n", phase_name(from.phase), act_name(from.act),
                               speaker_name(from.speaker), act_name(to.act), speaker_name(to.speaker),
                               phase_name(to.phase));
    return out;
}

}  // namespace abn
