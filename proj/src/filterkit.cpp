#include "abn/filterkit.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "abn/error.hpp"
#include "abn/text.hpp"

namespace abn {

std::string_view rule_name(RuleViolationKind k) {
    switch (k) {
        case RuleViolationKind::EmptyUtterance: return "EmptyUtterance";
        case RuleViolationKind::RepetitiveUtterance: return "RepetitiveUtterance";
        case RuleViolationKind::InsufficientRounds: return "InsufficientRounds";
        case RuleViolationKind::InsufficientActAnnotations: return "InsufficientActAnnotations";
        case RuleViolationKind::ImproperOpenClose: return "ImproperOpenClose";
    }
    return "";
}

std::string RuleViolation::to_string() const {
    return turn ? fmt::format("{}@{}", rule_name(kind), *turn) : fmt::format("{}@conversation", rule_name(kind));
}

std::vector<RuleViolation> rule_filter(const Conversation& c, int min_turns) {
    std::vector<RuleViolation> out;
    std::set<std::string> said[2];
    for (std::size_t i = 0; i < c.turns.size(); ++i) {
        const auto& t = c.turns[i];
        const int turn = static_cast<int>(i) + 1;
        if (text::is_blank(t.text)) {
            out.push_back({RuleViolationKind::EmptyUtterance, turn});
        } else if (!said[static_cast<int>(t.speaker)].insert(text::normalize_space(t.text)).second) {
            out.push_back({RuleViolationKind::RepetitiveUtterance, turn});
        }
        if (!t.act) out.push_back({RuleViolationKind::InsufficientActAnnotations, turn});
    }
    if (static_cast<int>(c.turns.size()) < min_turns) out.push_back({RuleViolationKind::InsufficientRounds, {}});

    const bool opens = !c.turns.empty() && c.turns.front().act == DialogAct::GreetAsk;
    const bool closes = !c.turns.empty() && (c.turns.back().act == DialogAct::Accept ||
                                             c.turns.back().act == DialogAct::AcknowledgeAcceptance);
    const bool expired = c.pathway.outcome == Outcome::Expired;
    if (!opens || (!closes && !expired)) out.push_back({RuleViolationKind::ImproperOpenClose, {}});
    return out;
}

namespace {

struct FacetInfo {
    Facet facet;
    std::string_view name;
    Stage stage;
    bool binary;
    std::string_view instruction;
};

// Judge instructions are kept word for word, typos included, so ratings stay
// comparable with judges prompted the same way elsewhere.
constexpr std::array<FacetInfo, 11> kFacets = {{
    {Facet::GcqeCoherence, "GCQE-Coherence", Stage::GCQE, false,
     "Is the conversation coherent, and does it maintain a smooth, consistent flow from start to finish? Please rate "
     "the coherence of the given conversation on a scale of 1 to 3, where 1 represents low coherence and 3 indicates "
     "a high level of coherence. Also, provide the rationale for your rating."},
    {Facet::GcqeConsistency, "GCQE-Consistency", Stage::GCQE, true,
     "Does the conversation maintain consistency in the information presented throughout its entirety? Please rate "
     "the consistency of the given conversation on a scale of 0 to 1, where 0 signifies inconsistency and 1 indicates "
     "strong consistency. Also, provide the rationale for your rating."},
    {Facet::GcqeDiversity, "GCQE-Diversity", Stage::GCQE, false,
     "Is there diversity in the responses throughout the conversation? Please rate the diversity of the given "
     "conversation on a scale of 1 to 3, where 1 signifies low diversity and 1 indicates strong diversity. Also, "
     "provide the rationale for your rating."},
    {Facet::GcqeTopicDepth, "GCQE-TopicDepth", Stage::GCQE, false,
     "Does the conversation delve into topics in depth? Please rate the topic depth of the given conversation on a "
     "scale of 1 to 3, where 1 indicates a superficial discussion and 3 signifies a comprehensive exploration. Also, "
     "provide the rationale for your rating."},
    {Facet::GcqeUnderstanding, "GCQE-Understanding", Stage::GCQE, false,
     "Does the conversation demonstrate an understanding of the user? Please rate the understanding of the given "
     "conversation on a scale of 1 to 3, where 1 signifies a lack of understanding and 3 indicates strong "
     "understanding. Also, please provide a rationale for your rating."},
    {Facet::GcqeFlexibility, "GCQE-Flexibility", Stage::GCQE, false,
     "Is the conversation flexible and adaptable to the user and their interests? Please rate the flexibility of the "
     "given conversation on a scale of 1 to 3, where 1 signifies low flexibility and 3 indicates high flexibility. "
     "Additionally, provide a rationale for your rating."},
    {Facet::GcqeLikeability, "GCQE-Likeability", Stage::GCQE, false,
     "Does the conversation exhibit a likable personality? Please rate the likeability of the given conversation on "
     "a scale of 1 to 3, where 1 indicates an unlikable personality and 3 signifies a highly likable personality. "
     "Also, provide the rationale for your rating."},
    {Facet::Pce, "PCE", Stage::PCE, false,
     "Imagine a travel agent with an argumentation profile as {argumentation profile of the travel agent with "
     "description} and a traveler with an argumentation profile as {argumentation profile of the traveler with "
     "description}, preference profile as {preference profile of the traveler with description}, and buying style "
     "profile as {buying style profile of the traveler with description}. Does the conversation align with the "
     "established personalities of both the traveler and the travel agent throughout? Please rate the personality "
     "consistency on a scale of 1 to 3, where 1 represents poor alignment with the personalities and 3 indicates "
     "strong consistency in personality portrayal. Also, provide the rationale for your rating."},
    {Facet::Nee, "NEE", Stage::NEE, false,
     "How effective is the negotiation between the traveler and the travel agent in creating a win-win scenario? "
     "Please rate the negotiation efficacy of the conversation on a scale of 1 to 3, where 1 indicates poor "
     "effectiveness in achieving mutual agreement and 3 signifies strong effectiveness in fostering a win-win "
     "outcome. Also, provide the rationale for your rating."},
    {Facet::Aee, "AEE", Stage::AEE, false,
     "How well do the negotiating parties manage arguments and present persuasive rationales throughout the "
     "conversation? Please evaluate the argumentation efficacy on a scale of 1 to 3, where 1 represents poor "
     "argumentation skills and 3 indicates strong ability to present convincing arguments for mutually beneficial "
     "outcomes. Also, provide the rationale for your rating."},
    {Facet::Te, "TE", Stage::TE, true,
     "Is the conversation toxic? Please rate the toxicity of the given conversation on a scale of 0 to 1, where 0 "
     "represents non-toxic and 1 indicates toxic. Also, provide the rationale for your rating."},
}};

const FacetInfo& facet_info(Facet f) { return kFacets[static_cast<std::size_t>(f)]; }

}  // namespace

std::string_view facet_name(Facet f) { return facet_info(f).name; }

std::optional<Facet> parse_facet(std::string_view s) {
    for (const auto& fi : kFacets)
        if (fi.name == s) return fi.facet;
    return std::nullopt;
}

bool is_binary(Facet f) { return facet_info(f).binary; }
int scale_max(Facet f) { return is_binary(f) ? 1 : 3; }
Stage stage_of(Facet f) { return facet_info(f).stage; }

std::string_view stage_name(Stage s) {
    switch (s) {
        case Stage::GCQE: return "GCQE";
        case Stage::PCE: return "PCE";
        case Stage::NEE: return "NEE";
        case Stage::AEE: return "AEE";
        case Stage::TE: return "TE";
    }
    return "";
}

const ExpertScore* ExpertReport::find(Facet f) const {
    for (const auto& s : scores)
        if (s.facet == f) return &s;
    return nullptr;
}

bool facet_passes(const ExpertScore& s, const RetentionPoles& poles) {
    switch (s.facet) {
        case Facet::GcqeConsistency: return s.rating == poles.consistency_pass;
        case Facet::Te: return s.rating == poles.toxicity_pass;
        default: return s.rating == 3;
    }
}

Decision decide(const ExpertReport& report, const RetentionPoles& poles) {
    Decision d;
    for (auto f : kAllFacets) {
        const auto* s = report.find(f);
        if (!s) throw Error(Errc::MissingFacet, fmt::format("{}: {}", report.id, facet_name(f)));
        if (!d.failed && !facet_passes(*s, poles)) d.failed = f;
    }
    d.retain = !d.failed;
    return d;
}

bool retain(const ExpertReport& report, const RetentionPoles& poles) { return decide(report, poles).retain; }

std::vector<SurvivalRow> survival_table(const std::vector<ExpertReport>& reports, const RetentionPoles& poles) {
    std::vector<SurvivalRow> rows;
    for (auto stage : kStages) rows.push_back({stage, 0, 0.0});
    for (const auto& r : reports) {
        for (std::size_t i = 0; i < kStages.size(); ++i) {
            bool ok = true;
            for (auto f : kAllFacets) {
                if (stage_of(f) != kStages[i]) continue;
                const auto* s = r.find(f);
                if (!s) throw Error(Errc::MissingFacet, fmt::format("{}: {}", r.id, facet_name(f)));
                ok = ok && facet_passes(*s, poles);
            }
            if (!ok) break;
            ++rows[i].survivors;
        }
    }
    const double total = static_cast<double>(reports.size());
    for (auto& row : rows) row.percent = reports.empty() ? 100.0 : 100.0 * row.survivors / total;
    return rows;
}

std::string transcript(const Conversation& c) {
    std::string out;
    for (const auto& t : c.turns) {
        out += t.speaker == Speaker::Agent ? "Travel Agent: " : "Traveler: ";
        out += t.text;
        out += '\n';
    }
    return out;
}

namespace {

std::string profile_phrase(std::string_view name, std::string_view desc) { return fmt::format("{} ({})", name, desc); }

}  // namespace

JudgePrompt build_expert_prompt(Facet facet, const Conversation& c) {
    std::string instruction(facet_info(facet).instruction);
    if (facet == Facet::Pce) {
        const auto& sc = c.pathway.scenario;
        instruction = text::replace_all(std::move(instruction),
                                        "{argumentation profile of the travel agent with description}",
                                        profile_phrase(display_name(sc.agent.arg), description(sc.agent.arg)));
        instruction = text::replace_all(std::move(instruction),
                                        "{argumentation profile of the traveler with description}",
                                        profile_phrase(display_name(sc.traveler.arg), description(sc.traveler.arg)));
        instruction = text::replace_all(std::move(instruction), "{preference profile of the traveler with description}",
                                        profile_phrase(display_name(sc.traveler.pref), description(sc.traveler.pref)));
        instruction = text::replace_all(std::move(instruction),
                                        "{buying style profile of the traveler with description}",
                                        profile_phrase(display_name(sc.traveler.buy), description(sc.traveler.buy)));
    }
    return {std::move(instruction), transcript(c)};
}

ExpertScore HttpJudge::rate(Facet facet, const JudgePrompt& prompt) {
    const auto reply = post_json(endpoint_, {{"instruction", prompt.instruction}, {"conversation", prompt.conversation}});
    if (!reply.is_object() || !reply.contains("rating") || !reply["rating"].is_number_integer())
        throw Error(Errc::EndpointUnreachable, endpoint_.url + " reply lacks an integer \"rating\"");
    return {facet, reply["rating"].get<int>(), reply.value("rationale", std::string())};
}

ExpertReport judge_conversation(const Conversation& c, Judge& judge) {
    ExpertReport r;
    r.id = c.id;
    for (auto f : kAllFacets) r.scores.push_back(judge.rate(f, build_expert_prompt(f, c)));
    return r;
}

nlohmann::json report_to_json(const ExpertReport& r) {
    nlohmann::json scores = nlohmann::json::object();
    for (const auto& s : r.scores) scores[std::string(facet_name(s.facet))] = {{"rating", s.rating}, {"rationale", s.rationale}};
    return {{"id", r.id}, {"scores", scores}};
}

ExpertReport report_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("scores") ||
        !j["scores"].is_object())
        throw Error(Errc::MalformedRecord, "report needs string \"id\" and object \"scores\"");
    ExpertReport r;
    r.id = j["id"].get<std::string>();
    for (const auto& [name, node] : j["scores"].items()) {
        const auto facet = parse_facet(name);
        if (!facet) throw Error(Errc::MalformedRecord, fmt::format("{}: unknown facet {}", r.id, name));
        if (!node.is_object() || !node.contains("rating") || !node["rating"].is_number_integer())
            throw Error(Errc::MalformedRecord, fmt::format("{}: {} needs an integer rating", r.id, name));
        const int rating = node["rating"].get<int>();
        const int lo = is_binary(*facet) ? 0 : 1;
        if (rating < lo || rating > scale_max(*facet))
            throw Error(Errc::MalformedRecord, fmt::format("{}: {} rating {} off scale", r.id, name, rating));
        r.scores.push_back({*facet, rating, node.value("rationale", std::string())});
    }
    return r;
}

std::map<std::string, ExpertReport> load_reports(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::MissingFile, path.string());
    std::map<std::string, ExpertReport> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::is_blank(line)) continue;
        try {
            auto r = report_from_json(nlohmann::json::parse(line));
            auto id = r.id;
            if (!out.emplace(id, std::move(r)).second)
                throw Error(Errc::DuplicateId, fmt::format("{} line {}: report {}", path.string(), lineno, id));
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::MalformedRecord, fmt::format("{} line {}: {}", path.string(), lineno, e.what()));
        } catch (const Error& e) {
            if (e.code() == Errc::DuplicateId) throw;
            throw Error(e.code(), fmt::format("{} line {}: {}", path.string(), lineno, e.detail()));
        }
    }
    return out;
}

}  // namespace abn
