#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abn/http.hpp"
#include "abn/realize.hpp"

namespace abn {

enum class RuleViolationKind {
    EmptyUtterance,
    RepetitiveUtterance,
    InsufficientRounds,
    InsufficientActAnnotations,
    ImproperOpenClose,
};

std::string_view rule_name(RuleViolationKind k);

struct RuleViolation {
    RuleViolationKind kind;
    std::optional<int> turn;  // 1-based; empty means the whole conversation

    std::string to_string() const;
    bool operator==(const RuleViolation&) const = default;
};

inline constexpr int kDefaultMinTurns = 8;

std::vector<RuleViolation> rule_filter(const Conversation& c, int min_turns = kDefaultMinTurns);

enum class Facet {
    GcqeCoherence,
    GcqeConsistency,
    GcqeDiversity,
    GcqeTopicDepth,
    GcqeUnderstanding,
    GcqeFlexibility,
    GcqeLikeability,
    Pce,
    Nee,
    Aee,
    Te,
};

inline constexpr std::array<Facet, 11> kAllFacets = {
    Facet::GcqeCoherence,     Facet::GcqeConsistency, Facet::GcqeDiversity, Facet::GcqeTopicDepth,
    Facet::GcqeUnderstanding, Facet::GcqeFlexibility, Facet::GcqeLikeability, Facet::Pce,
    Facet::Nee,               Facet::Aee,             Facet::Te};

std::string_view facet_name(Facet f);  // "GCQE-Coherence", ..., "TE"
std::optional<Facet> parse_facet(std::string_view s);
bool is_binary(Facet f);  // Consistency and TE rate on {0,1}
int scale_max(Facet f);

enum class Stage { GCQE, PCE, NEE, AEE, TE };
inline constexpr std::array<Stage, 5> kStages = {Stage::GCQE, Stage::PCE, Stage::NEE, Stage::AEE, Stage::TE};
std::string_view stage_name(Stage s);
Stage stage_of(Facet f);

struct ExpertScore {
    Facet facet;
    int rating = 0;
    std::string rationale;
};

struct ExpertReport {
    std::string id;
    std::vector<ExpertScore> scores;

    const ExpertScore* find(Facet f) const;
};

// Which rating counts as a pass on the two binary facets.
struct RetentionPoles {
    int consistency_pass = 1;
    int toxicity_pass = 0;

    // Both binary facets pass on 1.
    static RetentionPoles verbatim() { return {1, 1}; }
};

bool facet_passes(const ExpertScore& s, const RetentionPoles& poles = {});

struct Decision {
    bool retain = false;
    std::optional<Facet> failed;  // first failing facet in kAllFacets order
};

// Throws Error{MissingFacet}.
Decision decide(const ExpertReport& report, const RetentionPoles& poles = {});
bool retain(const ExpertReport& report, const RetentionPoles& poles = {});

struct SurvivalRow {
    Stage stage;
    int survivors = 0;
    double percent = 0.0;
};

// Survivors after each stage in GCQE -> PCE -> NEE -> AEE -> TE order.
std::vector<SurvivalRow> survival_table(const std::vector<ExpertReport>& reports, const RetentionPoles& poles = {});

// "Travel Agent: ...\nTraveler: ..." with one line per turn.
std::string transcript(const Conversation& c);

struct JudgePrompt {
    std::string instruction;
    std::string conversation;
};

JudgePrompt build_expert_prompt(Facet facet, const Conversation& c);

class Judge {
public:
    virtual ~Judge() = default;
    virtual ExpertScore rate(Facet facet, const JudgePrompt& prompt) = 0;
};

// POST {"instruction","conversation"} -> {"rating","rationale"}.
class HttpJudge : public Judge {
public:
    explicit HttpJudge(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}
    ExpertScore rate(Facet facet, const JudgePrompt& prompt) override;

private:
    Endpoint endpoint_;
};

ExpertReport judge_conversation(const Conversation& c, Judge& judge);

// Report files: one {"id", "scores": {facet: {"rating", "rationale"}}} per line.
nlohmann::json report_to_json(const ExpertReport& r);
ExpertReport report_from_json(const nlohmann::json& j);
std::map<std::string, ExpertReport> load_reports(const std::filesystem::path& path);

}  // namespace abn
