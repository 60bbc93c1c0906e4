#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abn/corpus.hpp"
#include "abn/filterkit.hpp"
#include "abn/pathway.hpp"

namespace abn {

enum class JudgeMode { None, Reports, Endpoint };

std::string_view judge_mode_name(JudgeMode m);
std::optional<JudgeMode> parse_judge_mode(std::string_view s);

struct FilterSettings {
    int min_turns = kDefaultMinTurns;
    JudgeMode judge = JudgeMode::None;
    std::filesystem::path reports;  // JSONL expert reports, JudgeMode::Reports
    Endpoint judge_endpoint;        // JudgeMode::Endpoint
    bool verbatim_poles = false;

    RetentionPoles poles() const { return verbatim_poles ? RetentionPoles::verbatim() : RetentionPoles{}; }
};

struct PipelineConfig {
    std::filesystem::path catalog;
    std::filesystem::path personas;
    std::filesystem::path graph;
    std::uint64_t seed = 7;
    int count = 100;
    int workers = 1;
    RealizeMode mode = RealizeMode::Template;
    Endpoint endpoint;
    double top_p = 0.95;
    double temperature = 1.0;
    EncoderOptions encoder;
    PhiDistribution phi;
    FilterSettings filter;

    // Bundled data files, everything else at its default.
    static PipelineConfig defaults();

    // Throws Error{ConfigError}.
    void check() const;
};

// JSON config; relative paths resolve against the file's directory. Keys
// not listed in the README are rejected. Throws Error{ConfigError}.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEndpoint = 3;

struct PipelineResult {
    int exit_code = kExitOk;
    bool complete = true;
    int generated = 0;
    int retained = 0;
    int rejected = 0;
    std::string message;
};

// Conversation ids are "conv-NNNNN" by scenario index.
std::string conversation_id(std::size_t index);

// Builds conversation `index` exactly as run_pipeline would.
Conversation generate_conversation(const PipelineConfig& config, const Catalog& catalog, const PersonaTable& personas,
                                   const TransitionGraph& graph, std::size_t index, TextGenerator* generator = nullptr);

// generate -> rule filter -> judge -> write. Output files in `out_dir`:
// retained.jsonl, rejected.jsonl, stats/diversity/acts/survival as .json and
// .txt, and manifest.json. Config problems return kExitConfig before anything
// is written; endpoint failures flush the finished prefix and return
// kExitEndpoint with an incomplete manifest.
PipelineResult run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir);

// Re-filters an existing corpus with the config's filter settings.
PipelineResult filter_corpus(const PipelineConfig& config, const std::filesystem::path& input,
                             const std::filesystem::path& out_dir);

struct CorpusReports {
    nlohmann::ordered_json stats;
    nlohmann::ordered_json diversity;
    nlohmann::ordered_json acts;
    std::string stats_text;
    std::string diversity_text;
    std::string acts_text;
};

// Stats, diversity and act distribution of a set of conversations. Sections
// that cannot be computed (empty corpus, too few documents) come out null.
CorpusReports corpus_reports(const std::vector<Conversation>& corpus);

struct CorpusFinding {
    int line = 0;
    std::string id;
    std::string kind;  // ViolationKind / RuleViolationKind name, or "MalformedRecord"
    int turn = 0;
    std::string detail;

    std::string to_string() const;
};

struct CorpusValidation {
    int records = 0;
    std::vector<CorpusFinding> findings;

    bool clean() const { return findings.empty(); }
};

// Replays the pathway validator and the rule filter on every record.
// Throws Error{MissingFile}.
CorpusValidation validate_corpus(const std::filesystem::path& path, const TransitionGraph& graph,
                                 const Catalog* catalog = nullptr, int min_turns = kDefaultMinTurns);

}  // namespace abn
