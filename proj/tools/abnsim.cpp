#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "abn/error.hpp"
#include "abn/metrics.hpp"
#include "abn/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::optional<abn::PipelineConfig> config_or_report(const std::string& path) {
    try {
        return path.empty() ? abn::PipelineConfig::defaults() : abn::load_config(path);
    } catch (const abn::Error& e) {
        fmt::print(stderr, "abnsim: {}\n", e.what());
        return std::nullopt;
    }
}

int report(const abn::PipelineResult& r, const fs::path& out) {
    if (r.exit_code == abn::kExitConfig || r.exit_code == abn::kExitViolations) {
        fmt::print(stderr, "abnsim: {}\n", r.message);
        return r.exit_code;
    }
    fmt::print("{} records: {} retained, {} rejected -> {}\n", r.generated, r.retained, r.rejected, out.string());
    if (!r.complete) fmt::print(stderr, "abnsim: incomplete run: {}\n", r.message);
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic travel-negotiation dialogue generator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> count;
    std::optional<int> workers;
    std::string mode;
    bool verbatim = false;
    std::string input;

    auto* gen = app.add_subcommand("generate", "Generate, filter and write a corpus with reports");
    gen->add_option("--config", config_path, "JSON config file");
    gen->add_option("--seed", seed, "Master seed");
    gen->add_option("--count", count, "Number of conversations")->check(CLI::PositiveNumber);
    gen->add_option("--mode", mode, "Realization mode")->check(CLI::IsMember({"template", "external"}));
    gen->add_flag("--verbatim-concession", verbatim, "Use the literal traveler recursion");
    gen->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    gen->add_option("--out", out_dir, "Output directory");

    auto* filt = app.add_subcommand("filter", "Re-run rule and judge filters over a corpus");
    filt->add_option("input", input, "Corpus JSONL")->required();
    filt->add_option("--config", config_path, "JSON config file");
    filt->add_option("--out", out_dir, "Output directory");

    std::string stats_out;
    auto* stats = app.add_subcommand("stats", "Print corpus statistics, diversity and act distribution");
    stats->add_option("input", input, "Corpus JSONL")->required();
    stats->add_option("--out", stats_out, "Also write JSON reports to this directory");

    auto* val = app.add_subcommand("validate", "Replay pathway and rule checks over a corpus");
    val->add_option("input", input, "Corpus JSONL")->required();
    val->add_option("--config", config_path, "JSON config file (graph, catalog, min_turns)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : abn::kExitConfig;
    }

    auto config = config_or_report(config_path);
    if (!config) return abn::kExitConfig;

    try {
        if (*gen) {
            if (seed) config->seed = *seed;
            if (count) config->count = *count;
            if (workers) config->workers = *workers;
            if (!mode.empty()) config->mode = *abn::parse_mode(mode);
            if (verbatim) config->encoder.concession.variant = abn::TravelerVariant::Verbatim;
            return report(abn::run_pipeline(*config, out_dir), out_dir);
        }
        if (*filt) return report(abn::filter_corpus(*config, input, out_dir), out_dir);
        if (*stats) {
            std::vector<abn::Conversation> corpus;
            for (auto& line : abn::read_corpus(input)) {
                if (!line.record) {
                    fmt::print(stderr, "abnsim: {}:{}: MalformedRecord: {}\n", input, line.line, line.error);
                    return abn::kExitViolations;
                }
                corpus.push_back(std::move(line.record->conversation));
            }
            const auto r = abn::corpus_reports(corpus);
            fmt::print("corpus\n{}\ndiversity\n{}\nacts\n{}", r.stats_text, r.diversity_text, r.acts_text);
            if (!stats_out.empty()) {
                fs::create_directories(stats_out);
                nlohmann::ordered_json j;
                j["stats"] = r.stats;
                j["diversity"] = r.diversity;
                j["acts"] = r.acts;
                std::ofstream(fs::path(stats_out) / "stats.json") << j.dump(2) << '\n';
            }
            return abn::kExitOk;
        }
        if (*val) {
            abn::TransitionGraph graph;
            abn::Catalog catalog;
            try {
                graph = abn::TransitionGraph::load(config->graph);
                catalog = abn::load_catalog(config->catalog);
            } catch (const abn::Error& e) {
                fmt::print(stderr, "abnsim: {}\n", e.what());
                return abn::kExitConfig;
            }
            const auto v = abn::validate_corpus(input, graph, &catalog, config->filter.min_turns);
            for (const auto& f : v.findings) fmt::print("{}\n", f.to_string());
            fmt::print("{} records, {} findings\n", v.records, v.findings.size());
            return v.clean() ? abn::kExitOk : abn::kExitViolations;
        }
    } catch (const abn::Error& e) {
        fmt::print(stderr, "abnsim: {}\n", e.what());
        return e.code() == abn::Errc::MissingFile ? abn::kExitConfig : abn::kExitViolations;
    }
    return abn::kExitOk;
}
