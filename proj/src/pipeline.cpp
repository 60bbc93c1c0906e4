#include "abn/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "abn/error.hpp"
#include "abn/metrics.hpp"
#include "abn/rng.hpp"

namespace abn {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kConversationStream = 0xc0;

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ConfigError, what); }

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) config_error(where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            config_error(fmt::format("unknown key \"{}\" in {}", k, where));
    }
}

double get_num(const json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_number()) config_error(fmt::format("{}.{} must be a number", where, key));
    return v.get<double>();
}

long long get_int(const json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) config_error(fmt::format("{}.{} must be an integer", where, key));
    return v.get<long long>();
}

std::string get_str(const json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_string()) config_error(fmt::format("{}.{} must be a string", where, key));
    return v.get<std::string>();
}

bool get_bool(const json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_boolean()) config_error(fmt::format("{}.{} must be true or false", where, key));
    return v.get<bool>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

void read_endpoint(const json& j, const std::string& where, Endpoint& e) {
    check_keys(j, where, {"url", "timeout_ms", "retries", "api_key_env"});
    if (j.contains("url")) e.url = get_str(j, "url", where);
    if (j.contains("timeout_ms")) e.timeout_ms = static_cast<int>(get_int(j, "timeout_ms", where));
    if (j.contains("retries")) e.retries = static_cast<int>(get_int(j, "retries", where));
    if (j.contains("api_key_env")) e.api_key_env = get_str(j, "api_key_env", where);
}

void check_endpoint(const Endpoint& e, const std::string& where) {
    if (e.url.empty()) config_error(where + ".url is required");
    if (e.url.rfind("http://", 0) != 0 && e.url.rfind("https://", 0) != 0)
        config_error(where + ".url must start with http:// or https://");
    if (e.timeout_ms <= 0) config_error(where + ".timeout_ms must be positive");
    if (e.retries < 0) config_error(where + ".retries must be >= 0");
}

void check_filter(const FilterSettings& f) {
    if (f.min_turns < 1) config_error("filter.min_turns must be >= 1");
    if (f.judge == JudgeMode::Reports && !fs::is_regular_file(f.reports))
        config_error("filter.reports not found: " + f.reports.string());
    if (f.judge == JudgeMode::Endpoint) check_endpoint(f.judge_endpoint, "filter.endpoint");
}

struct Assets {
    Catalog catalog;
    PersonaTable personas;
    TransitionGraph graph;
};

Assets load_assets(const PipelineConfig& c) {
    try {
        return {load_catalog(c.catalog), PersonaTable::load(c.personas), TransitionGraph::load(c.graph)};
    } catch (const Error& e) {
        config_error(e.what());
    }
}

std::map<std::string, ExpertReport> load_judge_reports(const FilterSettings& f) {
    if (f.judge != JudgeMode::Reports) return {};
    try {
        return load_reports(f.reports);
    } catch (const Error& e) {
        config_error(e.what());
    }
}

struct PoolFailure {
    std::size_t index = 0;
    std::exception_ptr error;
};

// Indices are claimed in increasing order, so when the first failure is at
// index k every index below k has finished.
std::optional<PoolFailure> parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::optional<PoolFailure> failure;
    auto run = [&] {
        while (!stop.load()) {
            const auto i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure || i < failure->index) failure = PoolFailure{i, std::current_exception()};
                stop = true;
            }
        }
    };
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
    if (threads <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    return failure;
}

// Rethrows unless the failure is an endpoint outage, which ends the run early.
std::string endpoint_failure(const PoolFailure& f) {
    try {
        std::rethrow_exception(f.error);
    } catch (const Error& e) {
        if (e.code() != Errc::EndpointUnreachable) throw;
        return e.what();
    }
}

struct Judged {
    FilterStatus status;
    std::optional<ExpertReport> report;
};

Judged filter_one(const Conversation& c, const FilterSettings& f, const std::map<std::string, ExpertReport>& reports,
                  Judge* judge) {
    Judged out;
    for (const auto& v : rule_filter(c, f.min_turns)) out.status.reasons.push_back(v.to_string());
    if (!out.status.reasons.empty()) return out;
    if (f.judge == JudgeMode::None) {
        out.status.retained = true;
        return out;
    }
    if (f.judge == JudgeMode::Reports) {
        const auto it = reports.find(c.id);
        if (it == reports.end()) {
            out.status.reasons.push_back("judge:no-report");
            return out;
        }
        out.report = it->second;
    } else {
        out.report = judge_conversation(c, *judge);
        out.report->id = c.id;
    }
    out.status.report = out.report->id;
    try {
        const auto d = decide(*out.report, f.poles());
        out.status.retained = d.retain;
        if (d.failed) out.status.reasons.push_back("judge:" + std::string(facet_name(*d.failed)));
    } catch (const Error& e) {
        if (e.code() != Errc::MissingFacet) throw;
        out.status.reasons.push_back("judge:incomplete-report");
    }
    return out;
}

std::string survival_text(int generated, int passed, const std::vector<SurvivalRow>* rows, int judged) {
    std::string out = fmt::format("{:<12} {:>9} {:>8}\n", "stage", "survivors", "percent");
    out += fmt::format("{:<12} {:>9} {:>8}\n", "generated", generated, "");
    out += fmt::format("{:<12} {:>9} {:>8.2f}\n", "rules", passed,
                       generated > 0 ? 100.0 * passed / generated : 0.0);
    if (rows) {
        out += fmt::format("{:<12} {:>9} {:>8.2f}\n", "judged", judged, 100.0);
        for (const auto& r : *rows)
            out += fmt::format("{:<12} {:>9} {:>8.2f}\n", stage_name(r.stage), r.survivors, r.percent);
    }
    return out;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::MissingFile, "cannot write " + path.string());
    out << content;
}

void write_json(const fs::path& path, const ojson& j) { write_text(path, j.dump(2) + "\n"); }

ojson pair_json(const ojson& generated, const ojson& retained) {
    ojson j;
    j["generated"] = generated;
    j["retained"] = retained;
    return j;
}

struct RunContext {
    std::string command;
    ojson manifest;  // command-specific fields, written first
};

PipelineResult filter_and_write(const FilterSettings& f, const std::map<std::string, ExpertReport>& reports,
                                std::vector<Conversation> convs, std::string error, const fs::path& out_dir,
                                RunContext ctx, int workers) {
    std::unique_ptr<HttpJudge> judge;
    if (f.judge == JudgeMode::Endpoint) judge = std::make_unique<HttpJudge>(f.judge_endpoint);

    std::vector<Judged> judged(convs.size());
    if (const auto fail = parallel_for(convs.size(), workers, [&](std::size_t i) {
            judged[i] = filter_one(convs[i], f, reports, judge.get());
        })) {
        if (error.empty()) error = endpoint_failure(*fail);
        convs.resize(fail->index);
        judged.resize(fail->index);
    }

    std::vector<CorpusRecord> retained, rejected;
    std::vector<Conversation> kept;
    std::vector<ExpertReport> judged_reports;
    int passed_rules = 0;
    for (std::size_t i = 0; i < convs.size(); ++i) {
        if (judged[i].report) judged_reports.push_back(*judged[i].report);
        const bool rules_ok = std::none_of(judged[i].status.reasons.begin(), judged[i].status.reasons.end(),
                                           [](const std::string& r) { return r.rfind("judge:", 0) != 0; });
        if (rules_ok) ++passed_rules;
        if (judged[i].status.retained) kept.push_back(convs[i]);
        (judged[i].status.retained ? retained : rejected).push_back({convs[i], judged[i].status});
    }

    fs::create_directories(out_dir);
    write_corpus(out_dir / "retained.jsonl", retained);
    write_corpus(out_dir / "rejected.jsonl", rejected);

    const auto all_r = corpus_reports(convs);
    const auto kept_r = corpus_reports(kept);
    write_json(out_dir / "stats.json", pair_json(all_r.stats, kept_r.stats));
    write_json(out_dir / "diversity.json", pair_json(all_r.diversity, kept_r.diversity));
    write_json(out_dir / "acts.json", pair_json(all_r.acts, kept_r.acts));
    write_text(out_dir / "stats.txt", "generated\n" + all_r.stats_text + "\nretained\n" + kept_r.stats_text);
    write_text(out_dir / "diversity.txt",
               "generated\n" + all_r.diversity_text + "\nretained\n" + kept_r.diversity_text);
    write_text(out_dir / "acts.txt", "generated\n" + all_r.acts_text + "\nretained\n" + kept_r.acts_text);

    ojson survival;
    survival["generated"] = convs.size();
    survival["passed_rules"] = passed_rules;
    std::vector<SurvivalRow> rows;
    if (f.judge != JudgeMode::None) {
        rows = survival_table(judged_reports, f.poles());
        ojson stages = ojson::array();
        for (const auto& r : rows)
            stages.push_back({{"stage", stage_name(r.stage)}, {"survivors", r.survivors}, {"percent", r.percent}});
        survival["judge"] = {{"mode", judge_mode_name(f.judge)},
                             {"judged", judged_reports.size()},
                             {"stages", stages}};
    } else {
        survival["judge"] = nullptr;
    }
    write_json(out_dir / "survival.json", survival);
    write_text(out_dir / "survival.txt",
               survival_text(static_cast<int>(convs.size()), passed_rules,
                             f.judge != JudgeMode::None ? &rows : nullptr, static_cast<int>(judged_reports.size())));

    std::vector<std::string> files = {"acts.json",      "acts.txt",      "diversity.json", "diversity.txt",
                                      "rejected.jsonl", "retained.jsonl", "stats.json",     "stats.txt",
                                      "survival.json",  "survival.txt"};
    if (f.judge == JudgeMode::Endpoint) {
        std::string lines;
        for (const auto& r : judged_reports) lines += report_to_json(r).dump() + "\n";
        write_text(out_dir / "judge_reports.jsonl", lines);
        files.push_back("judge_reports.jsonl");
        std::sort(files.begin(), files.end());
    }

    PipelineResult result;
    result.complete = error.empty();
    result.exit_code = result.complete ? kExitOk : kExitEndpoint;
    result.message = error;
    result.generated = static_cast<int>(convs.size());
    result.retained = static_cast<int>(retained.size());
    result.rejected = static_cast<int>(rejected.size());

    ojson manifest;
    manifest["command"] = ctx.command;
    manifest["complete"] = result.complete;
    manifest["error"] = result.complete ? ojson(nullptr) : ojson(error);
    for (const auto& [k, v] : ctx.manifest.items()) manifest[k] = v;
    manifest["judge"] = judge_mode_name(f.judge);
    manifest["records"] = {{"total", result.generated}, {"retained", result.retained}, {"rejected", result.rejected}};
    manifest["files"] = files;
    write_json(out_dir / "manifest.json", manifest);
    return result;
}

}  // namespace

std::string_view judge_mode_name(JudgeMode m) {
    switch (m) {
        case JudgeMode::None: return "none";
        case JudgeMode::Reports: return "reports";
        case JudgeMode::Endpoint: return "endpoint";
    }
    return "none";
}

std::optional<JudgeMode> parse_judge_mode(std::string_view s) {
    for (auto m : {JudgeMode::None, JudgeMode::Reports, JudgeMode::Endpoint})
        if (judge_mode_name(m) == s) return m;
    return std::nullopt;
}

PipelineConfig PipelineConfig::defaults() {
    PipelineConfig c;
    const fs::path data(ABN_DATA_DIR);
    c.catalog = data / "catalog.json";
    c.personas = data / "personas.json";
    c.graph = data / "transitions.txt";
    c.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return c;
}

void PipelineConfig::check() const {
    for (const auto& [name, p] : {std::pair{"catalog", &catalog}, {"personas", &personas}, {"graph", &graph}}) {
        if (!fs::is_regular_file(*p)) config_error(fmt::format("{} not found: {}", name, p->string()));
    }
    if (count < 1) config_error("count must be >= 1");
    if (workers < 1) config_error("workers must be >= 1");
    if (mode == RealizeMode::External) check_endpoint(endpoint, "endpoint");
    if (!(top_p > 0.0 && top_p <= 1.0)) config_error("endpoint.top_p must be in (0, 1]");
    if (!(temperature >= 0.0)) config_error("endpoint.temperature must be >= 0");
    const auto& k = encoder.concession;
    for (double c : k.budget_c)
        if (!(c > 0.0)) config_error("concession c values must be positive");
    if (!(k.traveler_c_ratio > 0.0 && k.traveler_c_ratio < 1.0))
        config_error("concession.traveler_c_ratio must be in (0, 1)");
    if (!(k.agent_min_ratio > 0.0 && k.agent_min_ratio <= 1.0))
        config_error("concession.agent_min_ratio must be in (0, 1]");
    if (!(phi.lo > 0.0 && phi.lo <= phi.hi && phi.hi < 1.0 && phi.stddev >= 0.0))
        config_error("concession.phi needs 0 < min <= max < 1 and stddev >= 0");
    if (encoder.min_turns < 8 || encoder.max_turns < encoder.min_turns)
        config_error("turns needs 8 <= min <= max");
    check_filter(filter);
}

PipelineConfig parse_config(const json& j, const fs::path& base_dir) {
    auto c = PipelineConfig::defaults();
    check_keys(j, "config",
               {"catalog", "personas", "graph", "seed", "count", "workers", "mode", "endpoint", "concession", "turns",
                "filter"});
    if (j.contains("catalog")) c.catalog = resolve(base_dir, get_str(j, "catalog", "config"));
    if (j.contains("personas")) c.personas = resolve(base_dir, get_str(j, "personas", "config"));
    if (j.contains("graph")) c.graph = resolve(base_dir, get_str(j, "graph", "config"));
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0)
            config_error("config.seed must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("count")) c.count = static_cast<int>(get_int(j, "count", "config"));
    if (j.contains("workers")) c.workers = static_cast<int>(get_int(j, "workers", "config"));
    if (j.contains("mode")) {
        const auto m = parse_mode(get_str(j, "mode", "config"));
        if (!m) config_error("config.mode must be template or external");
        c.mode = *m;
    }
    if (j.contains("endpoint")) {
        const auto& e = j["endpoint"];
        check_keys(e, "endpoint", {"url", "timeout_ms", "retries", "api_key_env", "top_p", "temperature"});
        json base = e;
        base.erase("top_p");
        base.erase("temperature");
        read_endpoint(base, "endpoint", c.endpoint);
        if (e.contains("top_p")) c.top_p = get_num(e, "top_p", "endpoint");
        if (e.contains("temperature")) c.temperature = get_num(e, "temperature", "endpoint");
    }
    if (j.contains("concession")) {
        const auto& k = j["concession"];
        const std::string w = "concession";
        check_keys(k, w, {"c_low", "c_moderate", "c_high", "traveler_c_ratio", "agent_min_ratio", "phi", "variant",
                          "verbatim"});
        auto& s = c.encoder.concession;
        if (k.contains("c_low")) s.budget_c[0] = get_num(k, "c_low", w);
        if (k.contains("c_moderate")) s.budget_c[1] = get_num(k, "c_moderate", w);
        if (k.contains("c_high")) s.budget_c[2] = get_num(k, "c_high", w);
        if (k.contains("traveler_c_ratio")) s.traveler_c_ratio = get_num(k, "traveler_c_ratio", w);
        if (k.contains("agent_min_ratio")) s.agent_min_ratio = get_num(k, "agent_min_ratio", w);
        if (k.contains("variant")) {
            const auto v = parse_variant(get_str(k, "variant", w));
            if (!v) config_error("concession.variant must be mirrored, own-anchored or verbatim");
            s.variant = *v;
        }
        if (k.contains("verbatim") && get_bool(k, "verbatim", w)) s.variant = TravelerVariant::Verbatim;
        if (k.contains("phi")) {
            const auto& p = k["phi"];
            check_keys(p, "concession.phi", {"mean", "stddev", "min", "max"});
            if (p.contains("mean")) c.phi.mean = get_num(p, "mean", "concession.phi");
            if (p.contains("stddev")) c.phi.stddev = get_num(p, "stddev", "concession.phi");
            if (p.contains("min")) c.phi.lo = get_num(p, "min", "concession.phi");
            if (p.contains("max")) c.phi.hi = get_num(p, "max", "concession.phi");
        }
    }
    if (j.contains("turns")) {
        const auto& t = j["turns"];
        check_keys(t, "turns", {"min", "max"});
        if (t.contains("min")) c.encoder.min_turns = static_cast<int>(get_int(t, "min", "turns"));
        if (t.contains("max")) c.encoder.max_turns = static_cast<int>(get_int(t, "max", "turns"));
    }
    if (j.contains("filter")) {
        const auto& f = j["filter"];
        check_keys(f, "filter", {"min_turns", "judge", "reports", "endpoint", "verbatim_poles"});
        if (f.contains("min_turns")) c.filter.min_turns = static_cast<int>(get_int(f, "min_turns", "filter"));
        if (f.contains("judge")) {
            const auto m = parse_judge_mode(get_str(f, "judge", "filter"));
            if (!m) config_error("filter.judge must be none, reports or endpoint");
            c.filter.judge = *m;
        }
        if (f.contains("reports")) c.filter.reports = resolve(base_dir, get_str(f, "reports", "filter"));
        if (f.contains("endpoint")) read_endpoint(f["endpoint"], "filter.endpoint", c.filter.judge_endpoint);
        if (f.contains("verbatim_poles")) c.filter.verbatim_poles = get_bool(f, "verbatim_poles", "filter");
    }
    return c;
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) config_error("config not found: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        config_error(fmt::format("{}: {}", path.string(), e.what()));
    }
    return parse_config(j, path.parent_path());
}

std::string conversation_id(std::size_t index) { return fmt::format("conv-{:05d}", index); }

Conversation generate_conversation(const PipelineConfig& config, const Catalog& catalog, const PersonaTable& personas,
                                   const TransitionGraph& graph, std::size_t index, TextGenerator* generator) {
    const auto seed = derive_seed(config.seed, kConversationStream, index);
    ScenarioOptions so;
    so.phi = config.phi;
    const auto scenario = sample_scenario(catalog, seed, personas, so);
    const auto* package = catalog.find(scenario.package);
    if (!package) throw Error(Errc::InvalidArgument, "scenario names unknown package " + scenario.package);
    const auto params = behavior_params(scenario.traveler, scenario.agent, personas);
    const auto pathway = encode_pathway(scenario, *package, graph, params, config.encoder);
    auto c = realize_conversation(pathway, *package, config.mode, seed, generator);
    c.id = conversation_id(index);
    return c;
}

PipelineResult run_pipeline(const PipelineConfig& config, const fs::path& out_dir) {
    Assets assets;
    std::map<std::string, ExpertReport> reports;
    try {
        config.check();
        assets = load_assets(config);
        reports = load_judge_reports(config.filter);
    } catch (const Error& e) {
        PipelineResult r;
        r.exit_code = kExitConfig;
        r.complete = false;
        r.message = e.what();
        return r;
    }

    std::unique_ptr<HttpGenerator> generator;
    if (config.mode == RealizeMode::External)
        generator = std::make_unique<HttpGenerator>(config.endpoint, config.top_p, config.temperature);

    const auto n = static_cast<std::size_t>(config.count);
    std::vector<std::optional<Conversation>> slots(n);
    std::string error;
    std::size_t done = n;
    if (const auto fail = parallel_for(n, config.workers, [&](std::size_t i) {
            slots[i] = generate_conversation(config, assets.catalog, assets.personas, assets.graph, i,
                                             generator.get());
        })) {
        error = endpoint_failure(*fail);
        done = fail->index;
    }
    std::vector<Conversation> convs;
    convs.reserve(done);
    for (std::size_t i = 0; i < done; ++i) convs.push_back(std::move(*slots[i]));

    RunContext ctx;
    ctx.command = "generate";
    ctx.manifest["seed"] = config.seed;
    ctx.manifest["count"] = config.count;
    ctx.manifest["mode"] = mode_name(config.mode);
    ctx.manifest["variant"] = variant_name(config.encoder.concession.variant);
    return filter_and_write(config.filter, reports, std::move(convs), error, out_dir, ctx, config.workers);
}

PipelineResult filter_corpus(const PipelineConfig& config, const fs::path& input, const fs::path& out_dir) {
    PipelineResult bad;
    bad.complete = false;
    std::map<std::string, ExpertReport> reports;
    try {
        check_filter(config.filter);
        reports = load_judge_reports(config.filter);
    } catch (const Error& e) {
        bad.exit_code = kExitConfig;
        bad.message = e.what();
        return bad;
    }
    std::vector<Conversation> convs;
    try {
        for (auto& line : read_corpus(input)) {
            if (!line.record) {
                bad.exit_code = kExitViolations;
                bad.message = fmt::format("{}:{}: MalformedRecord: {}", input.string(), line.line, line.error);
                return bad;
            }
            convs.push_back(std::move(line.record->conversation));
        }
    } catch (const Error& e) {
        bad.exit_code = kExitConfig;
        bad.message = e.what();
        return bad;
    }
    RunContext ctx;
    ctx.command = "filter";
    ctx.manifest["input_records"] = convs.size();
    return filter_and_write(config.filter, reports, std::move(convs), {}, out_dir, ctx, config.workers);
}

CorpusReports corpus_reports(const std::vector<Conversation>& corpus) {
    CorpusReports r;
    const std::string na = "n/a\n";
    try {
        const auto s = corpus_stats(corpus);
        r.stats = to_json(s);
        r.stats_text = format_table(s);
    } catch (const Error&) {
        r.stats_text = na;
    }
    try {
        const auto d = diversity(corpus);
        r.diversity = to_json(d);
        r.diversity_text = format_table(d);
    } catch (const Error&) {
        r.diversity_text = na;
    }
    try {
        const auto a = act_distribution(corpus);
        r.acts = to_json(a);
        r.acts_text = format_table(a);
    } catch (const Error&) {
        r.acts_text = na;
    }
    return r;
}

std::string CorpusFinding::to_string() const {
    std::string where = fmt::format("line {}", line);
    if (!id.empty()) where += " " + id;
    return turn > 0 ? fmt::format("{}: {}@{}: {}", where, kind, turn, detail)
                    : fmt::format("{}: {}: {}", where, kind, detail);
}

CorpusValidation validate_corpus(const fs::path& path, const TransitionGraph& graph, const Catalog* catalog,
                                 int min_turns) {
    CorpusValidation out;
    std::set<std::string> seen;
    for (const auto& line : read_corpus(path)) {
        ++out.records;
        if (!line.record) {
            out.findings.push_back({line.line, "", "MalformedRecord", 0, line.error});
            continue;
        }
        const auto& c = line.record->conversation;
        if (!seen.insert(c.id).second) out.findings.push_back({line.line, c.id, "DuplicateId", 0, "repeated id"});
        for (const auto& v : validate_pathway(c.pathway, graph, catalog))
            out.findings.push_back({line.line, c.id, std::string(violation_name(v.kind)), v.turn, v.detail});
        for (const auto& v : rule_filter(c, min_turns))
            out.findings.push_back({line.line, c.id, std::string(rule_name(v.kind)), v.turn.value_or(0), "rule filter"});
    }
    return out;
}

}  // namespace abn
