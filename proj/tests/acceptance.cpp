// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "abn/concession.hpp"
#include "abn/error.hpp"
#include "abn/filterkit.hpp"
#include "abn/metrics.hpp"
#include "abn/pipeline.hpp"
#include "abn/rng.hpp"
#include "abn/stub.hpp"
#include "abn/text.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace abn;
namespace fs = std::filesystem;

namespace {

struct Check {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok && failures.size() < 5) failures.push_back(what);
        if (!ok && failures.size() == 5) failures.push_back("...");
    }
};

using Clock = std::chrono::steady_clock;

int failed = 0;

void criterion(int n, const std::string& title, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && secs >= limit_s) c.failures.push_back(fmt::format("took {:.2f}s, limit {:.0f}s", secs, limit_s));
    const bool ok = c.failures.empty();
    failed += !ok;
    std::cout << fmt::format("{} {:>2}. {} ({:.2f}s)", ok ? "PASS" : "FAIL", n, title, secs);
    for (const auto& f : c.failures) std::cout << "\n        " << f;
    std::cout << std::endl;
}

std::vector<Conversation> sample_corpus(int n) {
    auto cfg = PipelineConfig::defaults();
    const auto& personas = PersonaTable::defaults();
    std::vector<Conversation> out;
    for (int i = 0; i < n; ++i)
        out.push_back(generate_conversation(cfg, fixture::catalog(), personas, fixture::graph(), i));
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<oracle::Doc> tokenized(const std::vector<std::string>& sentences) {
    std::vector<oracle::Doc> out;
    for (const auto& s : sentences) out.push_back(text::tokenize(s));
    return out;
}

}  // namespace

int main() {
    criterion(1, "concession factor table", 1.0, [](Check& c) {
        const std::vector<std::tuple<double, double, BudgetClass, double>> rows = {
            {60, 100, BudgetClass::Low, 1.2},          {65, 100, BudgetClass::Low, 1.2},
            {75, 100, BudgetClass::Moderate, 0.9},     {85, 100, BudgetClass::High, 0.6},
            {90, 100, BudgetClass::High, 0.6},         {32500, 50000, BudgetClass::Low, 1.2},
            {42500, 50000, BudgetClass::High, 0.6},    {65.01, 100, BudgetClass::Moderate, 0.9},
            {84.99, 100, BudgetClass::Moderate, 0.9},
        };
        for (const auto& [t, a, cls, factor] : rows) {
            const auto r = classify_budget(t, a);
            c.expect(r.budget == cls && r.c_agent == factor,
                     fmt::format("({}, {}) -> {} {}", t, a, budget_name(r.budget), r.c_agent));
        }
    });

    criterion(2, "recursion matches brute force on 1000 tuples", 5.0, [](Check& c) {
        Rng rng(0xacce);
        for (int i = 0; i < 1000; ++i) {
            const double pa = 1000 + rng.uniform() * 90000;
            const double pt = pa * (0.3 + 0.69 * rng.uniform());
            const double ca = 0.2 + rng.uniform();
            const double ct = ca * kTravelerCRatio;
            const double phi = 0.01 + 0.09 * rng.uniform();
            const int rounds = 1 + static_cast<int>(rng.index(15));
            const auto t = run_recursion(pt, pa, ca, ct, phi, rounds);
            const auto o = oracle::recursion(pt, pa, ca, ct, phi, rounds, kAgentMinRatio * pa);
            if (t.agent_prices.size() != o.agent.size() || t.traveler_prices.size() != o.traveler.size()) {
                c.expect(false, fmt::format("tuple {}: trajectory length differs", i));
                continue;
            }
            for (std::size_t k = 0; k < o.agent.size(); ++k) {
                c.expect(std::abs(t.agent_prices[k] - o.agent[k]) <= 1e-12 * o.agent[k],
                         fmt::format("tuple {} round {}: agent {} vs {}", i, k, t.agent_prices[k], o.agent[k]));
                c.expect(std::abs(t.traveler_prices[k] - o.traveler[k]) <= 1e-12 * o.traveler[k],
                         fmt::format("tuple {} round {}: traveler {} vs {}", i, k, t.traveler_prices[k], o.traveler[k]));
                if (k > 0)
                    c.expect(t.agent_prices[k] - t.traveler_prices[k] <
                                 t.agent_prices[k - 1] - t.traveler_prices[k - 1],
                             fmt::format("tuple {} round {}: gap did not contract", i, k));
            }
            c.expect((t.outcome == Outcome::Agreed) == o.agreed, fmt::format("tuple {}: outcome differs", i));
        }
    });

    criterion(3, "acceptance boundary", 1.0, [](Check& c) {
        c.expect(should_accept(95, 100, 0.05), "95 vs 100 at 0.05 should accept");
        c.expect(!should_accept(95 + 1e-9, 100, 0.05), "95+1e-9 vs 100 at 0.05 should not accept");
    });

    std::vector<Conversation> corpus;
    criterion(4, "structural invariants over 500 conversations", 30.0, [&](Check& c) {
        corpus = sample_corpus(500);
        for (const auto& conv : corpus) {
            const auto& p = conv.pathway;
            const auto n = p.events.size();
            c.expect(n >= 8 && n <= 24, fmt::format("{}: {} turns", conv.id, n));
            c.expect(n >= 3 && p.events[0].act == DialogAct::GreetAsk && p.events[1].act == DialogAct::ElicitPreference &&
                         p.events[2].act == DialogAct::Inform,
                     conv.id + ": opening prefix");
            bool accepted = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (i > 0) c.expect(p.events[i].speaker != p.events[i - 1].speaker, conv.id + ": alternation");
                if (p.events[i].act == DialogAct::AcknowledgeAcceptance)
                    c.expect(accepted, conv.id + ": acknowledgement before acceptance");
                accepted = accepted || p.events[i].act == DialogAct::Accept;
            }
            c.expect(accepted == (p.outcome == Outcome::Agreed), conv.id + ": Accept and outcome disagree");
            const auto v = validate_pathway(p, fixture::graph(), &fixture::catalog());
            c.expect(v.empty(), conv.id + ": validator reports " + (v.empty() ? std::string() : std::string(violation_name(v[0].kind)) + " " + v[0].detail));
            c.expect(conv.turns.size() == n, conv.id + ": turns and events differ");
        }
    });

    criterion(5, "act coverage over the same 500", 0.0, [&](Check& c) {
        std::map<DialogAct, long> counts;
        for (const auto& conv : corpus)
            for (const auto& e : conv.pathway.events) ++counts[e.act];
        for (auto act : kAllDialogActs) c.expect(counts[act] > 0, fmt::format("{} never appears", act_name(act)));
        for (auto act : {DialogAct::GreetAsk, DialogAct::Inform, DialogAct::ElicitPreference})
            c.expect(counts[act] == static_cast<long>(corpus.size()),
                     fmt::format("{} count {}", act_name(act), counts[act]));
    });

    criterion(6, "rule filter fixtures", 0.0, [](Check& c) {
        for (const auto& d : fixture::defective_conversations()) {
            const auto v = rule_filter(d.conversation);
            c.expect(v.size() == 1 && v[0] == d.expected,
                     fmt::format("expected {}, got {} violations{}", d.expected.to_string(), v.size(),
                                 v.empty() ? "" : " starting " + v[0].to_string()));
        }
        c.expect(rule_filter(fixture::reference_conversation()).empty(), "reference conversation flagged");
    });

    criterion(7, "retention and survival on the staged fixture", 0.0, [](Check& c) {
        const auto reports = fixture::staged_reports();
        std::set<std::string> kept;
        for (const auto& r : reports)
            if (retain(r)) kept.insert(r.id);
        c.expect(kept == fixture::staged_retained_ids(), fmt::format("retained {} reports", kept.size()));
        const auto rows = survival_table(reports);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            c.expect(rows[i].survivors == fixture::kStagedSurvivors[i],
                     fmt::format("{}: {} survivors", stage_name(rows[i].stage), rows[i].survivors));
            if (i > 0) c.expect(rows[i].survivors <= rows[i - 1].survivors, "table increases");
        }
        c.expect(rows.front().survivors < 100 && rows.back().survivors < rows.front().survivors, "no decline");
    });

    criterion(8, "diversity metrics match brute force", 0.0, [](Check& c) {
        const std::vector<std::vector<std::string>> corpora = {
            {"The beach villa is lovely.", "The villa costs too much!", "Could we add a spa day?",
             "A spa day adds 300 dollars.", "Lovely, let's do it."},
            {"I would like a lower price.", "I would like a lower price, please.", "The price is fair.",
             "Is the price fair?", "Fair enough.", "Deal.", "Deal, then.", "Thanks for booking with us."},
            {"Hiking trails and mountain huts.", "Museums, galleries and old towns.", "A quiet lake cabin.",
             "Surfing lessons at dawn.", "Street food tours.", "Night markets and night trains.",
             "Cabin, lake, and quiet.", "Dawn surfing again.", "Tours of old towns.", "Huts on the trails."},
        };
        for (std::size_t k = 0; k < corpora.size(); ++k) {
            const auto docs = tokenized(corpora[k]);
            for (int n : {1, 2}) {
                const double d = distinct_n(docs, n), od = oracle::distinct(docs, n);
                const double b = self_bleu(docs, n), ob = oracle::self_bleu(docs, n);
                c.expect(std::abs(d - od) <= 1e-9, fmt::format("corpus {} distinct-{}: {} vs {}", k, n, d, od));
                c.expect(std::abs(b - ob) <= 1e-9, fmt::format("corpus {} self-BLEU-{}: {} vs {}", k, n, b, ob));
            }
        }
        c.expect(distinct_n({{"a", "b"}, {"c", "d", "e"}}, 1) == 1.0, "all-unique distinct-1");
        const TokenDoc s = {"a", "fine", "tour"};
        c.expect(std::abs(self_bleu({s, s, s}, 1) - 1.0) <= 1e-12, "duplicate self-BLEU-1");
        c.expect(std::abs(self_bleu({s, s, s}, 2) - 1.0) <= 1e-12, "duplicate self-BLEU-2");
    });

    criterion(9, "two 500-conversation generate runs are byte identical", 60.0, [](Check& c) {
        const auto dir = fixture::scratch_dir("accept-det");
        std::map<std::string, std::size_t> first;
        for (const auto* run : {"a", "b"}) {
            const auto cmd = fmt::format("{} generate --count 500 --seed 7 --out {} > /dev/null 2>&1", ABNSIM_BIN,
                                         (dir / run).string());
            c.expect(std::system(cmd.c_str()) == 0, std::string("generate run ") + run + " failed");
        }
        for (const auto* f : {"retained.jsonl", "rejected.jsonl", "manifest.json", "stats.json", "survival.json"}) {
            const auto a = slurp(dir / "a" / f), b = slurp(dir / "b" / f);
            const auto ha = std::hash<std::string>{}(a), hb = std::hash<std::string>{}(b);
            c.expect(ha == hb && a == b, fmt::format("{}: {:016x} vs {:016x}", f, ha, hb));
        }
        c.expect(!slurp(dir / "a" / "retained.jsonl").empty(), "empty corpus");
        fs::remove_all(dir);
    });

    criterion(10, "external mode wire format against the echo stub", 30.0, [](Check& c) {
        EchoStub stub;
        stub.start();
        auto cfg = PipelineConfig::defaults();
        cfg.mode = RealizeMode::External;
        cfg.endpoint.url = stub.url("/generate");
        HttpGenerator gen(cfg.endpoint, cfg.top_p, cfg.temperature);
        std::vector<Conversation> convs;
        for (int i = 0; i < 5; ++i)
            convs.push_back(generate_conversation(cfg, fixture::catalog(), PersonaTable::defaults(), fixture::graph(), i, &gen));
        const auto requests = stub.requests();
        stub.stop();
        std::size_t r = 0;
        for (const auto& conv : convs)
            for (const auto& t : conv.turns) {
                if (r >= requests.size()) {
                    c.expect(false, "fewer requests than turns");
                    return;
                }
                const auto& req = requests[r++];
                c.expect(t.text == EchoStub::generate_reply(req)["text"].get<std::string>(),
                         conv.id + ": text differs from the stub reply");
                c.expect(req.value("top_p", -1.0) == 0.95, "top_p " + req.value("top_p", nlohmann::json()).dump());
                c.expect(req.value("temperature", -1.0) == 1.0,
                         "temperature " + req.value("temperature", nlohmann::json()).dump());
            }
        c.expect(r == requests.size(), "more requests than turns");
    });

    std::cout << (failed ? fmt::format("{} criteria failed", failed) : std::string("all criteria passed")) << std::endl;
    return failed ? 1 : 0;
}
