#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "abn/error.hpp"
#include "abn/filterkit.hpp"
#include "abn/rng.hpp"
#include "fixtures.hpp"

using namespace abn;

namespace {

ExpertReport uniform_report(const std::string& id, int graded, int consistency, int toxicity) {
    ExpertReport r{id, {}};
    for (auto f : kAllFacets) {
        int v = graded;
        if (f == Facet::GcqeConsistency) v = consistency;
        if (f == Facet::Te) v = toxicity;
        r.scores.push_back({f, v, "r"});
    }
    return r;
}

void set_rating(ExpertReport& r, Facet f, int v) {
    for (auto& s : r.scores)
        if (s.facet == f) s.rating = v;
}

// Independent stage count: a report survives stage i iff no facet in stages 0..i fails.
std::array<int, 5> brute_survivors(const std::vector<ExpertReport>& reports, const RetentionPoles& poles) {
    std::array<int, 5> out{};
    for (const auto& r : reports) {
        int first_fail = 5;
        for (const auto& s : r.scores) {
            bool pass;
            if (s.facet == Facet::GcqeConsistency) pass = s.rating == poles.consistency_pass;
            else if (s.facet == Facet::Te) pass = s.rating == poles.toxicity_pass;
            else pass = s.rating == 3;
            if (!pass) first_fail = std::min(first_fail, static_cast<int>(stage_of(s.facet)));
        }
        for (int i = 0; i < first_fail; ++i) ++out[i];
    }
    return out;
}

}  // namespace

TEST_SUITE("filterkit") {

TEST_CASE("reference conversation passes every rule") {
    CHECK(rule_filter(fixture::reference_conversation()).empty());
}

TEST_CASE("each defect fixture trips exactly its rule") {
    const auto defects = fixture::defective_conversations();
    REQUIRE(defects.size() == 5);
    std::set<RuleViolationKind> kinds;
    for (const auto& d : defects) {
        const auto v = rule_filter(d.conversation);
        REQUIRE_MESSAGE(v.size() == 1, d.expected.to_string());
        CHECK(v[0] == d.expected);
        kinds.insert(v[0].kind);
    }
    CHECK(kinds.size() == 5);
}

TEST_CASE("defect turn locations") {
    const auto defects = fixture::defective_conversations();
    CHECK(defects[0].expected.to_string() == "EmptyUtterance@5");
    CHECK(defects[1].expected.to_string() == "RepetitiveUtterance@12");
    CHECK(defects[3].expected.to_string() == "InsufficientActAnnotations@7");
}

TEST_CASE("minimum turn threshold is configurable") {
    const auto c = fixture::reference_conversation();
    CHECK(rule_filter(c, 17).empty());
    const auto v = rule_filter(c, 18);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == RuleViolationKind::InsufficientRounds);
}

TEST_CASE("judge prompts") {
    const auto c = fixture::reference_conversation();
    const auto coh = build_expert_prompt(Facet::GcqeCoherence, c);
    CHECK(coh.instruction.rfind("Is the conversation coherent", 0) == 0);
    CHECK(coh.instruction.find("1 to 3") != std::string::npos);

    const auto te = build_expert_prompt(Facet::Te, c);
    CHECK(te.instruction.find("toxic") != std::string::npos);
    CHECK(te.instruction.find("0 to 1") != std::string::npos);

    const auto pce = build_expert_prompt(Facet::Pce, c);
    CHECK(pce.instruction.find('{') == std::string::npos);
    const auto& sc = c.pathway.scenario;
    for (const auto desc : {description(sc.agent.arg), description(sc.traveler.arg), description(sc.traveler.pref),
                            description(sc.traveler.buy)})
        CHECK(pce.instruction.find(desc) != std::string::npos);

    CHECK(coh.conversation == transcript(c));
    CHECK(std::count(coh.conversation.begin(), coh.conversation.end(), '\n') == 17);
    CHECK(coh.conversation.rfind("Travel Agent: ", 0) == 0);
    for (auto f : kAllFacets) CHECK_FALSE(build_expert_prompt(f, c).instruction.empty());
}

TEST_CASE("retain under default poles") {
    CHECK(retain(uniform_report("a", 3, 1, 0)));
    const auto toxic = decide(uniform_report("b", 3, 1, 1));
    CHECK_FALSE(toxic.retain);
    CHECK(toxic.failed == Facet::Te);
    auto low = uniform_report("c", 3, 1, 0);
    set_rating(low, Facet::Nee, 2);
    CHECK(decide(low).failed == Facet::Nee);
    const auto inconsistent = decide(uniform_report("d", 3, 0, 0));
    CHECK(inconsistent.failed == Facet::GcqeConsistency);
}

TEST_CASE("retention poles are configurable") {
    const RetentionPoles zero{0, 0};
    CHECK(retain(uniform_report("a", 3, 0, 0), zero));
    CHECK(decide(uniform_report("b", 3, 0, 1), zero).failed == Facet::Te);
    CHECK(retain(uniform_report("c", 3, 1, 1), RetentionPoles::verbatim()));
    CHECK_FALSE(retain(uniform_report("d", 3, 1, 0), RetentionPoles::verbatim()));
}

TEST_CASE("missing facet") {
    auto r = uniform_report("x", 3, 1, 0);
    r.scores.pop_back();
    try {
        decide(r);
        FAIL("expected MissingFacet");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MissingFacet);
    }
    CHECK_THROWS_AS(survival_table({r}), Error);
}

TEST_CASE("staged fixture survival") {
    const auto reports = fixture::staged_reports();
    REQUIRE(reports.size() == 100);
    const auto rows = survival_table(reports);
    REQUIRE(rows.size() == 5);
    const auto brute = brute_survivors(reports, {});
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(rows[i].stage == kStages[i]);
        CHECK(rows[i].survivors == fixture::kStagedSurvivors[i]);
        CHECK(rows[i].survivors == brute[i]);
        CHECK(rows[i].percent == doctest::Approx(fixture::kStagedSurvivors[i]));
        if (i > 0) CHECK(rows[i].survivors <= rows[i - 1].survivors);
    }
    std::set<std::string> kept;
    for (const auto& r : reports)
        if (retain(r)) kept.insert(r.id);
    CHECK(kept == fixture::staged_retained_ids());
}

TEST_CASE("all-retain reports give a flat table") {
    std::vector<ExpertReport> reports;
    for (int i = 0; i < 20; ++i) reports.push_back(uniform_report(std::to_string(i), 3, 1, 0));
    for (const auto& row : survival_table(reports)) {
        CHECK(row.survivors == 20);
        CHECK(row.percent == doctest::Approx(100.0));
    }
}

TEST_CASE("random reports: table agrees with brute force and lowering never retains") {
    Rng rng(2024);
    std::vector<ExpertReport> reports;
    for (int n = 0; n < 2000; ++n) {
        ExpertReport r{std::to_string(n), {}};
        for (auto f : kAllFacets) {
            const int lo = is_binary(f) ? 0 : 1;
            const int v = rng.index(4) == 0 ? lo + static_cast<int>(rng.index(scale_max(f) - lo + 1))
                                            : (f == Facet::Te ? 0 : scale_max(f));
            r.scores.push_back({f, v, ""});
        }
        reports.push_back(r);

        if (!retain(r)) {
            for (auto f : kAllFacets) {
                if (is_binary(f)) continue;
                auto lowered = r;
                set_rating(lowered, f, 1);
                CHECK_FALSE(retain(lowered));
            }
        }
    }
    const auto rows = survival_table(reports);
    const auto brute = brute_survivors(reports, {});
    for (std::size_t i = 0; i < 5; ++i) CHECK(rows[i].survivors == brute[i]);
}

TEST_CASE("report json round trip and loading") {
    const auto reports = fixture::staged_reports();
    for (const auto& r : reports) {
        const auto back = report_from_json(report_to_json(r));
        CHECK(back.id == r.id);
        REQUIRE(back.scores.size() == 11);
        for (auto f : kAllFacets) CHECK(back.find(f)->rating == r.find(f)->rating);
    }
    const auto dir = fixture::scratch_dir("reports");
    fixture::write_reports(dir / "r.jsonl", reports);
    CHECK(load_reports(dir / "r.jsonl").size() == 100);

    auto expect = [](const std::filesystem::path& p, Errc code) {
        try {
            load_reports(p);
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.code() == code);
        }
    };
    expect(dir / "absent.jsonl", Errc::MissingFile);
    fixture::write_reports(dir / "dup.jsonl", {reports[0], reports[0]});
    expect(dir / "dup.jsonl", Errc::DuplicateId);
    std::ofstream(dir / "bad.jsonl") << "{\"id\": \"x\", \"scores\": {\"TE\": {\"rating\": 2}}}\n";
    expect(dir / "bad.jsonl", Errc::MalformedRecord);
    std::ofstream(dir / "junk.jsonl") << "{not json\n";
    expect(dir / "junk.jsonl", Errc::MalformedRecord);
}

}
