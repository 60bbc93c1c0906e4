#include <doctest.h>

#include <cmath>
#include <map>
#include <tuple>

#include "abn/personas.hpp"
#include "fixtures.hpp"

using namespace abn;

TEST_SUITE("personas") {

TEST_CASE("travelers and agents draw from their own profiles") {
    for (std::uint64_t s = 0; s < 2000; ++s) {
        const auto t = sample_traveler(s);
        CHECK((t.arg == ArgProfile::Agreeable || t.arg == ArgProfile::Disagreeable));
        const auto a = sample_agent(s);
        CHECK((a.arg == ArgProfile::OpenMinded || a.arg == ArgProfile::Argumentative));
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    CHECK(sample_traveler(42) == sample_traveler(42));
    CHECK(sample_agent(42) == sample_agent(42));
}

TEST_CASE("traveler sampling is uniform over the 60 combinations") {
    constexpr int n = 60000;
    std::map<std::tuple<int, int, int>, int> counts;
    for (std::uint64_t s = 0; s < n; ++s) {
        const auto t = sample_traveler(s);
        ++counts[{static_cast<int>(t.arg), static_cast<int>(t.pref), static_cast<int>(t.buy)}];
    }
    REQUIRE(counts.size() == 60);
    const double p = 1.0 / 60.0;
    const double mean = n * p;
    const double sigma = std::sqrt(n * p * (1 - p));
    for (const auto& [k, c] : counts) CHECK(std::abs(c - mean) <= 3 * sigma);
}

TEST_CASE("agent sampling is an even split") {
    constexpr int n = 10000;
    int om = 0;
    for (std::uint64_t s = 0; s < n; ++s) om += sample_agent(s).arg == ArgProfile::OpenMinded;
    CHECK(std::abs(om - n / 2) <= 3 * std::sqrt(n * 0.25));
}

TEST_CASE("behavior table values") {
    const TravelerPersona ag{ArgProfile::Agreeable, PreferenceProfile::Boater, BuyingStyle::QualityConcerned};
    const TravelerPersona di{ArgProfile::Disagreeable, PreferenceProfile::Boater, BuyingStyle::QualityConcerned};
    const auto [tag, om] = behavior_params(ag, {ArgProfile::OpenMinded});
    const auto [tdi, ar] = behavior_params(di, {ArgProfile::Argumentative});

    CHECK(tag == BehaviorParams{1.2, 3, 1, 0.8, 0.2});
    CHECK(tdi == BehaviorParams{0.8, 4, 3, 0.4, 0.7});
    CHECK(om.concession_scale == 1.0);
    CHECK(om.max_price_rounds == 3);
    CHECK(om.argument_turn_budget == 2);
    CHECK(ar.concession_scale == 0.8);
    CHECK(ar.max_price_rounds == 4);
    CHECK(ar.argument_turn_budget == 3);

    CHECK(om.concession_scale > ar.concession_scale);
    CHECK(tdi.argument_turn_budget > tag.argument_turn_budget);
    CHECK(tag.amenity_accept_prob > tdi.amenity_accept_prob);
}

TEST_CASE("behavior_params is total and stays in bounds") {
    for (auto arg : kTravelerArgProfiles)
        for (auto pref : kPreferenceProfiles)
            for (auto buy : kBuyingStyles)
                for (auto agent : kAgentArgProfiles) {
                    const auto [t, a] = behavior_params({arg, pref, buy}, {agent});
                    for (const auto& p : {t, a}) {
                        CHECK(p.concession_scale > 0);
                        CHECK(p.max_price_rounds > 0);
                        CHECK(p.argument_turn_budget >= 0);
                        CHECK(p.amenity_accept_prob >= 0);
                        CHECK(p.amenity_accept_prob <= 1);
                        CHECK(p.justification_demand_prob >= 0);
                        CHECK(p.justification_demand_prob <= 1);
                    }
                    CHECK(behavior_params({arg, pref, buy}, {agent}) == std::pair{t, a});
                }
}

TEST_CASE("abbreviations round trip") {
    CHECK(abbrev(ArgProfile::Agreeable) == "Ag");
    CHECK(abbrev(ArgProfile::Argumentative) == "Ar");
    CHECK(abbrev(PreferenceProfile::ActionAgent) == "AAg");
    CHECK(abbrev(PreferenceProfile::AvidAthlete) == "AAt");
    CHECK(abbrev(PreferenceProfile::SightSeeker) == "SSe");
    CHECK(abbrev(BuyingStyle::BudgetAndQualityConcerned) == "B&QC");
    for (auto p : kPreferenceProfiles) CHECK(parse_preference(abbrev(p)) == p);
    for (auto b : kBuyingStyles) CHECK(parse_buying_style(abbrev(b)) == b);
    for (auto a : {ArgProfile::Agreeable, ArgProfile::Disagreeable, ArgProfile::OpenMinded, ArgProfile::Argumentative})
        CHECK(parse_arg_profile(abbrev(a)) == a);
    CHECK_FALSE(parse_arg_profile("Xx").has_value());
}

TEST_CASE("shipped persona file matches the built-in table") {
    const auto loaded = PersonaTable::load(fixture::data_dir() / "personas.json");
    const auto& d = PersonaTable::defaults();
    CHECK(loaded.behavior == d.behavior);
    CHECK(loaded.buying_style_shift == d.buying_style_shift);
    CHECK(loaded.preference_themes == d.preference_themes);
    CHECK(loaded.theme_boost == d.theme_boost);
    CHECK(d.buying_style_shift.at(BuyingStyle::BudgetConcerned) == doctest::Approx(-0.10));
    CHECK(d.buying_style_shift.at(BuyingStyle::QualityConcerned) == doctest::Approx(0.10));
    CHECK(d.buying_style_shift.at(BuyingStyle::BudgetAndQualityConcerned) == 0.0);
}

TEST_CASE("Escapist themes pick out spa and reading amenities") {
    const auto& d = PersonaTable::defaults();
    CHECK(d.matches_theme(PreferenceProfile::Escapist, "spa and wellness facilities"));
    CHECK(d.matches_theme(PreferenceProfile::Escapist, "reading retreats"));
    CHECK_FALSE(d.matches_theme(PreferenceProfile::Escapist, "game room"));
}

}
