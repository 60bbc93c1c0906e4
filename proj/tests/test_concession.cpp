#include <doctest.h>

#include <cmath>

#include "abn/concession.hpp"
#include "abn/error.hpp"
#include "abn/rng.hpp"
#include "oracles.hpp"

using namespace abn;

namespace {

NegotiationLedger ledger(double pt, double pa, double c_a, double c_t, int k = 1) {
    NegotiationLedger l;
    l.agent_min_price = 1.0;
    l.agent_price = pa;
    l.traveler_price = pt;
    l.c_agent = c_a;
    l.c_traveler = c_t;
    l.agent_round = k - 1;
    l.traveler_round = k - 1;
    return l;
}

}  // namespace

TEST_SUITE("concession") {

TEST_CASE("budget classes and their factors") {
    auto check = [](double t, double a, BudgetClass b, double c) {
        const auto r = classify_budget(t, a);
        CHECK(r.budget == b);
        CHECK(r.c_agent == c);
    };
    check(60, 100, BudgetClass::Low, 1.2);
    check(75, 100, BudgetClass::Moderate, 0.9);
    check(90, 100, BudgetClass::High, 0.6);
    check(65, 100, BudgetClass::Low, 1.2);
    check(85, 100, BudgetClass::High, 0.6);
    check(65.000001, 100, BudgetClass::Moderate, 0.9);
    check(84.999999, 100, BudgetClass::Moderate, 0.9);
    CHECK_THROWS_AS(classify_budget(0, 100), Error);
    CHECK_THROWS_AS(classify_budget(10, -1), Error);
}

TEST_CASE("agent step") {
    CHECK(agent_step(ledger(40000, 50000, 1.2, 0.36)) == doctest::Approx(43011.942119).epsilon(1e-10));
    CHECK(agent_step(ledger(45000, 45000, 1.2, 0.36)) == 45000);
    const double late = agent_step(ledger(40000, 50000, 1.2, 0.36, 10));
    CHECK(std::abs(late - 40000) < 0.1);

    auto floored = ledger(40000, 50000, 1.2, 0.36);
    floored.agent_min_price = 48000;
    CHECK(agent_step(floored) == 48000);
}

TEST_CASE("traveler step variants") {
    auto l = ledger(40000, 50000, 1.2, 0.36);
    l.variant = TravelerVariant::OwnAnchored;
    CHECK(traveler_step(l) == doctest::Approx(46976.7633).epsilon(1e-9));
    l.variant = TravelerVariant::Verbatim;
    CHECK(traveler_step(l) == doctest::Approx(56976.7633).epsilon(1e-9));
    l.variant = TravelerVariant::Mirrored;
    CHECK(traveler_step(l) == doctest::Approx(43023.2367).epsilon(1e-9));

    for (auto v : {TravelerVariant::Mirrored, TravelerVariant::OwnAnchored, TravelerVariant::Verbatim}) {
        auto z = ledger(45000, 45000, 1.2, 0.36);
        z.variant = v;
        CHECK(traveler_step(z) == 45000);
    }
}

TEST_CASE("steps refuse a negative gap") {
    auto l = ledger(50000, 40000, 1.2, 0.36);
    try {
        agent_step(l);
        FAIL("expected NegativeGap");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NegativeGap);
    }
    CHECK_THROWS_AS(traveler_step(l), Error);
}

TEST_CASE("ledger checks") {
    auto l = ledger(40000, 50000, 0.3, 0.6);  // traveler faster than agent
    CHECK_THROWS_AS(l.check(), Error);
    l = ledger(40000, 50000, 1.2, 0.36);
    l.phi = 1.5;
    CHECK_THROWS_AS(l.check(), Error);
    l = ledger(40000, 50000, 1.2, 0.36);
    l.agent_min_price = 60000;
    CHECK_THROWS_AS(l.check(), Error);
    CHECK_NOTHROW(ledger(40000, 50000, 1.2, 0.36).check());
}

TEST_CASE("accept rule is the inclusive threshold") {
    CHECK(should_accept(95, 100, 0.05));
    CHECK_FALSE(should_accept(96, 100, 0.05));
    CHECK_FALSE(should_accept(95 + 1e-9, 100, 0.05));
    CHECK(should_accept(46975.51, 47550.51, 0.012));
    CHECK(within_tolerance(95, 100, 0.05));
    CHECK(within_tolerance(99, 100, 0.05));
    CHECK_FALSE(within_tolerance(94.9, 100, 0.05));
}

TEST_CASE("accept rule is monotone in the traveler price") {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double a = 100 + rng.uniform() * 1000;
        const double phi = 0.01 + 0.5 * rng.uniform();
        const double t1 = rng.uniform() * a;
        const double t2 = t1 + rng.uniform() * a;
        CHECK_FALSE((!should_accept(t1, a, phi) && should_accept(t2, a, phi)));
    }
}

TEST_CASE("recursion examples") {
    const auto t = run_recursion(60, 100, 1.2, 0.36, 0.05, 6);
    CHECK(t.outcome == Outcome::Agreed);
    for (std::size_t k = 1; k < t.agent_prices.size(); ++k) {
        const double before = t.agent_prices[k - 1] - t.traveler_prices[k - 1];
        const double after = t.agent_prices[k] - t.traveler_prices[k];
        CHECK(after < before);
    }
    const auto o = oracle::recursion(60, 100, 1.2, 0.36, 0.05, 6, 85);
    CHECK(o.agreed);
    CHECK(t.agent_prices == o.agent);
    CHECK(t.traveler_prices == o.traveler);

    const auto same = run_recursion(80, 80, 1.2, 0.36, 0.05, 6);
    CHECK(same.outcome == Outcome::Agreed);
    CHECK(same.rounds == 0);

    const auto wide = run_recursion(10, 100, 1.2, 0.36, 0.5, 1, RecursionOptions{TravelerVariant::Mirrored, 1.0, false});
    CHECK(wide.outcome == Outcome::Expired);
    CHECK(wide.rounds == 1);
}

TEST_CASE("recursion matches the oracle on random inputs") {
    Rng rng(2024);
    for (int i = 0; i < 500; ++i) {
        const double pa = 1000 + rng.uniform() * 90000;
        const double pt = pa * (0.3 + 0.7 * rng.uniform());
        const double ca = 0.2 + rng.uniform();
        const double ct = ca * (0.1 + 0.8 * rng.uniform());
        const double phi = 0.01 + 0.09 * rng.uniform();
        const int rounds = 1 + static_cast<int>(rng.index(12));
        const auto t = run_recursion(pt, pa, ca, ct, phi, rounds);
        const auto o = oracle::recursion(pt, pa, ca, ct, phi, rounds, 0.85 * pa);
        REQUIRE(t.agent_prices.size() == o.agent.size());
        REQUIRE(t.traveler_prices.size() == o.traveler.size());
        for (std::size_t k = 0; k < o.agent.size(); ++k) {
            CHECK(std::abs(t.agent_prices[k] - o.agent[k]) <= 1e-12 * o.agent[k]);
            CHECK(std::abs(t.traveler_prices[k] - o.traveler[k]) <= 1e-12 * o.traveler[k]);
        }
        CHECK((t.outcome == Outcome::Agreed) == o.agreed);
    }
}

TEST_CASE("recursion properties") {
    Rng rng(99);
    for (int i = 0; i < 500; ++i) {
        const double pa = 1000 + rng.uniform() * 90000;
        const double pt = pa * (0.3 + 0.7 * rng.uniform());
        const double ca = 0.2 + rng.uniform();
        const double ct = ca * 0.3;
        const auto t = run_recursion(pt, pa, ca, ct, 0.05, 10);
        for (std::size_t k = 1; k < t.agent_prices.size(); ++k) {
            CHECK(t.agent_prices[k] <= t.agent_prices[k - 1]);
            CHECK(t.agent_prices[k] >= 0.85 * pa);
            CHECK(t.traveler_prices[k] >= t.traveler_prices[k - 1]);
            CHECK(t.traveler_prices[k] <= t.agent_prices[k]);
        }
        CHECK(run_recursion(pt, pa, ca, ct, 0.05, 10).agent_prices == t.agent_prices);
    }
}

TEST_CASE("larger c concedes more") {
    auto slow = ledger(40000, 50000, 0.6, 0.18);
    auto fast = ledger(40000, 50000, 1.2, 0.36);
    CHECK(std::abs(agent_step(fast) - 40000) < std::abs(agent_step(slow) - 40000));
    CHECK(std::abs(traveler_step(fast) - 50000) < std::abs(traveler_step(slow) - 50000));
}

TEST_CASE("cent rounding") {
    const auto t = run_recursion(40000, 50000, 1.2, 0.36, 0.01, 5, RecursionOptions{TravelerVariant::Mirrored, {}, true});
    for (double p : t.agent_prices) CHECK(std::round(p * 100) / 100 == p);
}

TEST_CASE("recursion rejects a traveler above the agent") {
    CHECK_THROWS_AS(run_recursion(110, 100, 1.2, 0.36, 0.05, 5), Error);
}

TEST_CASE("phi sampling stays clipped") {
    Rng rng(5);
    double sum = 0;
    constexpr int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double phi = sample_phi(rng);
        CHECK(phi >= 0.01);
        CHECK(phi <= 0.10);
        sum += phi;
    }
    CHECK(std::abs(sum / n - 0.05) < 3 * 0.01 / std::sqrt(n));
}

TEST_CASE("amenity delta shifts price and floor together") {
    auto l = ledger(40000, 50000, 1.2, 0.36);
    l.agent_min_price = 42500;
    l.apply_delta(575.0);
    CHECK(l.agent_price == 50575.0);
    CHECK(l.agent_min_price == 43075.0);
    l.apply_delta(-3404.0);
    CHECK(l.agent_price == 47171.0);
}

}
