#include <doctest.h>

#include "oracles.hpp"
#include "specscreen/aggregate.hpp"
#include "specscreen/error.hpp"
#include "specscreen/report.hpp"

#include <random>

using namespace specscreen;

TEST_CASE("disjunctive and conjunctive examples") {
    const std::vector<double> v{0.1, 0.2};
    CHECK(disjunctive(v) == doctest::Approx(0.28).epsilon(1e-15));
    CHECK(conjunctive(v) == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(disjunctive(std::vector<double>{0, 0, 0}) == 0.0);
    CHECK(disjunctive(std::vector<double>{0.3, 1.0, 0.1}) == 1.0);
    CHECK(conjunctive(std::vector<double>{0.3, 0.0}) == 0.0);
    CHECK(conjunctive(std::vector<double>{1, 1, 1}) == 1.0);
}

TEST_CASE("persistent examples and range") {
    CHECK(persistent(std::vector<double>{0.5, 0.5}, 2) == 0.25);
    CHECK(persistent(std::vector<double>{0.5, 0.5}, 1) == 0.75);
    CHECK_THROWS_AS(persistent(std::vector<double>{0.5, 0.5}, 0), Error);
    CHECK_THROWS_AS(persistent(std::vector<double>{0.5, 0.5}, 3), Error);
    CHECK_THROWS_AS(disjunctive(std::vector<double>{0.5, 1.5}), Error);
    CHECK_THROWS_AS(conjunctive(std::vector<double>{-0.1}), Error);
}

TEST_CASE("property: K = 1 and K = n identities hold bit for bit") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 2000; ++rep) {
        const std::size_t n = 2 + rng() % 60;
        std::vector<double> q(n);
        for (auto& x : q) x = rep % 4 == 0 ? std::pow(u(rng), 20.0) : u(rng);
        CHECK(persistent(q, 1) == disjunctive(q));
        CHECK(persistent(q, n) == conjunctive(q));
    }
}

TEST_CASE("property: dynamic programme equals subset enumeration") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 400; ++rep) {
        const std::size_t n = 1 + rng() % 12;
        std::vector<double> q(n), dyadic(n);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = u(rng);
            dyadic[i] = static_cast<double>(rng() % 17) / 16.0;
        }
        for (std::size_t K = 1; K <= n; ++K) {
            CHECK(persistent(q, K) == doctest::Approx(oracle::poisson_binomial_tail(q, K)).epsilon(1e-13));
            // Every intermediate is exactly representable for sixteenths.
            CHECK(persistent(dyadic, K) == oracle::poisson_binomial_tail(dyadic, K));
        }
    }
}

TEST_CASE("property: ordering between the three combinations") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 1 + rng() % 40;
        std::vector<double> q(n);
        for (auto& x : q) x = u(rng);
        double prev = 1.0;
        for (std::size_t K = 1; K <= n; ++K) {
            const double v = persistent(q, K);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v <= prev + 1e-15);
            CHECK(v >= conjunctive(q) - 1e-15);
            CHECK(v <= disjunctive(q) + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("aggregate record and bins") {
    const FrequencyPValueVector pv{"X7", {0.1, 0.2, 0.3}};
    const auto r = aggregate(pv, 2);
    CHECK(r.vertex == "X7");
    CHECK(r.K == 2);
    CHECK(r.persistent == doctest::Approx(0.1 * 0.2 + 0.1 * 0.3 + 0.2 * 0.3 - 2 * 0.1 * 0.2 * 0.3));
    const auto j = to_json(r);
    CHECK(j["persistent"]["K"] == 2);
    CHECK(j["persistent"]["pvalue"].get<double>() == r.persistent);
    CHECK(j["disjunctive"].get<double>() == r.disjunctive);
    CHECK_THROWS_AS(aggregate(FrequencyPValueVector{"bad", {}}, 1), Error);

    CHECK(aggregation_bins(100).size() == 51);
    CHECK(aggregation_bins(100).back() == 50);
    CHECK(aggregation_bins(7).back() == 3);
    CHECK(aggregation_bins(7, false).size() == 7);
}
