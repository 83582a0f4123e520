#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "smoothiso/core.hpp"
#include "smoothiso/lcm.hpp"

using namespace smoothiso;
using testing_helpers::lcm_bruteforce;
using testing_helpers::uniform;

TEST_CASE("hull of concave input is the input") {
    const std::vector<double> ts{0.0, 1.0 / 3, 2.0 / 3, 1.0};
    const std::vector<double> vs{0.0, 0.5, 0.9, 1.0};
    const PiecewiseLinear hull = least_concave_majorant(ts, vs);
    REQUIRE(hull.knots().size() == 4);
    CHECK(hull.knots() == ts);
    CHECK(hull.knot_values() == vs);
}

TEST_CASE("hand example drops the sagging point") {
    const std::vector<double> ts{0.0, 1.0 / 3, 2.0 / 3, 1.0};
    const std::vector<double> vs{0.0, 0.2, 0.9, 1.0};
    const PiecewiseLinear hull = least_concave_majorant(ts, vs);
    REQUIRE(hull.knots().size() == 3);
    CHECK(hull.knots()[1] == 2.0 / 3);
    CHECK(hull.knot_values()[1] == 0.9);
}

TEST_CASE("two points give the connecting segment") {
    const PiecewiseLinear hull = least_concave_majorant({0.0, 1.0}, {0.3, 0.8});
    REQUIRE(hull.segments() == 1);
    CHECK(hull(0.5) == doctest::Approx(0.55));
}

TEST_CASE("unordered input raises") {
    CHECK_THROWS_AS((void)least_concave_majorant({0.0, 0.5, 0.5}, {0.0, 1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)least_concave_majorant({0.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("collinear points are dropped") {
    const PiecewiseLinear hull =
        least_concave_majorant({0.0, 0.25, 0.5, 1.0}, {0.0, 0.25, 0.5, 1.0});
    CHECK(hull.knots().size() == 2);
}

TEST_CASE("grenander slopes") {
    SUBCASE("worked hull example with the left-slope convention") {
        const PiecewiseLinear hull =
            least_concave_majorant({0.0, 2.0 / 3, 1.0}, {0.0, 0.9, 1.0});
        const StepFunction slopes = grenander_slopes(hull);
        CHECK(slopes(0.5) == doctest::Approx(1.35));
        CHECK(slopes(2.0 / 3) == doctest::Approx(1.35));  // left-continuous at the knot
        CHECK(slopes(0.8) == doctest::Approx(0.3));
        CHECK(slopes(1.0) == doctest::Approx(0.3));
        CHECK(slopes(0.0) == doctest::Approx(1.35));  // extended at the left endpoint
    }
    SUBCASE("single segment is a constant slope") {
        const StepFunction s = grenander_slopes(PiecewiseLinear({0.0, 1.0}, {0.0, 0.7}));
        CHECK(s(0.0) == doctest::Approx(0.7));
        CHECK(s(0.4) == doctest::Approx(0.7));
        CHECK(s(1.0) == doctest::Approx(0.7));
    }
    SUBCASE("values are nonincreasing for hulls of random data") {
        for (std::uint64_t rep = 0; rep < 30; ++rep) {
            std::vector<double> ts, vs;
            for (int i = 0; i <= 20; ++i) {
                ts.push_back(i / 20.0);
                vs.push_back(uniform(rep, i));
            }
            const StepFunction s = grenander_slopes(least_concave_majorant(ts, vs));
            const std::vector<double>& v = s.values();
            for (std::size_t j = 1; j < v.size(); ++j) CHECK(v[j] <= v[j - 1] + 1e-12);
        }
    }
    SUBCASE("non-concave input raises") {
        CHECK_THROWS_AS((void)grenander_slopes(PiecewiseLinear({0.0, 0.5, 1.0},
                                                               {0.0, 0.1, 1.0})),
                        std::invalid_argument);
    }
}

TEST_CASE("concave gap") {
    SUBCASE("zero at input points of a concave curve") {
        const std::vector<double> ts{0.0, 0.25, 0.5, 0.75, 1.0};
        const std::vector<double> vs{0.0, 0.4, 0.65, 0.8, 0.85};
        for (double t : ts) CHECK(concave_gap(ts, vs, t) == doctest::Approx(0.0));
    }
    SUBCASE("|t - 1/2| has gap 1/2 at the center") {
        const std::vector<double> ts{0.0, 0.5, 1.0};
        const std::vector<double> vs{0.5, 0.0, 0.5};
        CHECK(concave_gap(ts, vs, 0.5) == doctest::Approx(0.5));
    }
    SUBCASE("nonnegative on random inputs") {
        for (std::uint64_t rep = 100; rep < 140; ++rep) {
            std::vector<double> ts, vs;
            for (int i = 0; i <= 15; ++i) {
                ts.push_back(i / 15.0);
                vs.push_back(uniform(rep, i) - 0.5);
            }
            for (double t0 : {0.1, 0.37, 0.5, 0.93})
                CHECK(concave_gap(ts, vs, t0) >= 0.0);
        }
    }
    SUBCASE("t0 outside the range raises") {
        CHECK_THROWS_AS((void)concave_gap({0.0, 1.0}, {0.0, 0.0}, 1.5), std::out_of_range);
    }
}

TEST_CASE("monotone chain equals the exhaustive oracle on 500 random instances") {
    for (std::uint64_t rep = 0; rep < 500; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(uniform(rep, 0) * 49.0);
        std::vector<double> ts, vs;
        double t = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            t += 0.01 + uniform(rep, 2 * i + 1);
            ts.push_back(t);
            vs.push_back((uniform(rep, 2 * i + 2) - 0.5) * 4.0);
        }
        const PiecewiseLinear hull = least_concave_majorant(ts, vs);
        const auto oracle = lcm_bruteforce(ts, vs);
        REQUIRE(hull.knots().size() == oracle.first.size());
        for (std::size_t j = 0; j < oracle.first.size(); ++j) {
            CHECK(hull.knots()[j] == oracle.first[j]);
            CHECK(hull.knot_values()[j] == oracle.second[j]);
        }
        // majorant + touching: hull >= data everywhere, equality at knots
        for (std::size_t i = 0; i < n; ++i) CHECK(hull(ts[i]) >= vs[i] - 1e-12);
        // idempotence
        const PiecewiseLinear again =
            least_concave_majorant(hull.knots(), hull.knot_values());
        CHECK(again.knots() == hull.knots());
        CHECK(again.knot_values() == hull.knot_values());
    }
}

TEST_CASE("Grenander slopes of noise-free decreasing data converge at rate 1/n") {
    const MonotoneFunction lam = builtin_function("lambda_a", {{"a", 0.0}});
    auto sup_dist = [&](std::size_t n) {
        const Sample s = simulate_regression(lam, n, 0.0, 1);
        const StepFunction cum = cumulative_step(s, ModelKind::regression);
        std::vector<double> ts{0.0}, vs{0.0};
        for (std::size_t i = 0; i < cum.breakpoints().size(); ++i) {
            ts.push_back(cum.breakpoints()[i]);
            vs.push_back(cum.values()[i]);
        }
        const StepFunction g = grenander_slopes(least_concave_majorant(ts, vs));
        double sup = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double t = 0.1 + 0.8 * i / 400.0;
            sup = std::max(sup, std::fabs(g(t) - lam(t)));
        }
        return sup;
    };
    const double e1 = sup_dist(500);
    const double e2 = sup_dist(1000);
    CHECK(e1 / e2 >= 1.5);
    CHECK(e1 / e2 <= 3.0);
}
