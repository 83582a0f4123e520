#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "smoothiso/core.hpp"
#include "smoothiso/estimators.hpp"
#include "smoothiso/lcm.hpp"
#include "smoothiso/quadrature.hpp"
#include "smoothiso/rng.hpp"

using namespace smoothiso;

namespace {

StepFunction staircase(std::size_t cells, const std::function<double(double)>& f) {
    std::vector<double> breaks(cells), values(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        breaks[i] = static_cast<double>(i + 1) / static_cast<double>(cells);
        values[i] = f(breaks[i]);
    }
    return StepFunction(std::move(breaks), std::move(values), f(0.0));
}

}  // namespace

TEST_CASE("kernel estimator on a single unit jump") {
    const StepFunction cum({0.5}, {1.0}, 0.0);
    const double v = kernel_estimator(cum, 0.25, triweight_kernel(), 0.5, false);
    CHECK(v == doctest::Approx(4.0 * 35.0 / 32.0).epsilon(1e-14));  // k(0)/b
}

TEST_CASE("corrected and standard kernel estimators coincide on [b,1-b]") {
    const Sample s = simulate_regression(builtin_function("quadratic"), 150, 0.2, 17);
    const StepFunction cum = cumulative_step(s, ModelKind::regression);
    const double b = 0.12;
    for (int i = 0; i <= 50; ++i) {
        const double t = b + (1.0 - 2.0 * b) * i / 50.0;
        CHECK(kernel_estimator(cum, b, triweight_kernel(), t, true) ==
              kernel_estimator(cum, b, triweight_kernel(), t, false));
    }
}

TEST_CASE("empty window gives zero") {
    const StepFunction cum({0.9}, {1.0}, 0.0);
    CHECK(kernel_estimator(cum, 0.1, triweight_kernel(), 0.5, false) == 0.0);
}

TEST_CASE("kernel estimator domain checks") {
    const StepFunction cum({0.5}, {1.0}, 0.0);
    CHECK_THROWS_AS(
        (void)kernel_estimator(cum, 0.2, triweight_kernel(), 0.05, false),
        std::out_of_range);
    CHECK_NOTHROW((void)kernel_estimator(cum, 0.2, triweight_kernel(), 0.05, true));
    CHECK_THROWS_AS((void)kernel_estimator(cum, 0.7, triweight_kernel(), 0.5, false),
                    std::invalid_argument);
}

TEST_CASE("smooth cumulative") {
    const KernelSpec& tw = triweight_kernel();

    SUBCASE("constant input is reproduced everywhere, boundaries included") {
        const StepFunction cum({0.5}, {2.5}, 2.5);
        for (double t : {0.0, 0.02, 0.1, 0.5, 0.93, 1.0})
            CHECK(smooth_cumulative(cum, 0.1, tw, t) == doctest::Approx(2.5).epsilon(1e-13));
    }
    SUBCASE("matches a composite Simpson oracle applied cell by cell") {
        const Sample s = simulate_regression(builtin_function("lambda_a", {{"a", 0.0}}),
                                             40, 0.3, 23);
        const StepFunction cum = cumulative_step(s, ModelKind::regression);
        const double b = 0.15;
        for (double t : {0.05, 0.15, 0.4, 0.77, 0.97}) {
            const double lo = std::max(0.0, t - b), hi = std::min(1.0, t + b);
            // the integrand is smooth only between the jumps of cum; Simpson
            // per constancy cell, 251 nodes each
            std::vector<double> cuts{lo, hi};
            for (double u : cum.breakpoints())
                if (u > lo && u < hi) cuts.push_back(u);
            std::sort(cuts.begin(), cuts.end());
            double oracle = 0.0;
            for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
                const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
                oracle += simpson(
                    [&](double u) {
                        return boundary_kernel_value(tw, t, b, (t - u) / b) / b;
                    },
                    cuts[j], cuts[j + 1], 251) * cum(mid);
            }
            CHECK(smooth_cumulative(cum, b, tw, t) ==
                  doctest::Approx(oracle).epsilon(1e-8));
        }
    }
    SUBCASE("staircase of a linear function stays within one cell height") {
        const StepFunction cum = staircase(4000, [](double u) { return 0.3 + 0.5 * u; });
        for (double t : {0.0, 0.07, 0.5, 1.0})
            CHECK(std::fabs(smooth_cumulative(cum, 0.1, tw, t) - (0.3 + 0.5 * t)) <=
                  0.5 / 4000.0 + 1e-12);
    }
}

TEST_CASE("smoothed Grenander estimator") {
    const KernelSpec& tw = triweight_kernel();

    SUBCASE("linear cumulative gives the constant slope everywhere") {
        // equal jumps c/n: the hull is a single segment of slope c
        const double c = -0.8;
        std::vector<double> grid;
        for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
        const StepFunction cum = staircase(200, [c](double u) { return c * u; });
        const SampledFunction f = smoothed_grenander(cum, 0.1, tw, grid);
        for (double v : f.values) CHECK(v == doctest::Approx(c).epsilon(1e-12));
    }
    SUBCASE("noise-free 1-x data: close to the truth, matches a Riemann oracle") {
        const MonotoneFunction lam = builtin_function("linear", {{"intercept", 1.0}});
        const Sample s = simulate_regression(lam, 1000, 0.0, 1);
        const StepFunction cum = cumulative_step(s, ModelKind::regression);
        const PiecewiseLinear hull = cumulative_hull(cum);
        const double est = smoothed_grenander_at(hull, 0.1, tw, 0.5);
        CHECK(std::fabs(est - 0.5) <= 5e-3);
        // Riemann evaluation of the defining integral over the hull slopes
        const StepFunction slopes = grenander_slopes(hull);
        double oracle = 0.0;
        const int m = 200000;
        for (int i = 0; i < m; ++i) {
            const double u = 0.4 + 0.2 * (i + 0.5) / m;
            oracle += tw.k((0.5 - u) / 0.1) / 0.1 * slopes(u) * (0.2 / m);
        }
        CHECK(est == doctest::Approx(oracle).epsilon(1e-6));
    }
    SUBCASE("interior restriction is nonincreasing across random samples") {
        const MonotoneFunction lam = builtin_function("lambda_a", {{"a", 0.0}});
        for (std::uint64_t rep = 0; rep < 100; ++rep) {
            const Sample s = simulate_regression(lam, 120, 0.1,
                                                 derive_seed(5, stream::replication, rep));
            const StepFunction cum = cumulative_step(s, ModelKind::regression);
            std::vector<double> grid;
            for (int i = 0; i <= 80; ++i) grid.push_back(0.1 + 0.8 * i / 80.0);
            const SampledFunction f = smoothed_grenander(cum, 0.1, tw, grid);
            for (std::size_t i = 1; i < f.values.size(); ++i)
                CHECK(f.values[i] <= f.values[i - 1] + 1e-12);
        }
    }
}

TEST_CASE("isotonized kernel estimator") {
    const KernelSpec& tw = triweight_kernel();

    SUBCASE("coincides with the kernel estimator when the latter is decreasing") {
        // noise-free 1 - x^2 data, decreasing kernel estimate on [b, 1-b]
        MonotoneFunction lam;
        lam.eval = [](double x) { return 1.0 - x * x; };
        lam.deriv1 = [](double x) { return -2.0 * x; };
        lam.deriv2 = [](double) { return -2.0; };
        const Sample s = simulate_regression(lam, 1000, 0.0, 1);
        const StepFunction cum = cumulative_step(s, ModelKind::regression);
        const double b = 0.1, gamma = 0.8;
        const double lo = std::pow(b, gamma), hi = 1.0 - std::pow(b, gamma);
        REQUIRE(kernel_estimate_decreasing(cum, b, tw, b, 1.0 - b, 501));
        std::vector<double> grid;
        for (int i = 0; i <= 200; ++i) grid.push_back(lo + (hi - lo) * i / 200.0);
        const GsEstimate gs = isotonized_kernel(cum, b, tw, grid, gamma);
        CHECK(gs.clt_lo == doctest::Approx(lo));
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            sup = std::max(sup, std::fabs(gs.fn.values[i] -
                                          kernel_estimator(cum, b, tw, grid[i], false)));
        CHECK(sup <= 1e-6);
    }
    SUBCASE("output is nonincreasing for noisy samples") {
        const MonotoneFunction lam = builtin_function("quadratic");
        for (std::uint64_t rep = 0; rep < 100; ++rep) {
            const Sample s = simulate_regression(lam, 150, 0.15,
                                                 derive_seed(9, stream::replication, rep));
            const StepFunction cum = cumulative_step(s, ModelKind::regression);
            std::vector<double> grid;
            for (int i = 0; i <= 150; ++i) grid.push_back(i / 150.0);
            const GsEstimate gs = isotonized_kernel(cum, 0.15, tw, grid, 0.7);
            for (std::size_t i = 1; i < gs.fn.values.size(); ++i)
                CHECK(gs.fn.values[i] <= gs.fn.values[i - 1] + 1e-15);
        }
    }
    SUBCASE("parameter validation") {
        const StepFunction cum({0.5}, {1.0}, 0.0);
        const std::vector<double> coarse{0.0, 0.5, 1.0};
        CHECK_THROWS_AS((void)isotonized_kernel(cum, 0.1, tw, coarse, 0.8),
                        std::invalid_argument);
        std::vector<double> fine;
        for (int i = 0; i <= 200; ++i) fine.push_back(i / 200.0);
        CHECK_THROWS_AS((void)isotonized_kernel(cum, 0.1, tw, fine, 0.4),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)isotonized_kernel(cum, 0.1, tw, fine, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("GS/kernel coincidence frequency across 200 replications") {
    // n = 1000, b = n^{-1/5}, lambda_a(0), sigma = 0.05, gamma = 0.8
    const MonotoneFunction lam = builtin_function("lambda_a", {{"a", 0.0}});
    const KernelSpec& tw = triweight_kernel();
    const double b = std::pow(1000.0, -0.2), gamma = 0.8;
    const double lo = std::pow(b, gamma), hi = 1.0 - lo;
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(lo + (hi - lo) * i / 200.0);

    int event = 0, exact = 0;
    const int M = 200;
    for (int rep = 0; rep < M; ++rep) {
        const Sample s = simulate_regression(lam, 1000, 0.05,
                                             derive_seed(99, stream::replication, rep));
        const StepFunction cum = cumulative_step(s, ModelKind::regression);
        if (!kernel_estimate_decreasing(cum, b, tw, b, 1.0 - b, 501)) continue;
        ++event;
        const GsEstimate gs = isotonized_kernel(cum, b, tw, grid, gamma);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            sup = std::max(sup, std::fabs(gs.fn.values[i] -
                                          kernel_estimator(cum, b, tw, grid[i], false)));
        if (sup == 0.0) ++exact;
    }
    CHECK(event >= 180);       // the event has probability tending to one
    CHECK(exact == event);     // and on it the two estimators coincide exactly
}
