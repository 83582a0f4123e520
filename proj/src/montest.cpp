#include "smoothiso/montest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "smoothiso/estimators.hpp"
#include "smoothiso/lcm.hpp"
#include "smoothiso/parallel.hpp"
#include "smoothiso/quadrature.hpp"
#include "smoothiso/rng.hpp"

namespace smoothiso {

using ordered_json = nlohmann::ordered_json;

double rice_sigma(const Sample& sample) {
    if (sample.n < 2) throw std::invalid_argument("rice_sigma: need n >= 2");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < sample.n; ++i) {
        const double d = sample.ys[i + 1] - sample.ys[i];
        acc += d * d;
    }
    return std::sqrt(acc / (2.0 * static_cast<double>(sample.n - 1)));
}

double statistic_Tn(const Sample& sample, double b, const TnOptions& opts) {
    if (!(b > 0.0 && b < 0.5))
        throw std::invalid_argument("statistic_Tn: b must be in (0, 1/2)");
    const KernelSpec& kernel = opts.kernel ? *opts.kernel : triweight_kernel();
    const StepFunction cumul = cumulative_step(sample, ModelKind::regression);
    const PiecewiseLinear hull = cumulative_hull(cumul);

    const double lo = opts.p == 1.0 ? 0.0 : b;
    const double hi = opts.p == 1.0 ? 1.0 : 1.0 - b;
    const double integral = simpson(
        [&](double t) {
            const double sg = smoothed_grenander_at(hull, b, kernel, t);
            const double ke = kernel_estimator(cumul, b, kernel, t, true);
            const double d = std::fabs(sg - ke);
            return opts.p == 2.0 ? d * d : std::pow(d, opts.p);
        },
        lo, hi, opts.grid);
    const double n23 = std::pow(static_cast<double>(sample.n), 2.0 / 3.0);
    return n23 * std::pow(integral, 1.0 / opts.p);
}

TestOutcome bootstrap_test(const Sample& sample, double b, std::size_t B, double alpha,
                           std::uint64_t seed, const TnOptions& opts, int workers) {
    if (B < 20) throw std::invalid_argument("bootstrap_test: B must be >= 20");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("bootstrap_test: alpha must be in (0,1)");
    if (std::ceil(alpha * static_cast<double>(B)) < 1.0)
        throw std::invalid_argument("bootstrap_test: B too small for alpha");
    const KernelSpec& kernel = opts.kernel ? *opts.kernel : triweight_kernel();

    // null fit and noise scale
    const StepFunction cumul = cumulative_step(sample, ModelKind::regression);
    const PiecewiseLinear hull = cumulative_hull(cumul);
    const std::size_t n = sample.n;
    std::vector<double> fit(n);
    for (std::size_t i = 0; i < n; ++i)
        fit[i] = smoothed_grenander_at(hull, b, kernel, sample.xs[i]);
    const double sigma_hat = rice_sigma(sample);

    TestOutcome outcome;
    outcome.Tn = statistic_Tn(sample, b, opts);
    outcome.alpha = alpha;
    outcome.B = B;
    outcome.seed = seed;

    std::vector<double> boot(B);
    parallel_for(B, workers, [&](std::size_t j) {
        const std::uint64_t seed_j = derive_seed(seed, stream::bootstrap, j);
        Sample bs;
        bs.n = n;
        bs.xs = sample.xs;
        bs.ys.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            bs.ys[i] = fit[i] + sigma_hat * rng_normal(seed_j, stream::regression_noise, i);
        boot[j] = statistic_Tn(bs, b, opts);
    });
    std::sort(boot.begin(), boot.end());
    const std::size_t idx = std::min<std::size_t>(
        B, static_cast<std::size_t>(
               std::ceil((1.0 - alpha) * static_cast<double>(B))));
    outcome.critical_value = boot[std::max<std::size_t>(idx, 1) - 1];
    outcome.reject = outcome.Tn > outcome.critical_value;
    return outcome;
}

std::string TestOutcome::to_json() const {
    ordered_json j;
    j["Tn"] = Tn;
    j["critical_value"] = critical_value;
    j["alpha"] = alpha;
    j["reject"] = reject;
    j["B"] = B;
    j["seed"] = seed;
    return j.dump(2) + "\n";
}

PowerResult power_study(const std::string& function_id,
                        const std::map<std::string, double>& params, std::size_t n,
                        double sigma, double b, std::size_t N, std::size_t B,
                        double alpha, std::uint64_t seed, const TnOptions& opts,
                        int workers, std::size_t trial_offset) {
    if (N == 0) throw std::invalid_argument("power_study: N must be >= 1");
    const MonotoneFunction lambda = builtin_function(function_id, params);

    PowerResult result;
    result.outcomes.resize(N);
    parallel_for(N, resolve_workers(workers), [&](std::size_t t) {
        const std::uint64_t seed_t = derive_seed(seed, stream::trial, trial_offset + t);
        const Sample sample = simulate_regression(
            lambda, n, sigma, derive_seed(seed_t, stream::trial_data, 0));
        result.outcomes[t] = bootstrap_test(
            sample, b, B, alpha, derive_seed(seed_t, stream::trial_boot, 0), opts, 1);
    });
    std::size_t rejected = 0;
    for (const TestOutcome& o : result.outcomes) rejected += o.reject ? 1 : 0;
    result.rejection_rate =
        static_cast<double>(rejected) / static_cast<double>(N);
    return result;
}

std::string PowerResult::to_json() const {
    ordered_json j;
    j["rejection_rate"] = rejection_rate;
    ordered_json arr = ordered_json::array();
    for (const TestOutcome& o : outcomes) {
        ordered_json oj;
        oj["Tn"] = o.Tn;
        oj["critical_value"] = o.critical_value;
        oj["reject"] = o.reject;
        arr.push_back(oj);
    }
    j["trials"] = arr;
    return j.dump(2) + "\n";
}

void PowerResult::write_csv_row(std::ostream& os, const std::string& scenario) const {
    os << scenario << ',' << outcomes.size() << ',' << rejection_rate << '\n';
}

}  // namespace smoothiso
