#include "smoothiso/mc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "smoothiso/error.hpp"
#include "smoothiso/lcm.hpp"
#include "smoothiso/parallel.hpp"
#include "smoothiso/rng.hpp"

namespace smoothiso {

using ordered_json = nlohmann::ordered_json;

double BandwidthRule::bandwidth(std::size_t n) const {
    return scale * std::pow(static_cast<double>(n), -exponent);
}

Regime BandwidthRule::regime() const {
    return exponent > 0.2 ? Regime::smallband : Regime::fixedband;
}

std::string estimator_name(EstimatorKind e) {
    switch (e) {
        case EstimatorKind::kernel: return "kernel";
        case EstimatorKind::kernel_corrected: return "kernel_corrected";
        case EstimatorKind::sg: return "sg";
        case EstimatorKind::gs: return "gs";
    }
    return "?";
}

EstimatorKind estimator_from_name(const std::string& name) {
    if (name == "kernel") return EstimatorKind::kernel;
    if (name == "kernel_corrected") return EstimatorKind::kernel_corrected;
    if (name == "sg") return EstimatorKind::sg;
    if (name == "gs") return EstimatorKind::gs;
    throw std::invalid_argument("unknown estimator '" + name + "'");
}

double sample_mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = sample_mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size() - 1);
}

double ks_normal_distance(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const double m = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double cdf = normal_cdf(v[i]);
        d = std::max(d, std::fabs(cdf - static_cast<double>(i + 1) / m));
        d = std::max(d, std::fabs(cdf - static_cast<double>(i) / m));
    }
    return d;
}

namespace {

Sample simulate_for(const ModelSpec& model, std::size_t n, std::uint64_t seed) {
    if (model.kind == ModelKind::regression)
        return simulate_regression(model.lambda, n, model.sigma, seed);
    return simulate_density(model.lambda, n, seed);
}

// Simpson over precomputed values on 2049 uniform nodes; identical rule
// to lp_error.
constexpr std::size_t kErrNodes = 2049;

double simpson_values(const std::vector<double>& vals, double a, double b) {
    const double h = (b - a) / static_cast<double>(vals.size() - 1);
    double acc = vals.front() + vals.back();
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
        acc += vals[i] * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double abs_pow(double x, double p) {
    const double a = std::fabs(x);
    if (p == 2.0) return a * a;
    if (p == 1.0) return a;
    return std::pow(a, p);
}

// Raw L_p error of one estimator realization over [a1,a2].
double replication_error(const StepFunction& cumul, const ModelSpec& model,
                         EstimatorKind estimator, double p, double b,
                         const KernelSpec& kernel, const WeightMeasure& weight,
                         double a1, double a2, double gamma) {
    std::vector<double> grid(kErrNodes);
    for (std::size_t i = 0; i < kErrNodes; ++i)
        grid[i] = a1 + (a2 - a1) * static_cast<double>(i) /
                           static_cast<double>(kErrNodes - 1);

    std::vector<double> est(kErrNodes);
    switch (estimator) {
        case EstimatorKind::kernel:
            for (std::size_t i = 0; i < kErrNodes; ++i)
                est[i] = kernel_estimator(cumul, b, kernel, grid[i], false);
            break;
        case EstimatorKind::kernel_corrected:
            for (std::size_t i = 0; i < kErrNodes; ++i)
                est[i] = kernel_estimator(cumul, b, kernel, grid[i], true);
            break;
        case EstimatorKind::sg: {
            const PiecewiseLinear hull = cumulative_hull(cumul);
            for (std::size_t i = 0; i < kErrNodes; ++i)
                est[i] = smoothed_grenander_at(hull, b, kernel, grid[i]);
            break;
        }
        case EstimatorKind::gs: {
            GsEstimate gs = isotonized_kernel(cumul, b, kernel, grid, gamma);
            est = std::move(gs.fn.values);
            break;
        }
    }
    std::vector<double> integrand(kErrNodes);
    for (std::size_t i = 0; i < kErrNodes; ++i)
        integrand[i] = abs_pow(est[i] - model.lambda(grid[i]), p) * weight(grid[i]);
    return simpson_values(integrand, a1, a2);
}

}  // namespace

CltReport clt_experiment(const CltConfig& config) {
    if (config.M == 0) throw std::invalid_argument("clt_experiment: no replications");
    const KernelSpec& kernel = config.kernel ? *config.kernel : triweight_kernel();
    const double b = config.rule.bandwidth(config.n);
    if (!(b > 0.0 && b < 0.5))
        throw std::invalid_argument("clt_experiment: bandwidth outside (0, 1/2)");

    // each estimator is scored on the interval where it is consistent
    double a1 = 0.0, a2 = 1.0;
    switch (config.estimator) {
        case EstimatorKind::kernel: a1 = b; a2 = 1.0 - b; break;
        case EstimatorKind::kernel_corrected:
        case EstimatorKind::sg: a1 = 0.0; a2 = 1.0; break;
        case EstimatorKind::gs:
            a1 = std::pow(b, config.gamma);
            a2 = 1.0 - a1;
            break;
    }

    const Regime regime = config.rule.regime();
    const AsymptoticConstants constants = compute_constants(
        config.model, config.weight, kernel, config.p, config.n, b, regime, a1, a2);

    CltReport report;
    report.estimator = estimator_name(config.estimator);
    report.p = config.p;
    report.n = config.n;
    report.b = b;
    report.M = config.M;
    report.seed = config.seed;
    report.regime = regime == Regime::smallband ? "smallband" : "fixedband";
    report.interval_lo = a1;
    report.interval_hi = a2;
    report.constants = constants;
    report.z_values.resize(config.M);

    const bool alt = regime == Regime::fixedband &&
                     config.model.embedding == Embedding::brownian_bridge;
    std::vector<double> raw(config.M);
    parallel_for(config.M, resolve_workers(config.workers), [&](std::size_t r) {
        const std::uint64_t seed_r =
            derive_seed(config.seed, stream::replication, config.rep_offset + r);
        const Sample sample = simulate_for(config.model, config.n, seed_r);
        const StepFunction cumul = cumulative_step(sample, config.model.kind);
        raw[r] = replication_error(cumul, config.model, config.estimator, config.p, b,
                                   kernel, config.weight, a1, a2, config.gamma);
        report.z_values[r] = standardize(raw[r], config.p, config.n, b, constants);
    });
    if (alt) {
        AsymptoticConstants bm = constants;
        bm.scale_variance = constants.theta2;
        report.z_values_alt.resize(config.M);
        for (std::size_t r = 0; r < config.M; ++r)
            report.z_values_alt[r] = standardize(raw[r], config.p, config.n, b, bm);
    }
    report.mean = sample_mean(report.z_values);
    report.variance = sample_variance(report.z_values);
    report.ks_distance = ks_normal_distance(report.z_values);
    return report;
}

namespace {

ordered_json constants_json(const AsymptoticConstants& c) {
    ordered_json j;
    j["p"] = c.p;
    j["regime"] = c.regime == Regime::smallband ? "smallband" : "fixedband";
    j["C0"] = c.C0;
    j["m_center"] = c.m_center;
    j["scale_variance"] = c.scale_variance;
    j["sigma1"] = c.sigma1;
    j["Dsq"] = c.Dsq;
    j["sigma2"] = c.sigma2;
    if (c.regime == Regime::fixedband) {
        j["theta2"] = c.theta2;
        j["theta1"] = c.theta1;
        j["theta_tilde2"] = c.theta_tilde2;
    }
    return j;
}

}  // namespace

std::string CltReport::to_json() const {
    ordered_json j;
    j["estimator"] = estimator;
    j["p"] = p;
    j["n"] = n;
    j["b"] = b;
    j["M"] = M;
    j["seed"] = seed;
    j["regime"] = regime;
    j["interval"] = {interval_lo, interval_hi};
    j["constants"] = constants_json(constants);
    j["mean"] = mean;
    j["variance"] = variance;
    j["ks_distance"] = ks_distance;
    j["z_values"] = z_values;
    if (!z_values_alt.empty()) j["z_values_alt"] = z_values_alt;
    return j.dump(2) + "\n";
}

void CltReport::write_z_csv(std::ostream& os) const {
    os << "z\n";
    os.precision(17);
    for (double z : z_values) os << z << '\n';
}

SgVsKernelResult sg_vs_kernel_experiment(const ModelSpec& model, double p,
                                         std::size_t n, double b,
                                         const WeightMeasure& weight, std::size_t M,
                                         std::uint64_t seed, int workers,
                                         const KernelSpec* kernel_ptr) {
    if (M == 0) throw std::invalid_argument("sg_vs_kernel_experiment: no replications");
    if (!(p >= 1.0 && p < 5.0))
        throw std::invalid_argument("sg_vs_kernel_experiment: p must be in [1, 5)");
    const KernelSpec& kernel = kernel_ptr ? *kernel_ptr : triweight_kernel();
    SgVsKernelResult out;
    out.alpha0 = alpha0(model, weight, p);

    out.statistic_draws.resize(M);
    const double scale = std::pow(static_cast<double>(n), 2.0 / 3.0);
    parallel_for(M, resolve_workers(workers), [&](std::size_t r) {
        const std::uint64_t seed_r = derive_seed(seed, stream::replication, r);
        const Sample sample = simulate_for(model, n, seed_r);
        const StepFunction cumul = cumulative_step(sample, model.kind);
        const PiecewiseLinear hull = cumulative_hull(cumul);
        const double err = lp_error(
            [&](double t) { return smoothed_grenander_at(hull, b, kernel, t); },
            [&](double t) { return kernel_estimator(cumul, b, kernel, t, true); }, p,
            weight, b, 1.0 - b);
        out.statistic_draws[r] = scale * std::pow(err, 1.0 / p);
    });

    const ChernoffGapSample gaps =
        chernoff_gap_sample(4.0, 5e-4, M, derive_seed(seed, stream::generic, 1), workers);
    out.reference_draws.resize(M);
    for (std::size_t r = 0; r < M; ++r)
        out.reference_draws[r] = out.alpha0 * gaps.draws[r];

    // quantile-quantile correlation of the two sorted samples
    std::vector<double> a = out.statistic_draws, bdr = out.reference_draws;
    std::sort(a.begin(), a.end());
    std::sort(bdr.begin(), bdr.end());
    const double ma = sample_mean(a), mb = sample_mean(bdr);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        sab += (a[i] - ma) * (bdr[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (bdr[i] - mb) * (bdr[i] - mb);
    }
    out.qq_correlation = (saa > 0.0 && sbb > 0.0) ? sab / std::sqrt(saa * sbb) : 0.0;
    return out;
}

std::string SgVsKernelResult::to_json() const {
    ordered_json j;
    j["alpha0"] = alpha0;
    j["qq_correlation"] = qq_correlation;
    j["statistic_draws"] = statistic_draws;
    j["reference_draws"] = reference_draws;
    return j.dump(2) + "\n";
}

ChernoffGapSample chernoff_gap_sample(double c, double step, std::size_t M,
                                      std::uint64_t seed, int workers,
                                      std::size_t rep_offset) {
    if (!(c > 0.0)) throw std::invalid_argument("chernoff_gap_sample: c must be > 0");
    if (!(step > 0.0) || step > 1e-3 * c)
        throw std::invalid_argument("chernoff_gap_sample: step must be in (0, c/1000]");
    const std::size_t m = static_cast<std::size_t>(std::ceil(c / step));
    const double h = c / static_cast<double>(m);
    const double sqh = std::sqrt(h);

    ChernoffGapSample out;
    out.c = c;
    out.step = h;
    out.draws.resize(M);
    parallel_for(M, resolve_workers(workers), [&](std::size_t r) {
        const std::uint64_t seed_r =
            derive_seed(seed, stream::replication, rep_offset + r);
        std::vector<double> ts(2 * m + 1), zs(2 * m + 1);
        // two independent halves built outward from the origin
        ts[m] = 0.0;
        zs[m] = 0.0;
        double w = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            w += sqh * rng_normal(seed_r, stream::brownian_pos, k);
            const double t = h * static_cast<double>(k + 1);
            ts[m + k + 1] = t;
            zs[m + k + 1] = w - t * t;
        }
        w = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            w += sqh * rng_normal(seed_r, stream::brownian_neg, k);
            const double t = -h * static_cast<double>(k + 1);
            ts[m - k - 1] = t;
            zs[m - k - 1] = w - t * t;
        }
        out.draws[r] = concave_gap(ts, zs, 0.0);
    });
    return out;
}

std::string ChernoffGapSample::to_json() const {
    ordered_json j;
    j["c"] = c;
    j["step"] = step;
    j["mean"] = sample_mean(draws);
    j["draws"] = draws;
    return j.dump(2) + "\n";
}

BoundaryTable boundary_blowup_experiment(const ModelSpec& model, double p,
                                         const std::vector<std::size_t>& n_ladder,
                                         const BandwidthRule& rule,
                                         const WeightMeasure& weight, std::size_t M,
                                         std::uint64_t seed, int workers,
                                         const KernelSpec* kernel_ptr) {
    const KernelSpec& kernel = kernel_ptr ? *kernel_ptr : triweight_kernel();
    BoundaryTable table;
    table.p = p;
    for (std::size_t n : n_ladder) {
        const double b = rule.bandwidth(n);
        const double scale = std::pow(static_cast<double>(n) * b, 0.5 * p);
        std::vector<double> raw_u(M), raw_c(M);
        parallel_for(M, resolve_workers(workers), [&](std::size_t r) {
            const std::uint64_t seed_r = derive_seed(seed, stream::replication, r);
            const Sample sample = simulate_for(model, n, seed_r);
            const StepFunction cumul = cumulative_step(sample, model.kind);
            raw_u[r] = lp_error(
                [&](double t) { return kernel_estimator_raw(cumul, b, kernel, t); },
                model.lambda.eval, p, weight, 0.0, b);
            raw_c[r] = lp_error(
                [&](double t) { return kernel_estimator(cumul, b, kernel, t, true); },
                model.lambda.eval, p, weight, 0.0, b);
        });
        BoundaryRow row;
        row.n = n;
        row.b = b;
        row.uncorrected = scale * sample_mean(raw_u);
        row.corrected = scale * sample_mean(raw_c);
        table.rows.push_back(row);
    }
    return table;
}

std::string BoundaryTable::to_json() const {
    ordered_json j;
    j["p"] = p;
    ordered_json rows_json = ordered_json::array();
    for (const BoundaryRow& r : rows) {
        ordered_json row;
        row["n"] = r.n;
        row["b"] = r.b;
        row["uncorrected"] = r.uncorrected;
        row["corrected"] = r.corrected;
        rows_json.push_back(row);
    }
    j["rows"] = rows_json;
    return j.dump(2) + "\n";
}

void BoundaryTable::write_csv(std::ostream& os) const {
    os << "n,b,uncorrected,corrected\n";
    os.precision(17);
    for (const BoundaryRow& r : rows)
        os << r.n << ',' << r.b << ',' << r.uncorrected << ',' << r.corrected << '\n';
}

}  // namespace smoothiso
