#include "smoothiso/core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "smoothiso/quadrature.hpp"
#include "smoothiso/rng.hpp"

namespace smoothiso {

bool strictly_decreasing_on_grid(const MonotoneFunction& f) {
    for (int i = 0; i <= 1000; ++i) {
        const double t = static_cast<double>(i) / 1000.0;
        if (!(f.deriv1(t) < 0.0)) return false;
    }
    return true;
}

namespace {

double require_param(const std::map<std::string, double>& params,
                     const std::string& key, const std::string& id) {
    auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("builtin_function: '" + id +
                                    "' needs parameter '" + key + "'");
    return it->second;
}

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

MonotoneFunction make_fn(RealFn f, RealFn d1, RealFn d2, bool decreasing) {
    MonotoneFunction m;
    m.eval = std::move(f);
    m.deriv1 = std::move(d1);
    m.deriv2 = std::move(d2);
    m.is_decreasing = decreasing;
    return m;
}

// The common bump exp(-50 (x-1/2)^2) and its derivatives.
double bump(double x) { return std::exp(-50.0 * (x - 0.5) * (x - 0.5)); }
double bump_d1(double x) { return -100.0 * (x - 0.5) * bump(x); }
double bump_d2(double x) {
    const double u = x - 0.5;
    return (10000.0 * u * u - 100.0) * bump(x);
}

}  // namespace

MonotoneFunction builtin_function(const std::string& id,
                                  const std::map<std::string, double>& params) {
    if (id == "lambda1") {
        auto cube = [](double x) { return x <= 0.5 ? -15.0 * std::pow(x - 0.5, 3) : 0.0; };
        auto cube_d1 = [](double x) { return x <= 0.5 ? -45.0 * (x - 0.5) * (x - 0.5) : 0.0; };
        auto cube_d2 = [](double x) { return x <= 0.5 ? -90.0 * (x - 0.5) : 0.0; };
        auto peak = [](double x) { return std::exp(-250.0 * (x - 0.25) * (x - 0.25)); };
        auto peak_d1 = [peak](double x) { return -500.0 * (x - 0.25) * peak(x); };
        auto peak_d2 = [peak](double x) {
            const double u = x - 0.25;
            return (250000.0 * u * u - 500.0) * peak(x);
        };
        return make_fn(
            [=](double x) { return cube(x) - 0.3 * (x - 0.5) + peak(x); },
            [=](double x) { return cube_d1(x) - 0.3 + peak_d1(x); },
            [=](double x) { return cube_d2(x) + peak_d2(x); }, false);
    }
    if (id == "lambda2") {
        const double sigma = require_param(params, "sigma", id);
        return make_fn([sigma](double x) { return 16.0 * sigma * x; },
                       [sigma](double) { return 16.0 * sigma; },
                       [](double) { return 0.0; }, false);
    }
    if (id == "lambda3") {
        return make_fn([](double x) { return 0.2 * bump(x); },
                       [](double x) { return 0.2 * bump_d1(x); },
                       [](double x) { return 0.2 * bump_d2(x); }, false);
    }
    if (id == "lambda4") {
        return make_fn([](double x) { return -0.1 * std::cos(6.0 * M_PI * x); },
                       [](double x) { return 0.6 * M_PI * std::sin(6.0 * M_PI * x); },
                       [](double x) { return 3.6 * M_PI * M_PI * std::cos(6.0 * M_PI * x); },
                       false);
    }
    if (id == "lambda5") {
        return make_fn([](double x) { return -0.2 * x + 0.2 * bump(x); },
                       [](double x) { return -0.2 + 0.2 * bump_d1(x); },
                       [](double x) { return 0.2 * bump_d2(x); }, false);
    }
    if (id == "lambda6") {
        return make_fn(
            [](double x) { return -0.2 * x - 0.1 * std::cos(6.0 * M_PI * x); },
            [](double x) { return -0.2 + 0.6 * M_PI * std::sin(6.0 * M_PI * x); },
            [](double x) { return 3.6 * M_PI * M_PI * std::cos(6.0 * M_PI * x); },
            false);
    }
    if (id == "lambda7") {
        return make_fn([](double x) { return -(1.0 + x) + 0.45 * bump(x); },
                       [](double x) { return -1.0 + 0.45 * bump_d1(x); },
                       [](double x) { return 0.45 * bump_d2(x); }, false);
    }
    if (id == "lambda_a") {
        const double a = require_param(params, "a", id);
        return make_fn([a](double x) { return -(1.0 + x) + a * bump(x); },
                       [a](double x) { return -1.0 + a * bump_d1(x); },
                       [a](double x) { return a * bump_d2(x); }, a == 0.0);
    }
    if (id == "linear") {
        const double c0 = param_or(params, "intercept", 0.0);
        const double c1 = param_or(params, "slope", -1.0);
        if (!(c1 < 0.0))
            throw std::invalid_argument("builtin_function: linear slope must be negative");
        return make_fn([c0, c1](double x) { return c0 + c1 * x; },
                       [c1](double) { return c1; }, [](double) { return 0.0; }, true);
    }
    if (id == "quadratic") {
        return make_fn([](double x) { return 1.0 - x - 0.5 * x * x; },
                       [](double x) { return -1.0 - x; },
                       [](double) { return -1.0; }, true);
    }
    if (id == "expdec") {
        return make_fn([](double x) { return std::exp(-x); },
                       [](double x) { return -std::exp(-x); },
                       [](double x) { return std::exp(-x); }, true);
    }
    throw std::invalid_argument("builtin_function: unknown id '" + id + "'");
}

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values,
                           double initial_value, Continuity c)
    : breaks_(std::move(breakpoints)),
      values_(std::move(values)),
      initial_(initial_value),
      cont_(c) {
    if (breaks_.size() != values_.size())
        throw std::invalid_argument("StepFunction: breakpoints/values length mismatch");
    for (std::size_t j = 1; j < breaks_.size(); ++j)
        if (!(breaks_[j] > breaks_[j - 1]))
            throw std::invalid_argument("StepFunction: breakpoints must be strictly ascending");
}

double StepFunction::operator()(double t) const {
    if (breaks_.empty()) return initial_;
    if (cont_ == Continuity::right) {
        // value on [b_j, b_{j+1})
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        if (it == breaks_.begin()) return initial_;
        return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
    }
    // left: values_[j] on (b_{j-1}, b_j], extended by continuity at the ends
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
    if (it == breaks_.end()) return values_.back();
    return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

double StepFunction::jump(std::size_t j) const {
    return values_[j] - (j == 0 ? initial_ : values_[j - 1]);
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() != values_.size() || knots_.size() < 2)
        throw std::invalid_argument("PiecewiseLinear: need >= 2 matching knots/values");
    for (std::size_t j = 1; j < knots_.size(); ++j)
        if (!(knots_[j] > knots_[j - 1]))
            throw std::invalid_argument("PiecewiseLinear: knots must be strictly ascending");
}

double PiecewiseLinear::operator()(double t) const {
    if (t < knots_.front() || t > knots_.back())
        throw std::out_of_range("PiecewiseLinear: evaluation outside domain");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    if (it == knots_.end()) return values_.back();
    std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
    if (hi == 0) return values_.front();
    const std::size_t lo = hi - 1;
    const double u = (t - knots_[lo]) / (knots_[hi] - knots_[lo]);
    return values_[lo] + u * (values_[hi] - values_[lo]);
}

double PiecewiseLinear::slope_at(std::size_t segment) const {
    return (values_[segment + 1] - values_[segment]) /
           (knots_[segment + 1] - knots_[segment]);
}

ModelSpec make_regression_model(MonotoneFunction lambda, double sigma) {
    ModelSpec m;
    m.kind = ModelKind::regression;
    m.lambda = std::move(lambda);
    m.sigma = sigma;
    m.embedding = Embedding::brownian_motion;
    const double s2 = sigma * sigma;
    m.L = [s2](double t) { return s2 * t; };
    m.Lprime = [s2](double) { return s2; };
    m.Lsecond = [](double) { return 0.0; };
    m.q_exponent = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
        const double t = static_cast<double>(i) / 1000.0;
        if (!(m.Lprime(t) > 0.0) || !std::isfinite(m.Lprime(t)))
            throw std::invalid_argument("make_regression_model: L' must be positive (sigma > 0)");
    }
    return m;
}

ModelSpec make_density_model(MonotoneFunction lambda) {
    ModelSpec m;
    m.kind = ModelKind::density;
    m.lambda = lambda;
    m.sigma = 0.0;
    m.embedding = Embedding::brownian_bridge;
    m.L = [lambda](double t) { return true_cumulative(lambda, t); };
    m.Lprime = lambda.eval;
    m.Lsecond = lambda.deriv1;
    m.q_exponent = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
        const double t = static_cast<double>(i) / 1000.0;
        if (!(m.Lprime(t) > 0.0) || !std::isfinite(m.Lprime(t)))
            throw std::invalid_argument("make_density_model: lambda must be positive");
    }
    return m;
}

WeightMeasure uniform_weight() {
    WeightMeasure w;
    w.w = [](double) { return 1.0; };
    w.name = "uniform";
    return w;
}

WeightMeasure boundary_weight(double p) {
    WeightMeasure w;
    w.w = [p](double t) { return std::pow(t * (1.0 - t), 2.0 * p); };
    w.name = "boundary";
    return w;
}

Sample simulate_regression(const MonotoneFunction& lambda, std::size_t n,
                           double sigma, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("simulate_regression: n must be >= 2");
    if (sigma < 0.0) throw std::invalid_argument("simulate_regression: sigma must be >= 0");
    Sample s;
    s.n = n;
    s.xs.resize(n);
    s.ys.resize(n);
    s.sigma_true = sigma;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i + 1) / static_cast<double>(n);
        s.xs[i] = x;
        const double eps =
            sigma == 0.0 ? 0.0 : sigma * rng_normal(seed, stream::regression_noise, i);
        s.ys[i] = lambda(x) + eps;
    }
    return s;
}

namespace {

// Monotone evaluator of Lambda on [0,1]: prefix sums over 4096 cells,
// 16-point Gauss-Legendre per (partial) cell.
class CumulativeTable {
public:
    explicit CumulativeTable(const MonotoneFunction& lambda)
        : lambda_(&lambda), prefix_(kCells + 1, 0.0) {
        for (std::size_t c = 0; c < kCells; ++c) {
            const double a = static_cast<double>(c) / kCells;
            const double b = static_cast<double>(c + 1) / kCells;
            prefix_[c + 1] = prefix_[c] + integrate_gl(lambda_->eval, a, b, 16);
        }
    }

    double operator()(double t) const {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return prefix_.back();
        const double pos = t * kCells;
        const std::size_t c = std::min<std::size_t>(static_cast<std::size_t>(pos), kCells - 1);
        const double a = static_cast<double>(c) / kCells;
        return prefix_[c] + integrate_gl(lambda_->eval, a, t, 16);
    }

    double total() const { return prefix_.back(); }

private:
    static constexpr std::size_t kCells = 4096;
    const MonotoneFunction* lambda_;
    std::vector<double> prefix_;
};

}  // namespace

Sample simulate_density(const MonotoneFunction& lambda, std::size_t n,
                        std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("simulate_density: n must be >= 2");
    for (int i = 0; i <= 1000; ++i) {
        const double t = static_cast<double>(i) / 1000.0;
        if (lambda(t) < 0.0)
            throw std::invalid_argument("simulate_density: lambda is negative on [0,1]");
    }
    CumulativeTable cumulative(lambda);
    if (std::fabs(cumulative.total() - 1.0) > 1e-6)
        throw std::invalid_argument("simulate_density: lambda does not integrate to 1");

    Sample s;
    s.n = n;
    s.xs.resize(n);
    s.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.xs[i] = static_cast<double>(i + 1) / static_cast<double>(n);
        const double u = rng_u01(seed, stream::density_draw, i);
        // invert Lambda by bisection to 1e-12
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 50 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            (cumulative(mid) < u ? lo : hi) = mid;
        }
        s.ys[i] = 0.5 * (lo + hi);
    }
    std::sort(s.ys.begin(), s.ys.end());
    return s;
}

StepFunction cumulative_step(const Sample& sample, ModelKind kind) {
    if (sample.n == 0 || sample.ys.size() != sample.n)
        throw std::invalid_argument("cumulative_step: malformed sample");
    const double n = static_cast<double>(sample.n);
    std::vector<double> breaks(sample.n), values(sample.n);
    if (kind == ModelKind::regression) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sample.n; ++i) {
            acc += sample.ys[i] / n;
            breaks[i] = static_cast<double>(i + 1) / n;
            values[i] = acc;
        }
    } else {
        std::vector<double> sorted = sample.ys;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sample.n; ++i) {
            breaks[i] = sorted[i];
            values[i] = static_cast<double>(i + 1) / n;
        }
        // merge ties (possible only for degenerate inputs)
        std::vector<double> b2, v2;
        for (std::size_t i = 0; i < breaks.size(); ++i) {
            if (!b2.empty() && breaks[i] == b2.back())
                v2.back() = values[i];
            else {
                b2.push_back(breaks[i]);
                v2.push_back(values[i]);
            }
        }
        breaks = std::move(b2);
        values = std::move(v2);
    }
    return StepFunction(std::move(breaks), std::move(values), 0.0);
}

double true_cumulative(const MonotoneFunction& lambda, double t) {
    if (t < 0.0 || t > 1.0)
        throw std::out_of_range("true_cumulative: t outside [0,1]");
    if (t == 0.0) return 0.0;
    return adaptive_simpson(lambda.eval, 0.0, t, 1e-10);
}

void write_sample_csv(std::ostream& os, const Sample& sample) {
    os << "x,y\n";
    os.precision(17);
    for (std::size_t i = 0; i < sample.n; ++i)
        os << sample.xs[i] << ',' << sample.ys[i] << '\n';
}

Sample read_sample_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("read_sample_csv: empty input");
    // tolerate UTF-8 BOM and trailing CR
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,y")
        throw std::runtime_error("read_sample_csv: expected header 'x,y'");
    Sample s;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("read_sample_csv: malformed row '" + line + "'");
        s.xs.push_back(std::stod(line.substr(0, comma)));
        s.ys.push_back(std::stod(line.substr(comma + 1)));
    }
    s.n = s.ys.size();
    if (s.n < 2) throw std::runtime_error("read_sample_csv: need at least 2 rows");
    // design points are the uniform grid i/n
    for (std::size_t i = 0; i < s.n; ++i) {
        const double want = static_cast<double>(i + 1) / static_cast<double>(s.n);
        if (std::fabs(s.xs[i] - want) > 1e-9)
            throw std::runtime_error(
                "read_sample_csv: design points must be i/n; row " +
                std::to_string(i + 1) + " has x = " + std::to_string(s.xs[i]));
    }
    return s;
}

}  // namespace smoothiso
