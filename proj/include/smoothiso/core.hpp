#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace smoothiso {

using RealFn = std::function<double(double)>;

// A target function on [0,1] with analytic first and second derivatives.
struct MonotoneFunction {
    RealFn eval;
    RealFn deriv1;
    RealFn deriv2;
    bool is_decreasing = false;

    double operator()(double t) const { return eval(t); }
};

// True when deriv1 < 0 at 1001 uniform grid points (surrogate for
// "decreasing with inf |lambda'| > 0").
bool strictly_decreasing_on_grid(const MonotoneFunction& f);

// Builtins: lambda1..lambda7, lambda_a, linear, quadratic, expdec.
// params supplies "a" (lambda_a), "sigma" (lambda2) and optional
// "intercept"/"slope" for linear.
MonotoneFunction builtin_function(const std::string& id,
                                  const std::map<std::string, double>& params = {});

// Piecewise-constant cadlag function: value values[j] on [breaks[j], breaks[j+1]),
// initial_value before the first breakpoint. A left-continuous flavor
// (value values[j] on (breaks[j], breaks[j+1]]) carries Grenander-type
// slope functions.
class StepFunction {
public:
    enum class Continuity { right, left };

    StepFunction() = default;
    StepFunction(std::vector<double> breakpoints, std::vector<double> values,
                 double initial_value, Continuity c = Continuity::right);

    double operator()(double t) const;
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }
    double initial_value() const { return initial_; }
    Continuity continuity() const { return cont_; }

    // Jump size at breakpoint j: values[j] - value just before it.
    double jump(std::size_t j) const;

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
    double initial_ = 0.0;
    Continuity cont_ = Continuity::right;
};

// Piecewise-linear curve through (knots, knot_values); evaluation
// interpolates, domain is [knots.front(), knots.back()].
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;
    PiecewiseLinear(std::vector<double> knots, std::vector<double> values);

    double operator()(double t) const;
    double slope_at(std::size_t segment) const;
    std::size_t segments() const { return knots_.size() - 1; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& knot_values() const { return values_; }

private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

struct Sample {
    std::size_t n = 0;
    std::vector<double> xs;  // i/n, i = 1..n
    std::vector<double> ys;
    double sigma_true = -1.0;  // negative: unknown
};

enum class ModelKind { regression, density };
enum class Embedding { brownian_motion, brownian_bridge };

// Statistical model: target, noise level, embedding process and the
// time-change L of the approximating Gaussian process.
struct ModelSpec {
    ModelKind kind = ModelKind::regression;
    MonotoneFunction lambda;
    double sigma = 0.0;  // regression only
    Embedding embedding = Embedding::brownian_motion;
    RealFn L;
    RealFn Lprime;
    RealFn Lsecond;
    double q_exponent = std::numeric_limits<double>::infinity();
};

// Regression model: Y_i = lambda(i/n) + N(0, sigma^2), L(t) = sigma^2 t.
ModelSpec make_regression_model(MonotoneFunction lambda, double sigma);

// Density model: n i.i.d. draws with density lambda on [0,1];
// L = Lambda (cumulative), Brownian-bridge embedding.
ModelSpec make_density_model(MonotoneFunction lambda);

struct WeightMeasure {
    RealFn w;
    std::string name = "uniform";

    double operator()(double t) const { return w(t); }
};

WeightMeasure uniform_weight();
// w(t) = t^{2p} (1-t)^{2p}: discounts the boundary regions.
WeightMeasure boundary_weight(double p);

Sample simulate_regression(const MonotoneFunction& lambda, std::size_t n,
                           double sigma, std::uint64_t seed);

Sample simulate_density(const MonotoneFunction& lambda, std::size_t n,
                        std::uint64_t seed);

StepFunction cumulative_step(const Sample& sample, ModelKind kind);

// Lambda(t) = integral of lambda over [0,t], adaptive quadrature, |err| <= 1e-10.
double true_cumulative(const MonotoneFunction& lambda, double t);

void write_sample_csv(std::ostream& os, const Sample& sample);
Sample read_sample_csv(std::istream& is);

}  // namespace smoothiso
