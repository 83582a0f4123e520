#include "smoothiso/error.hpp"

#include <cmath>
#include <stdexcept>

#include "smoothiso/quadrature.hpp"

namespace smoothiso {

namespace {

constexpr std::size_t kNodes = 2049;

double abs_pow(double x, double p) {
    const double a = std::fabs(x);
    if (p == 2.0) return a * a;
    if (p == 1.0) return a;
    return std::pow(a, p);
}

}  // namespace

double lp_error(const RealFn& f, const RealFn& g, double p, const WeightMeasure& weight,
                double a1, double a2) {
    if (p < 1.0) throw std::invalid_argument("lp_error: p must be >= 1");
    if (!(a1 < a2)) throw std::invalid_argument("lp_error: empty interval");
    return simpson(
        [&](double t) { return abs_pow(f(t) - g(t), p) * weight(t); }, a1, a2, kNodes);
}

double hellinger(const RealFn& f, const RealFn& g, const WeightMeasure& weight) {
    const double h = 1.0 / static_cast<double>(kNodes - 1);
    for (std::size_t i = 0; i < kNodes; ++i) {
        const double t = h * static_cast<double>(i);
        if (!(f(t) > 0.0) || !(g(t) > 0.0))
            throw std::domain_error(
                "hellinger: undefined for nonpositive function values");
    }
    const double sq = simpson(
        [&](double t) {
            const double d = std::sqrt(f(t)) - std::sqrt(g(t));
            return d * d * weight(t);
        },
        0.0, 1.0, kNodes);
    return std::sqrt(0.5 * sq);
}

}  // namespace smoothiso
