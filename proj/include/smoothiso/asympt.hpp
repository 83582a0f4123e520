#pragma once

#include <cmath>
#include <cstddef>

#include "smoothiso/core.hpp"
#include "smoothiso/kernel.hpp"

namespace smoothiso {

// Bandwidth regime: n b^5 -> 0 (small band) or n b^5 -> C0^2 > 0 (fixed band);
// selects which limiting variance standardizes the error.
enum class Regime { smallband, fixedband };

enum class BiasMode { finite, limit };
enum class CenteringVariant { full, truncated, limit };

// Everything needed to standardize a raw L_p error into an asymptotically
// standard normal statistic.
struct AsymptoticConstants {
    double p = 2.0;
    Regime regime = Regime::smallband;
    Embedding embedding = Embedding::brownian_motion;
    double C0 = 0.0;  // sqrt(n b^5) in the fixed-band regime
    double m_center = 0.0;
    double scale_variance = 0.0;  // sigma2, theta2 or theta_tilde2
    double sigma1 = 0.0;
    double Dsq = 0.0;
    double sigma2 = 0.0;
    double theta2 = std::numeric_limits<double>::quiet_NaN();
    double theta1 = std::numeric_limits<double>::quiet_NaN();
    double theta_tilde2 = std::numeric_limits<double>::quiet_NaN();
};

// Scaled bias of the plain kernel smoother:
//   finite: (nb)^{1/2} ( int k_b(t-u) lambda(u) du - lambda(t) ),
//           lambda treated as 0 outside [0,1] (raw kernel in the
//           boundary zones, where it blows up like (nb)^{1/2});
//   limit:  (1/2) C0 lambda''(t) int k(y) y^2 dy.
double bias_gn(const MonotoneFunction& lambda, const KernelSpec& kernel,
               std::size_t n, double b, double t, BiasMode mode, double C0 = 0.0);

// Same scaled bias with the boundary-corrected kernel; identical to
// bias_gn on [b, 1-b] and O((nb)^{1/2} b^2) uniformly. Used for
// full-interval centering constants of boundary-corrected estimators.
double bias_gn_corrected(const MonotoneFunction& lambda, const KernelSpec& kernel,
                         std::size_t n, double b, double t);

// Centering constant: double integral of |sqrt(L'(t)) D x + g_(n)(t)|^p
// w(t) phi(x) over the t-interval and x in R (513-node Simpson times
// 40-node Gauss-Hermite). full = [0,1] with the corrected-kernel bias,
// truncated = [b, 1-b], limit = E|x|^p D^p int |L'|^{p/2} w.
double centering_constant(const ModelSpec& model, const WeightMeasure& weight,
                          const KernelSpec& kernel, double p, std::size_t n, double b,
                          CenteringVariant variant);

// Centering over an explicit interval [a1, a2] (corrected-kernel bias).
double centering_constant_on(const ModelSpec& model, const WeightMeasure& weight,
                             const KernelSpec& kernel, double p, std::size_t n,
                             double b, double a1, double a2,
                             std::size_t node_scale = 1);

// sigma_1 = int_{-2}^{2} { E|XY|^p at correlation r(s) - (E|X|^p)^2 } ds,
// bivariate expectation by 40x40 tensor Gauss-Hermite via the conditional
// decomposition, outer integral by 128-node Gauss-Legendre.
double sigma1_constant(const KernelSpec& kernel, double p,
                       std::size_t node_scale = 1);

// sigma^2(p) = sigma_1 D^{2p} int_0^1 |L'|^p w^2 dt.
double variance_sigma2(const ModelSpec& model, const WeightMeasure& weight,
                       const KernelSpec& kernel, double p,
                       std::size_t node_scale = 1);

struct ThetaConstants {
    double theta2;
    double theta1;
    double theta_tilde2;
};

// Fixed-band limiting variances: theta^2(p), theta_1(p) and
// theta~^2 = theta^2 - theta_1^2 / (D^2 L(1)).
ThetaConstants variance_theta(const ModelSpec& model, const WeightMeasure& weight,
                              const KernelSpec& kernel, double p, double C0,
                              std::size_t node_scale = 1);

// c_1(t) = |lambda'(t) / (2 L'(t)^2)|^{1/3} and its analytic derivative.
double c1_value(const ModelSpec& model, double t);
double c1_prime(const ModelSpec& model, double t);

// alpha_0 = ( int_0^1 |c_1'(t)/c_1(t)^2|^p w dt )^{1/p}.
double alpha0(const ModelSpec& model, const WeightMeasure& weight, double p);

// z = (b V)^{-1/2} ( (nb)^{p/2} raw_error - m_center ).
double standardize(double raw_error, double p, std::size_t n, double b,
                   const AsymptoticConstants& constants);

// Fill the constants for an experiment whose error integrates over
// [a1, a2]; regime and embedding select the variance.
AsymptoticConstants compute_constants(const ModelSpec& model,
                                      const WeightMeasure& weight,
                                      const KernelSpec& kernel, double p,
                                      std::size_t n, double b, Regime regime,
                                      double a1, double a2);

}  // namespace smoothiso
