#include "smoothiso/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "smoothiso/quadrature.hpp"

namespace smoothiso {

namespace {

constexpr std::size_t kSimpsonT = 513;
constexpr std::size_t kSimpsonU = 257;
constexpr std::size_t kLegendreS = 64;
constexpr std::size_t kLegendreSigma1 = 128;
constexpr std::size_t kLegendreConv = 64;

double abs_pow(double x, double p) {
    const double a = std::fabs(x);
    if (p == 2.0) return a * a;
    if (p == 1.0) return a;
    return std::pow(a, p);
}

double normal_pdf(double x) {
    return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

double normal_cdf_local(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

// E f(Z), Z ~ N(0,1), for f piecewise smooth with the given kink locations:
// Gauss-Legendre panels between kinks (tails truncated at |z| = 12).
std::size_t odd_nodes(std::size_t base, std::size_t scale) {
    return (base - 1) * scale + 1;
}

template <typename F>
double normal_expect_piecewise(const F& f, std::vector<double> kinks,
                               std::size_t scale) {
    constexpr double R = 12.0;
    std::vector<double> pts{-R, R};
    for (double k : kinks)
        if (k > -R && k < R) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] < 1e-13) continue;
        acc += integrate_gl([&](double z) { return f(z) * normal_pdf(z); }, pts[i],
                            pts[i + 1], 96 * scale);
    }
    return acc;
}

// E |m + s Z|^p; closed forms for p = 1, 2, kink-split quadrature otherwise.
double abs_moment(double m, double s, double p, std::size_t scale = 1) {
    s = std::fabs(s);
    if (s == 0.0) return abs_pow(m, p);
    if (p == 2.0) return m * m + s * s;
    if (p == 1.0)
        return 2.0 * s * normal_pdf(m / s) + m * (2.0 * normal_cdf_local(m / s) - 1.0);
    return normal_expect_piecewise([&](double z) { return abs_pow(m + s * z, p); },
                                   {-m / s}, scale);
}

// E [ Z |m + s Z|^p ].
double signed_abs_moment(double m, double s, double p, std::size_t scale = 1) {
    if (s == 0.0) return 0.0;
    if (p == 2.0) return 2.0 * m * s;
    if (p == 1.0) return s * (2.0 * normal_cdf_local(m / s) - 1.0);
    return normal_expect_piecewise([&](double z) { return z * abs_pow(m + s * z, p); },
                                   {-m / s}, scale);
}

// E |A(X)|^p |A(Y)|^p for A(x) = g + a x and a standard bivariate Gaussian
// (X, Y) with correlation rho, via X | Y=y ~ N(rho y, 1 - rho^2).
double pair_abs_moment(double g, double a, double rho, double p,
                       std::size_t scale = 1) {
    if (p == 2.0) {
        const double g2 = g * g, a2 = a * a;
        return g2 * g2 + 2.0 * g2 * a2 * (1.0 + 2.0 * rho) +
               a2 * a2 * (1.0 + 2.0 * rho * rho);
    }
    const double s = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    return normal_expect_piecewise(
        [&](double y) {
            return abs_pow(g + a * y, p) * abs_moment(g + a * rho * y, a * s, p, scale);
        },
        {a != 0.0 ? -g / a : 0.0}, scale);
}

// smoothed mean int k_b^{(t)}(t-u) lambda(u) du (lambda zero off [0,1])
double smoothed_mean(const MonotoneFunction& lambda, const KernelSpec& kernel,
                     double b, double t, bool corrected) {
    const double ylo = std::max(-1.0, (t - 1.0) / b);
    const double yhi = std::min(1.0, t / b);
    double psi1 = 1.0, psi2s = 0.0;
    if (corrected && t < b) {
        const BoundaryCoeffs c = boundary_coeffs(kernel, t / b);
        psi1 = c.psi1;
        psi2s = c.psi2;
    } else if (corrected && t > 1.0 - b) {
        const BoundaryCoeffs c = boundary_coeffs(kernel, (1.0 - t) / b);
        psi1 = c.psi1;
        psi2s = -c.psi2;
    }
    return integrate_gl(
        [&](double y) {
            return (psi1 + psi2s * y) * kernel.k(y) * lambda(t - b * y);
        },
        ylo, yhi, kLegendreConv);
}

double gn_with_branch(const MonotoneFunction& lambda, const KernelSpec& kernel,
                      std::size_t n, double b, double t, bool corrected) {
    return std::sqrt(static_cast<double>(n) * b) *
           (smoothed_mean(lambda, kernel, b, t, corrected) - lambda(t));
}

}  // namespace

double bias_gn(const MonotoneFunction& lambda, const KernelSpec& kernel,
               std::size_t n, double b, double t, BiasMode mode, double C0) {
    if (mode == BiasMode::limit) {
        if (!(C0 > 0.0)) throw std::invalid_argument("bias_gn: limit mode needs C0 > 0");
        return 0.5 * C0 * lambda.deriv2(t) * kernel.K2(1.0);
    }
    if (t < 0.0 || t > 1.0) throw std::out_of_range("bias_gn: t outside [0,1]");
    return gn_with_branch(lambda, kernel, n, b, t, false);
}

double bias_gn_corrected(const MonotoneFunction& lambda, const KernelSpec& kernel,
                         std::size_t n, double b, double t) {
    return gn_with_branch(lambda, kernel, n, b, t, true);
}

namespace {

// Squared L2 norm of the boundary-corrected kernel at position t over its
// effective support; equals int k^2 = D^2 on [b, 1-b] and captures the
// psi-inflated variance of the corrected estimator in the boundary zones.
double corrected_norm_sq(const KernelSpec& kernel, double t, double b) {
    if (t >= b && t <= 1.0 - b) return kernel_Dsq(kernel);
    double psi1, psi2s;
    double ylo = -1.0, yhi = 1.0;
    if (t < b) {
        const BoundaryCoeffs c = boundary_coeffs(kernel, t / b);
        psi1 = c.psi1;
        psi2s = c.psi2;
        yhi = t / b;
    } else {
        const BoundaryCoeffs c = boundary_coeffs(kernel, (1.0 - t) / b);
        psi1 = c.psi1;
        psi2s = -c.psi2;
        ylo = -(1.0 - t) / b;
    }
    return integrate_gl(
        [&](double y) {
            const double v = (psi1 + psi2s * y) * kernel.k(y);
            return v * v;
        },
        ylo, yhi, kLegendreConv);
}

}  // namespace

double centering_constant_on(const ModelSpec& model, const WeightMeasure& weight,
                             const KernelSpec& kernel, double p, std::size_t n,
                             double b, double a1, double a2, std::size_t node_scale) {
    if (p < 1.0) throw std::invalid_argument("centering_constant: p must be >= 1");
    return simpson(
        [&](double t) {
            const double conv = smoothed_mean(model.lambda, kernel, b, t, true);
            const double g =
                std::sqrt(static_cast<double>(n) * b) * (conv - model.lambda(t));
            // exact scaled second moment of the estimator: the empirical CDF
            // contributes the centered -b (int k lambda)^2 term that the
            // plain Gaussian-scale form omits (O(b), asymptotically void)
            double ssq = model.Lprime(t) * corrected_norm_sq(kernel, t, b);
            if (model.kind == ModelKind::density) ssq -= b * conv * conv;
            const double a = std::sqrt(std::max(ssq, 0.0));
            return abs_moment(g, a, p, node_scale) * weight(t);
        },
        a1, a2, odd_nodes(kSimpsonT, node_scale));
}

double centering_constant(const ModelSpec& model, const WeightMeasure& weight,
                          const KernelSpec& kernel, double p, std::size_t n, double b,
                          CenteringVariant variant) {
    if (variant == CenteringVariant::limit) {
        const double Dp = std::pow(kernel_Dsq(kernel), 0.5 * p);
        const double lint = simpson(
            [&](double t) { return std::pow(model.Lprime(t), 0.5 * p) * weight(t); },
            0.0, 1.0, kSimpsonT);
        return normal_abs_moment(p) * Dp * lint;
    }
    if (variant == CenteringVariant::truncated)
        return centering_constant_on(model, weight, kernel, p, n, b, b, 1.0 - b);
    return centering_constant_on(model, weight, kernel, p, n, b, 0.0, 1.0);
}

double sigma1_constant(const KernelSpec& kernel, double p, std::size_t node_scale) {
    if (p < 1.0) throw std::invalid_argument("sigma1_constant: p must be >= 1");
    const double e1 = abs_moment(0.0, 1.0, p, node_scale);
    const double indep = e1 * e1;
    return integrate_gl(
        [&](double s) {
            const double rho = autocorrelation_r(kernel, s);
            if (rho == 0.0) return 0.0;
            return pair_abs_moment(0.0, 1.0, rho, p, node_scale) - indep;
        },
        -2.0, 2.0, kLegendreSigma1 * node_scale);
}

double variance_sigma2(const ModelSpec& model, const WeightMeasure& weight,
                       const KernelSpec& kernel, double p, std::size_t node_scale) {
    const double s1 = sigma1_constant(kernel, p, node_scale);
    const double Dsq = kernel_Dsq(kernel);
    const double lint = simpson(
        [&](double u) {
            const double w = weight(u);
            return std::pow(model.Lprime(u), p) * w * w;
        },
        0.0, 1.0, odd_nodes(kSimpsonT, node_scale));
    return s1 * std::pow(Dsq, p) * lint;
}

ThetaConstants variance_theta(const ModelSpec& model, const WeightMeasure& weight,
                              const KernelSpec& kernel, double p, double C0,
                              std::size_t node_scale) {
    if (p < 1.0) throw std::invalid_argument("variance_theta: p must be >= 1");
    if (!(C0 > 0.0)) throw std::invalid_argument("variance_theta: C0 must be > 0");
    const double Dsq = kernel_Dsq(kernel);
    const double D = std::sqrt(Dsq);
    const double ky2 = kernel.K2(1.0);

    // r(s) at the s-quadrature nodes, shared across u
    const std::size_t ns = kLegendreS * node_scale;
    const QuadRule& gl = gauss_legendre(ns);
    std::vector<double> sweight(ns), rho(ns);
    for (std::size_t j = 0; j < ns; ++j) {
        sweight[j] = 2.0 * gl.weights[j];
        rho[j] = autocorrelation_r(kernel, 2.0 * gl.nodes[j]);
    }

    // |g(u)^2 + g(u)(x+y) sqrt(L') D + D^2 L' x y|^p factorizes as
    // |A(x)|^p |A(y)|^p with A(x) = g(u) + sqrt(L'(u)) D x.
    auto theta2_integrand = [&](double u) {
        const double g = 0.5 * C0 * model.lambda.deriv2(u) * ky2;
        const double a = std::sqrt(model.Lprime(u)) * D;
        const double ind = abs_moment(g, a, p, node_scale);
        const double indep = ind * ind;
        double sint = 0.0;
        for (std::size_t j = 0; j < ns; ++j) {
            if (rho[j] == 0.0) continue;
            sint += sweight[j] * (pair_abs_moment(g, a, rho[j], p, node_scale) - indep);
        }
        const double w = weight(u);
        return w * w * sint;
    };
    ThetaConstants out{};
    out.theta2 = simpson(theta2_integrand, 0.0, 1.0, odd_nodes(kSimpsonU, node_scale));

    out.theta1 = simpson(
        [&](double t) {
            const double g = 0.5 * C0 * model.lambda.deriv2(t) * ky2;
            const double sqL = std::sqrt(model.Lprime(t));
            return signed_abs_moment(g, sqL * D, p, node_scale) * sqL * weight(t);
        },
        0.0, 1.0, odd_nodes(kSimpsonU, node_scale));

    const double L1 = simpson(model.Lprime, 0.0, 1.0, kSimpsonT);
    out.theta_tilde2 = out.theta2 - out.theta1 * out.theta1 / (Dsq * L1);
    return out;
}

double c1_value(const ModelSpec& model, double t) {
    const double lp = model.lambda.deriv1(t);
    const double Lp = model.Lprime(t);
    if (!(std::fabs(lp) > 0.0))
        throw std::domain_error("c1_value: lambda' vanishes");
    return std::cbrt(std::fabs(lp / (2.0 * Lp * Lp)));
}

double c1_prime(const ModelSpec& model, double t) {
    // c1 = |h|^{1/3}, h = lambda' / (2 L'^2)
    const double lp = model.lambda.deriv1(t);
    const double lpp = model.lambda.deriv2(t);
    const double Lp = model.Lprime(t);
    const double Lpp = model.Lsecond(t);
    if (!(std::fabs(lp) > 0.0))
        throw std::domain_error("c1_prime: lambda' vanishes");
    const double h = lp / (2.0 * Lp * Lp);
    const double hp = lpp / (2.0 * Lp * Lp) - lp * Lpp / (Lp * Lp * Lp);
    const double c1 = std::cbrt(std::fabs(h));
    return (1.0 / 3.0) * c1 * hp / h;
}

double alpha0(const ModelSpec& model, const WeightMeasure& weight, double p) {
    if (p < 1.0) throw std::invalid_argument("alpha0: p must be >= 1");
    const double val = simpson(
        [&](double t) {
            const double c1 = c1_value(model, t);
            return abs_pow(c1_prime(model, t) / (c1 * c1), p) * weight(t);
        },
        0.0, 1.0, kSimpsonT);
    return std::pow(val, 1.0 / p);
}

double standardize(double raw_error, double p, std::size_t n, double b,
                   const AsymptoticConstants& constants) {
    if (!(constants.scale_variance > 0.0))
        throw std::invalid_argument("standardize: missing variance for the regime");
    const double nb = static_cast<double>(n) * b;
    return (std::pow(nb, 0.5 * p) * raw_error - constants.m_center) /
           std::sqrt(b * constants.scale_variance);
}

AsymptoticConstants compute_constants(const ModelSpec& model,
                                      const WeightMeasure& weight,
                                      const KernelSpec& kernel, double p,
                                      std::size_t n, double b, Regime regime,
                                      double a1, double a2) {
    AsymptoticConstants c;
    c.p = p;
    c.regime = regime;
    c.embedding = model.embedding;
    c.Dsq = kernel_Dsq(kernel);
    c.sigma1 = sigma1_constant(kernel, p);
    c.sigma2 = variance_sigma2(model, weight, kernel, p);
    c.m_center = centering_constant_on(model, weight, kernel, p, n, b, a1, a2);
    if (regime == Regime::fixedband) {
        c.C0 = std::sqrt(static_cast<double>(n) * std::pow(b, 5));
        const ThetaConstants th = variance_theta(model, weight, kernel, p, c.C0);
        c.theta2 = th.theta2;
        c.theta1 = th.theta1;
        c.theta_tilde2 = th.theta_tilde2;
        c.scale_variance =
            model.embedding == Embedding::brownian_motion ? c.theta2 : c.theta_tilde2;
    } else {
        c.scale_variance = c.sigma2;
    }
    return c;
}

}  // namespace smoothiso
