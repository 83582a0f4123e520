#include "smoothiso/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "smoothiso/quadrature.hpp"

namespace smoothiso {

namespace {

double clamp_support(double s) { return s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s); }

KernelSpec make_triweight() {
    KernelSpec ks;
    ks.name = "triweight";
    ks.k = [](double u) {
        if (u < -1.0 || u > 1.0) return 0.0;
        const double w = 1.0 - u * u;
        return (35.0 / 32.0) * w * w * w;
    };
    ks.kprime = [](double u) {
        if (u < -1.0 || u > 1.0) return 0.0;
        const double w = 1.0 - u * u;
        return -(105.0 / 16.0) * u * w * w;
    };
    ks.K0 = [](double s) {
        s = clamp_support(s);
        auto F = [](double u) {
            return u - u * u * u + 0.6 * std::pow(u, 5) - std::pow(u, 7) / 7.0;
        };
        return (35.0 / 32.0) * (F(s) - F(-1.0));
    };
    ks.K1 = [](double s) {
        s = clamp_support(s);
        const double w = 1.0 - s * s;
        return -(35.0 / 256.0) * w * w * w * w;
    };
    ks.K2 = [](double s) {
        s = clamp_support(s);
        auto F = [](double u) {
            return std::pow(u, 3) / 3.0 - 0.6 * std::pow(u, 5) +
                   (3.0 / 7.0) * std::pow(u, 7) - std::pow(u, 9) / 9.0;
        };
        return (35.0 / 32.0) * (F(s) - F(-1.0));
    };
    return ks;
}

KernelSpec make_biweight() {
    KernelSpec ks;
    ks.name = "biweight";
    ks.k = [](double u) {
        if (u < -1.0 || u > 1.0) return 0.0;
        const double w = 1.0 - u * u;
        return (15.0 / 16.0) * w * w;
    };
    ks.kprime = [](double u) {
        if (u < -1.0 || u > 1.0) return 0.0;
        return -(15.0 / 4.0) * u * (1.0 - u * u);
    };
    ks.K0 = [](double s) {
        s = clamp_support(s);
        auto F = [](double u) {
            return u - 2.0 * u * u * u / 3.0 + std::pow(u, 5) / 5.0;
        };
        return (15.0 / 16.0) * (F(s) - F(-1.0));
    };
    ks.K1 = [](double s) {
        s = clamp_support(s);
        const double w = 1.0 - s * s;
        return -(5.0 / 32.0) * w * w * w;
    };
    ks.K2 = [](double s) {
        s = clamp_support(s);
        auto F = [](double u) {
            return std::pow(u, 3) / 3.0 - 0.4 * std::pow(u, 5) + std::pow(u, 7) / 7.0;
        };
        return (15.0 / 16.0) * (F(s) - F(-1.0));
    };
    return ks;
}

}  // namespace

const KernelSpec& triweight_kernel() {
    static const KernelSpec ks = make_triweight();
    return ks;
}

const KernelSpec& biweight_kernel() {
    static const KernelSpec ks = make_biweight();
    return ks;
}

const KernelSpec& kernel_by_name(const std::string& name) {
    if (name == "triweight") return triweight_kernel();
    if (name == "biweight") return biweight_kernel();
    throw std::invalid_argument("kernel_by_name: unknown kernel '" + name + "'");
}

BoundaryCoeffs boundary_coeffs(const KernelSpec& kernel, double s) {
    if (s < 0.0 || s > 1.0)
        throw std::invalid_argument("boundary_coeffs: s must be in [0,1]");
    const double a = kernel.K0(s), b = kernel.K1(s), c = kernel.K2(s);
    const double det = a * c - b * b;
    if (!(det > 1e-14))
        throw std::runtime_error("boundary_coeffs: singular moment system");
    return BoundaryCoeffs{c / det, -b / det};
}

double boundary_kernel_value(const KernelSpec& kernel, double x, double b, double u) {
    if (!(b > 0.0 && b < 0.5))
        throw std::invalid_argument("boundary_kernel_value: b must be in (0, 1/2)");
    if (x >= b && x <= 1.0 - b) return kernel.k(u);
    if (x < b) {
        const BoundaryCoeffs c = boundary_coeffs(kernel, x / b);
        return (c.psi1 + c.psi2 * u) * kernel.k(u);
    }
    const BoundaryCoeffs c = boundary_coeffs(kernel, (1.0 - x) / b);
    return (c.psi1 - c.psi2 * u) * kernel.k(u);
}

double kernel_Dsq(const KernelSpec& kernel) {
    return integrate_gl([&](double u) { const double v = kernel.k(u); return v * v; },
                        -1.0, 1.0, 256);
}

double autocorrelation_r(const KernelSpec& kernel, double s) {
    const double lo = std::max(-1.0, -1.0 - s);
    const double hi = std::min(1.0, 1.0 - s);
    if (hi <= lo) return 0.0;
    const double num = integrate_gl(
        [&](double z) { return kernel.k(z) * kernel.k(s + z); }, lo, hi, 256);
    return num / kernel_Dsq(kernel);
}

}  // namespace smoothiso
