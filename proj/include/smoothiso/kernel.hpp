#pragma once

#include <functional>
#include <string>
#include <vector>

namespace smoothiso {

// Smoothing kernel on [-1,1] with closed-form antiderivatives
//   K0(s) = int_{-1}^{s} k,  K1(s) = int_{-1}^{s} u k,  K2(s) = int_{-1}^{s} u^2 k.
struct KernelSpec {
    std::string name;
    std::function<double(double)> k;
    std::function<double(double)> kprime;
    std::function<double(double)> K0;
    std::function<double(double)> K1;
    std::function<double(double)> K2;
};

// (35/32)(1-u^2)^3: vanishing value and first derivative at the support edges.
const KernelSpec& triweight_kernel();
// (15/16)(1-u^2)^2.
const KernelSpec& biweight_kernel();

// Lookup by name ("triweight", "biweight"); unknown name raises.
const KernelSpec& kernel_by_name(const std::string& name);

// Coefficients (psi1, psi2) of the boundary correction at relative
// position s in [0,1]:
//   psi1 K0(s) + psi2 K1(s) = 1,  psi1 K1(s) + psi2 K2(s) = 0.
struct BoundaryCoeffs {
    double psi1;
    double psi2;
};
BoundaryCoeffs boundary_coeffs(const KernelSpec& kernel, double s);

// Boundary-corrected kernel k^{(x)}(u) for bandwidth b: three branches
// according to x in [0,b), [b,1-b], (1-b,1].
double boundary_kernel_value(const KernelSpec& kernel, double x, double b, double u);

// D^2 = int k^2.
double kernel_Dsq(const KernelSpec& kernel);

// r(s) = int k(z) k(s+z) dz / int k^2; zero for |s| >= 2.
double autocorrelation_r(const KernelSpec& kernel, double s);

}  // namespace smoothiso
