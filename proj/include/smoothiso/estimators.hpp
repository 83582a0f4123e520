#pragma once

#include <vector>

#include "smoothiso/core.hpp"
#include "smoothiso/kernel.hpp"

namespace smoothiso {

struct SampledFunction {
    std::vector<double> grid;
    std::vector<double> values;
};

// Standard / boundary-corrected kernel estimator at t: the exact sum
// sum_i k_b^{(t)}(t - u_i) jump_i over the jumps of cumul.
// corrected = false requires t in [b, 1-b].
double kernel_estimator(const StepFunction& cumul, double b, const KernelSpec& kernel,
                        double t, bool corrected);

// Same sum with the plain kernel and no domain restriction; the boundary
// zones are where this is inconsistent.
double kernel_estimator_raw(const StepFunction& cumul, double b,
                            const KernelSpec& kernel, double t);

// Smoothed cumulative Lambda_n^s(t) = int k_b^{(t)}(t-u) Lambda_n(u) du,
// summed in closed form over the constancy cells of cumul.
double smooth_cumulative(const StepFunction& cumul, double b, const KernelSpec& kernel,
                         double t);

// Smoothed Grenander-type estimator: boundary-corrected smoothing of the
// derivative measure of the least concave majorant of cumul (hull anchored
// at (0,0) and (1, cumul(1))).
SampledFunction smoothed_grenander(const StepFunction& cumul, double b,
                                   const KernelSpec& kernel,
                                   const std::vector<double>& grid);
double smoothed_grenander_at(const PiecewiseLinear& hull, double b,
                             const KernelSpec& kernel, double t);

// Hull of cumul with endpoints (0,0), (1, cumul(1)) prepended/appended.
PiecewiseLinear cumulative_hull(const StepFunction& cumul);

struct GsEstimate {
    SampledFunction fn;
    double clt_lo = 0.0;  // [b^gamma, 1 - b^gamma]: where the estimator
    double clt_hi = 1.0;  // coincides with the kernel estimate asymptotically
};

// Isotonized kernel estimator: left-hand slopes of the least concave
// majorant of the smoothed cumulative, sampled at step b/50. On interior
// cells where the hull touches adjacent samples the exact derivative of
// Lambda_n^s (the standard kernel estimator) is returned.
GsEstimate isotonized_kernel(const StepFunction& cumul, double b,
                             const KernelSpec& kernel,
                             const std::vector<double>& grid, double gamma);

// True when the standard kernel estimate is nonincreasing at npts uniform
// points of [lo, hi] (the coincidence event of the GS estimator).
bool kernel_estimate_decreasing(const StepFunction& cumul, double b,
                                const KernelSpec& kernel, double lo, double hi,
                                std::size_t npts);

void write_estimate_csv(std::ostream& os, const SampledFunction& fn);

}  // namespace smoothiso
