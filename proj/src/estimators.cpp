#include "smoothiso/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "smoothiso/lcm.hpp"

namespace smoothiso {

namespace {

// k^{(t)}(y) = (psi1 + psi2s * y) k(y); interior branch is (1, 0).
struct Branch {
    double psi1;
    double psi2s;
};

Branch branch_at(const KernelSpec& kernel, double t, double b, bool corrected) {
    if (!corrected || (t >= b && t <= 1.0 - b)) return Branch{1.0, 0.0};
    if (t < b) {
        const BoundaryCoeffs c = boundary_coeffs(kernel, t / b);
        return Branch{c.psi1, c.psi2};
    }
    const BoundaryCoeffs c = boundary_coeffs(kernel, (1.0 - t) / b);
    return Branch{c.psi1, -c.psi2};
}

double branch_kernel(const KernelSpec& kernel, const Branch& br, double y) {
    return (br.psi1 + br.psi2s * y) * kernel.k(y);
}

// Antiderivative of k^{(t)} in the rescaled variable y.
double branch_antideriv(const KernelSpec& kernel, const Branch& br, double y) {
    return br.psi1 * kernel.K0(y) + br.psi2s * kernel.K1(y);
}

void check_bandwidth(double b) {
    if (!(b > 0.0 && b < 0.5))
        throw std::invalid_argument("bandwidth must be in (0, 1/2)");
}

double jump_sum(const StepFunction& cumul, double b, const KernelSpec& kernel,
                double t, const Branch& br) {
    const std::vector<double>& breaks = cumul.breakpoints();
    const auto first =
        std::lower_bound(breaks.begin(), breaks.end(), t - b);
    const auto last = std::upper_bound(breaks.begin(), breaks.end(), t + b);
    double acc = 0.0;
    for (auto it = first; it != last; ++it) {
        const std::size_t j = static_cast<std::size_t>(it - breaks.begin());
        const double y = (t - *it) / b;
        acc += branch_kernel(kernel, br, y) * cumul.jump(j);
    }
    return acc / b;
}

}  // namespace

double kernel_estimator(const StepFunction& cumul, double b, const KernelSpec& kernel,
                        double t, bool corrected) {
    check_bandwidth(b);
    if (!corrected && (t < b || t > 1.0 - b))
        throw std::out_of_range(
            "kernel_estimator: t in the boundary region requires corrected=true");
    if (t < 0.0 || t > 1.0)
        throw std::out_of_range("kernel_estimator: t outside [0,1]");
    return jump_sum(cumul, b, kernel, t, branch_at(kernel, t, b, corrected));
}

double kernel_estimator_raw(const StepFunction& cumul, double b,
                            const KernelSpec& kernel, double t) {
    check_bandwidth(b);
    return jump_sum(cumul, b, kernel, t, Branch{1.0, 0.0});
}

double smooth_cumulative(const StepFunction& cumul, double b, const KernelSpec& kernel,
                         double t) {
    check_bandwidth(b);
    if (t < 0.0 || t > 1.0)
        throw std::out_of_range("smooth_cumulative: t outside [0,1]");
    const Branch br = branch_at(kernel, t, b, true);
    const double lo = std::max(0.0, t - b);
    const double hi = std::min(1.0, t + b);

    // integrate cell by cell; cell [u0,u1] maps to y in [(t-u1)/b, (t-u0)/b]
    const std::vector<double>& breaks = cumul.breakpoints();
    const std::vector<double>& values = cumul.values();
    double acc = 0.0;
    double u0 = lo;
    double v = cumul(lo);
    auto it = std::upper_bound(breaks.begin(), breaks.end(), lo);
    for (; it != breaks.end() && *it < hi; ++it) {
        const double u1 = *it;
        acc += v * (branch_antideriv(kernel, br, (t - u0) / b) -
                    branch_antideriv(kernel, br, (t - u1) / b));
        u0 = u1;
        v = values[static_cast<std::size_t>(it - breaks.begin())];
    }
    acc += v * (branch_antideriv(kernel, br, (t - u0) / b) -
                branch_antideriv(kernel, br, (t - hi) / b));
    return acc;
}

PiecewiseLinear cumulative_hull(const StepFunction& cumul) {
    const std::vector<double>& breaks = cumul.breakpoints();
    const std::vector<double>& values = cumul.values();
    std::vector<double> ts, vs;
    ts.reserve(breaks.size() + 2);
    vs.reserve(breaks.size() + 2);
    if (breaks.empty() || breaks.front() > 0.0) {
        ts.push_back(0.0);
        vs.push_back(cumul.initial_value());
    }
    ts.insert(ts.end(), breaks.begin(), breaks.end());
    vs.insert(vs.end(), values.begin(), values.end());
    if (ts.back() < 1.0) {
        ts.push_back(1.0);
        vs.push_back(values.empty() ? cumul.initial_value() : values.back());
    }
    return least_concave_majorant(ts, vs);
}

double smoothed_grenander_at(const PiecewiseLinear& hull, double b,
                             const KernelSpec& kernel, double t) {
    const Branch br = branch_at(kernel, t, b, true);
    const double lo = std::max(0.0, t - b);
    const double hi = std::min(1.0, t + b);
    const std::vector<double>& knots = hull.knots();

    // d(hull) has density slope_j on [knot_j, knot_{j+1}]
    auto it = std::upper_bound(knots.begin(), knots.end(), lo);
    std::size_t seg = (it == knots.begin())
                          ? 0
                          : static_cast<std::size_t>(it - knots.begin()) - 1;
    seg = std::min(seg, hull.segments() - 1);
    double acc = 0.0;
    double u0 = lo;
    while (u0 < hi && seg < hull.segments()) {
        const double u1 = std::min(hi, knots[seg + 1]);
        acc += hull.slope_at(seg) * (branch_antideriv(kernel, br, (t - u0) / b) -
                                     branch_antideriv(kernel, br, (t - u1) / b));
        u0 = u1;
        ++seg;
    }
    return acc;
}

SampledFunction smoothed_grenander(const StepFunction& cumul, double b,
                                   const KernelSpec& kernel,
                                   const std::vector<double>& grid) {
    check_bandwidth(b);
    const PiecewiseLinear hull = cumulative_hull(cumul);
    SampledFunction out;
    out.grid = grid;
    out.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.values[i] = smoothed_grenander_at(hull, b, kernel, grid[i]);
    return out;
}

GsEstimate isotonized_kernel(const StepFunction& cumul, double b,
                             const KernelSpec& kernel,
                             const std::vector<double>& grid, double gamma) {
    check_bandwidth(b);
    if (!(gamma > 0.5 && gamma < 1.0))
        throw std::invalid_argument("isotonized_kernel: gamma must be in (1/2, 1)");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] - grid[i - 1] > b / 10.0 + 1e-12)
            throw std::invalid_argument("isotonized_kernel: grid resolution must be <= b/10");

    // sample Lambda_n^s at step b/50
    const std::size_t m =
        static_cast<std::size_t>(std::ceil(50.0 / b));
    std::vector<double> ts(m + 1), vs(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        ts[i] = static_cast<double>(i) / static_cast<double>(m);
        vs[i] = smooth_cumulative(cumul, b, kernel, ts[i]);
    }
    const std::vector<std::size_t> hull = lcm_knot_indices(ts, vs);

    // hull segment j spans internal samples hull[j]..hull[j+1]; "touching"
    // segments (adjacent samples) mark zones where the majorant follows
    // Lambda_n^s itself and the left slope is its exact derivative
    GsEstimate out;
    out.fn.grid = grid;
    out.fn.values.resize(grid.size());
    out.clt_lo = std::pow(b, gamma);
    out.clt_hi = 1.0 - std::pow(b, gamma);

    std::size_t seg = 0;
    const std::size_t nseg = hull.size() - 1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        // left-hand slope: segment with knot_j < t <= knot_{j+1}
        while (seg + 1 < nseg && ts[hull[seg + 1]] < t) ++seg;
        const std::size_t s = seg;
        const std::size_t a = hull[s], c = hull[s + 1];
        const bool touching = (c == a + 1);
        const bool interior = (t > b && t < 1.0 - b);
        bool neighbors_touch = touching;
        if (touching && s > 0) neighbors_touch &= (hull[s] == hull[s - 1] + 1);
        if (touching && s + 2 < hull.size()) neighbors_touch &= (hull[s + 2] == c + 1);
        if (touching && interior && neighbors_touch) {
            out.fn.values[i] = kernel_estimator(cumul, b, kernel, t, false);
        } else {
            out.fn.values[i] = (vs[c] - vs[a]) / (ts[c] - ts[a]);
        }
    }
    for (std::size_t i = 1; i < out.fn.values.size(); ++i)
        out.fn.values[i] = std::min(out.fn.values[i], out.fn.values[i - 1]);
    return out;
}

bool kernel_estimate_decreasing(const StepFunction& cumul, double b,
                                const KernelSpec& kernel, double lo, double hi,
                                std::size_t npts) {
    double prev = kernel_estimator(cumul, b, kernel, lo, true);
    for (std::size_t i = 1; i < npts; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(npts - 1);
        const double v = kernel_estimator(cumul, b, kernel, t, true);
        if (v > prev) return false;
        prev = v;
    }
    return true;
}

void write_estimate_csv(std::ostream& os, const SampledFunction& fn) {
    os << "t,value\n";
    os.precision(17);
    for (std::size_t i = 0; i < fn.grid.size(); ++i)
        os << fn.grid[i] << ',' << fn.values[i] << '\n';
}

}  // namespace smoothiso
