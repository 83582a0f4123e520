#include "smoothiso/lcm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smoothiso {

namespace {

// cross((b - a), (c - a)); > 0 means c lies above the line through a, b.
double cross(double ax, double ay, double bx, double by, double cx, double cy) {
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

}  // namespace

std::vector<std::size_t> lcm_knot_indices(const std::vector<double>& ts,
                                          const std::vector<double>& vs) {
    const std::size_t n = ts.size();
    if (n < 2 || vs.size() != n)
        throw std::invalid_argument("least_concave_majorant: need >= 2 matching points");
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !(ts[i] > ts[i - 1]))
            throw std::invalid_argument("least_concave_majorant: t must be strictly ascending");
        scale = std::max(scale, std::fabs(vs[i]));
    }
    scale = std::max(scale, ts.back() - ts.front());
    const double tol = 1e-14 * scale;

    std::vector<std::size_t> hull;
    hull.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // pop while the middle point is below or on the chord (upper hull,
        // collinear points dropped)
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull.back();
            if (cross(ts[a], vs[a], ts[b], vs[b], ts[i], vs[i]) >= -tol)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    return hull;
}

PiecewiseLinear least_concave_majorant(const std::vector<double>& ts,
                                       const std::vector<double>& vs) {
    const std::vector<std::size_t> hull = lcm_knot_indices(ts, vs);
    std::vector<double> knots(hull.size()), values(hull.size());
    for (std::size_t j = 0; j < hull.size(); ++j) {
        knots[j] = ts[hull[j]];
        values[j] = vs[hull[j]];
    }
    return PiecewiseLinear(std::move(knots), std::move(values));
}

StepFunction grenander_slopes(const PiecewiseLinear& pl) {
    const std::size_t m = pl.segments();
    std::vector<double> slopes(m);
    for (std::size_t j = 0; j < m; ++j) {
        slopes[j] = pl.slope_at(j);
        if (j > 0 && slopes[j] > slopes[j - 1] + 1e-12 * (1.0 + std::fabs(slopes[j])))
            throw std::invalid_argument("grenander_slopes: input is not concave");
    }
    std::vector<double> breaks(pl.knots().begin() + 1, pl.knots().end());
    // left-continuous: slope_j on (knot_j, knot_{j+1}]; at the first knot the
    // first segment's slope applies
    return StepFunction(std::move(breaks), std::move(slopes), slopes.front(),
                        StepFunction::Continuity::left);
}

double concave_gap(const std::vector<double>& ts, const std::vector<double>& vs,
                   double t0) {
    if (ts.empty() || t0 < ts.front() || t0 > ts.back())
        throw std::out_of_range("concave_gap: t0 outside the point range");
    const PiecewiseLinear hull = least_concave_majorant(ts, vs);
    const PiecewiseLinear data(ts, vs);
    const double gap = hull(t0) - data(t0);
    return gap < 0.0 ? 0.0 : gap;
}

}  // namespace smoothiso
