#pragma once

#include <utility>
#include <vector>

#include "smoothiso/core.hpp"

namespace smoothiso {

// Indices of the least-concave-majorant knots (monotone chain, O(n)).
std::vector<std::size_t> lcm_knot_indices(const std::vector<double>& ts,
                                          const std::vector<double>& vs);

// Least concave majorant of (t,v) points (strictly ascending t), one
// monotone-chain pass, O(n). Output knots are a subsequence of the input,
// collinear interior points dropped, slopes nonincreasing.
PiecewiseLinear least_concave_majorant(const std::vector<double>& ts,
                                       const std::vector<double>& vs);

// Left-hand slopes of a concave piecewise-linear curve: the step function
// equal to the segment slope on each (knot_j, knot_{j+1}], extended by
// continuity at the first knot.
StepFunction grenander_slopes(const PiecewiseLinear& pl);

// (CM value at t0) - (interpolated input value at t0); >= 0.
double concave_gap(const std::vector<double>& ts, const std::vector<double>& vs,
                   double t0);

}  // namespace smoothiso
