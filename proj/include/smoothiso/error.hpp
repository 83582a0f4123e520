#pragma once

#include "smoothiso/core.hpp"

namespace smoothiso {

// int_{a1}^{a2} |f - g|^p w dt, composite Simpson on 2049 uniform nodes
// (the integral itself, no p-th root).
double lp_error(const RealFn& f, const RealFn& g, double p, const WeightMeasure& weight,
                double a1, double a2);

// Weighted Hellinger distance (1/2 int (sqrt f - sqrt g)^2 dmu)^{1/2};
// f and g must be positive on the quadrature grid.
double hellinger(const RealFn& f, const RealFn& g, const WeightMeasure& weight);

}  // namespace smoothiso
