#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "smoothiso/rng.hpp"

namespace testing_helpers {

// Exhaustive minimal concave majorant: gift wrapping, from each knot scan
// every remaining point for the maximal chord slope (farthest point wins
// slope ties, dropping collinear knots). Independent of the monotone chain.
inline std::pair<std::vector<double>, std::vector<double>> lcm_bruteforce(
    const std::vector<double>& ts, const std::vector<double>& vs) {
    std::vector<double> kt{ts.front()}, kv{vs.front()};
    std::size_t i = 0;
    while (i + 1 < ts.size()) {
        std::size_t best = i + 1;
        double best_slope = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]);
        for (std::size_t j = i + 2; j < ts.size(); ++j) {
            const double s = (vs[j] - vs[i]) / (ts[j] - ts[i]);
            if (s >= best_slope) {
                best = j;
                best_slope = s;
            }
        }
        kt.push_back(ts[best]);
        kv.push_back(vs[best]);
        i = best;
    }
    return {kt, kv};
}

inline double uniform(std::uint64_t seed, std::uint64_t k) {
    return smoothiso::rng_u01(seed, smoothiso::stream::generic, k);
}

}  // namespace testing_helpers
