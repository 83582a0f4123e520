#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smoothiso/core.hpp"
#include "smoothiso/kernel.hpp"

namespace smoothiso {

// Noise scale from mean squared first differences:
// sqrt( sum (Y_{i+1} - Y_i)^2 / (2(n-1)) ).
double rice_sigma(const Sample& sample);

struct TnOptions {
    double p = 2.0;             // 2: L2 on [b,1-b]; 1: L1 on (0,1)
    std::size_t grid = 513;     // Simpson nodes
    const KernelSpec* kernel = nullptr;
};

// T_n = n^{2/3} ( int_I |SG - corrected kernel|^p dt )^{1/p},
// I = [b, 1-b] for p = 2, the whole interval for p = 1.
double statistic_Tn(const Sample& sample, double b, const TnOptions& opts = {});

struct TestOutcome {
    double Tn = 0.0;
    double critical_value = 0.0;
    double alpha = 0.05;
    bool reject = false;
    std::size_t B = 0;
    std::uint64_t seed = 0;

    std::string to_json() const;
};

// Bootstrap calibration: refit under the null (SG), resample Gaussian
// noise at the Rice scale, critical value = ceil((1-alpha)B)-th smallest
// bootstrap statistic.
TestOutcome bootstrap_test(const Sample& sample, double b, std::size_t B, double alpha,
                           std::uint64_t seed, const TnOptions& opts = {},
                           int workers = 1);

struct PowerResult {
    double rejection_rate = 0.0;
    std::vector<TestOutcome> outcomes;

    std::string to_json() const;
    // one row matching the power-table layout
    void write_csv_row(std::ostream& os, const std::string& scenario) const;
};

// N independent seeded trials of simulate -> bootstrap_test.
PowerResult power_study(const std::string& function_id,
                        const std::map<std::string, double>& params, std::size_t n,
                        double sigma, double b, std::size_t N, std::size_t B,
                        double alpha, std::uint64_t seed, const TnOptions& opts = {},
                        int workers = 0, std::size_t trial_offset = 0);

}  // namespace smoothiso
