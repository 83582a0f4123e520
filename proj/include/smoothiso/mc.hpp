#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smoothiso/asympt.hpp"
#include "smoothiso/core.hpp"
#include "smoothiso/estimators.hpp"

namespace smoothiso {

// b = scale * n^{-exponent}; exponent 0 freezes the bandwidth.
struct BandwidthRule {
    double scale = 1.0;
    double exponent = 0.2;

    double bandwidth(std::size_t n) const;
    // n b^5 -> 0 iff exponent > 1/5
    Regime regime() const;
};

enum class EstimatorKind { kernel, kernel_corrected, sg, gs };

std::string estimator_name(EstimatorKind e);
EstimatorKind estimator_from_name(const std::string& name);

struct CltConfig {
    ModelSpec model;
    EstimatorKind estimator = EstimatorKind::kernel_corrected;
    double p = 2.0;
    std::size_t n = 1000;
    BandwidthRule rule;
    WeightMeasure weight;
    const KernelSpec* kernel = nullptr;  // null: triweight
    std::size_t M = 100;
    std::uint64_t seed = 1;
    std::size_t rep_offset = 0;  // replication indices are rep_offset..rep_offset+M-1
    double gamma = 0.8;          // gs only
    int workers = 0;             // <= 0: env/hardware default
};

struct CltReport {
    std::string estimator;
    double p = 2.0;
    std::size_t n = 0;
    double b = 0.0;
    std::size_t M = 0;
    std::uint64_t seed = 0;
    std::string regime;
    double interval_lo = 0.0;
    double interval_hi = 1.0;
    AsymptoticConstants constants;
    std::vector<double> z_values;
    std::vector<double> z_values_alt;  // theta^2 standardization (bridge, fixed band)
    double mean = 0.0;
    double variance = 0.0;
    double ks_distance = 0.0;

    std::string to_json() const;
    void write_z_csv(std::ostream& os) const;
};

// One CLT validation experiment: M replications of simulate -> estimate ->
// L_p error on the estimator's interval -> standardize.
CltReport clt_experiment(const CltConfig& config);

double sample_mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);
// sup distance of the empirical CDF to the standard normal CDF
double ks_normal_distance(std::vector<double> v);

struct SgVsKernelResult {
    double alpha0 = 0.0;
    std::vector<double> statistic_draws;  // n^{2/3} (int |SG - kernel|^p dmu)^{1/p}
    std::vector<double> reference_draws;  // alpha0 * [D_R Z](0)
    double qq_correlation = 0.0;

    std::string to_json() const;
};

// Empirical check of the SG-vs-kernel limit distribution.
SgVsKernelResult sg_vs_kernel_experiment(const ModelSpec& model, double p,
                                         std::size_t n, double b,
                                         const WeightMeasure& weight, std::size_t M,
                                         std::uint64_t seed, int workers = 0,
                                         const KernelSpec* kernel = nullptr);

struct ChernoffGapSample {
    double c = 4.0;
    double step = 5e-4;
    std::vector<double> draws;

    std::string to_json() const;
};

// Draws of [D_R Z](0), Z(t) = W(t) - t^2, W two-sided Brownian motion
// simulated by Gaussian increments on [-c, c].
ChernoffGapSample chernoff_gap_sample(double c, double step, std::size_t M,
                                      std::uint64_t seed, int workers = 0,
                                      std::size_t rep_offset = 0);

struct BoundaryRow {
    std::size_t n;
    double b;
    double uncorrected;  // MC mean of (nb)^{p/2} int_0^b |kernel est - lambda|^p dmu
    double corrected;
};

struct BoundaryTable {
    double p = 1.0;
    std::vector<BoundaryRow> rows;

    std::string to_json() const;
    void write_csv(std::ostream& os) const;
};

BoundaryTable boundary_blowup_experiment(const ModelSpec& model, double p,
                                         const std::vector<std::size_t>& n_ladder,
                                         const BandwidthRule& rule,
                                         const WeightMeasure& weight, std::size_t M,
                                         std::uint64_t seed, int workers = 0,
                                         const KernelSpec* kernel = nullptr);

}  // namespace smoothiso
