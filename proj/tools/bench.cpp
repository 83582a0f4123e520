// Benchmark: serial reference loop vs OpenMP replication engine on the
// same workloads, verifying identical outputs while timing both.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "smoothiso/core.hpp"
#include "smoothiso/mc.hpp"
#include "smoothiso/montest.hpp"
#include "smoothiso/parallel.hpp"
#include "smoothiso/scenario.hpp"

using namespace smoothiso;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds_since(t0);
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace

int main() {
    const int hw = resolve_workers(0);
    std::printf("workers for parallel runs: %d\n", hw);

    {
        const Scenario sc = scenario_by_name("linear-regression");
        CltConfig cfg;
        cfg.model = sc.model;
        cfg.estimator = EstimatorKind::kernel_corrected;
        cfg.p = 2.0;
        cfg.n = 2000;
        cfg.rule = sc.rule;
        cfg.weight = sc.weight;
        cfg.M = 60;
        cfg.seed = 17;

        CltReport serial, parallel;
        cfg.workers = 1;
        const double ts = timed([&] { serial = clt_experiment(cfg); });
        cfg.workers = hw;
        const double tp = timed([&] { parallel = clt_experiment(cfg); });
        std::printf("clt (n=2000, M=60):      serial %.2fs  parallel %.2fs  speedup %.2fx  identical=%s\n",
                    ts, tp, ts / tp, same(serial.z_values, parallel.z_values) ? "yes" : "NO");
    }

    {
        std::vector<double> serial_rates, parallel_rates;
        TnOptions opts;
        const double ts = timed([&] {
            serial_rates.push_back(
                power_study("lambda_a", {{"a", 0.45}}, 100, 0.05, 0.1, 40, 100, 0.05,
                            99, opts, 1)
                    .rejection_rate);
        });
        const double tp = timed([&] {
            parallel_rates.push_back(
                power_study("lambda_a", {{"a", 0.45}}, 100, 0.05, 0.1, 40, 100, 0.05,
                            99, opts, hw)
                    .rejection_rate);
        });
        std::printf("power (N=40, B=100):     serial %.2fs  parallel %.2fs  speedup %.2fx  identical=%s\n",
                    ts, tp, ts / tp,
                    same(serial_rates, parallel_rates) ? "yes" : "NO");
    }

    {
        ChernoffGapSample serial, parallel;
        const double ts =
            timed([&] { serial = chernoff_gap_sample(4.0, 5e-4, 400, 5, 1); });
        const double tp =
            timed([&] { parallel = chernoff_gap_sample(4.0, 5e-4, 400, 5, hw); });
        std::printf("chernoff (M=400):        serial %.2fs  parallel %.2fs  speedup %.2fx  identical=%s\n",
                    ts, tp, ts / tp, same(serial.draws, parallel.draws) ? "yes" : "NO");
    }
    return 0;
}
