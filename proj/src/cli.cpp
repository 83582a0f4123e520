#include "smoothiso/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smoothiso/asympt.hpp"
#include "smoothiso/core.hpp"
#include "smoothiso/error.hpp"
#include "smoothiso/estimators.hpp"
#include "smoothiso/mc.hpp"
#include "smoothiso/montest.hpp"
#include "smoothiso/parallel.hpp"
#include "smoothiso/rng.hpp"
#include "smoothiso/scenario.hpp"

namespace smoothiso {

namespace {

using ordered_json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON config file; flags override file values, file values override defaults.
class Config {
public:
    void load(const std::string& path, const std::set<std::string>& allowed) {
        std::ifstream is(path);
        if (!is) throw ConfigError("config file not found: " + path);
        try {
            is >> data_;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config parse failure: ") + e.what());
        }
        if (!data_.is_object()) throw ConfigError("config must be a JSON object");
        for (auto it = data_.begin(); it != data_.end(); ++it)
            if (allowed.find(it.key()) == allowed.end())
                throw ConfigError("unknown config key '" + it.key() + "'");
    }

    template <typename T>
    void apply(const std::string& key, T& var, bool flag_given) const {
        if (flag_given) return;
        auto it = data_.find(key);
        if (it == data_.end()) return;
        try {
            var = it->get<T>();
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' has the wrong type");
        }
    }

    bool has(const std::string& key) const { return data_.contains(key); }

private:
    nlohmann::json data_ = nlohmann::json::object();
};

std::uint64_t generate_seed() {
    std::random_device rd;
    const auto now = std::chrono::steady_clock::now().time_since_epoch().count();
    return mix64(static_cast<std::uint64_t>(rd()) ^
                 mix64(static_cast<std::uint64_t>(now)));
}

void write_output(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output path " + out_path);
    os << payload;
}

std::map<std::string, double> fn_params(double a, double sigma) {
    return {{"a", a}, {"sigma", sigma}};
}

std::pair<double, double> parse_interval(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw ConfigError("interval must be 'lo,hi', got '" + s + "'");
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

std::vector<std::size_t> parse_ladder(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(static_cast<std::size_t>(std::stoull(tok)));
    if (out.empty()) throw ConfigError("empty n ladder");
    return out;
}

void log_config(const std::string& cmd, const ordered_json& resolved) {
    std::cerr << "[smoothiso] " << cmd << " " << resolved.dump() << "\n";
}

Sample load_sample(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open sample file " + path);
    return read_sample_csv(is);
}

WeightMeasure weight_by_name(const std::string& name, double p) {
    if (name == "uniform") return uniform_weight();
    if (name == "boundary") return boundary_weight(p);
    throw ConfigError("unknown weight '" + name + "'");
}

// ---- subcommand handlers -------------------------------------------------

int cmd_estimate(const std::string& in, const std::string& method, double b,
                 const std::string& kernel_name, std::size_t grid_n, double gamma,
                 const std::string& out) {
    const Sample sample = load_sample(in);
    const KernelSpec& kernel = kernel_by_name(kernel_name);
    const StepFunction cumul = cumulative_step(sample, ModelKind::regression);
    const EstimatorKind kind = estimator_from_name(method);

    double lo = 0.0, hi = 1.0;
    if (kind == EstimatorKind::kernel) {
        lo = b;
        hi = 1.0 - b;
    }
    std::vector<double> grid(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                           static_cast<double>(grid_n - 1);

    SampledFunction fn;
    switch (kind) {
        case EstimatorKind::kernel:
        case EstimatorKind::kernel_corrected: {
            fn.grid = grid;
            fn.values.resize(grid_n);
            for (std::size_t i = 0; i < grid_n; ++i)
                fn.values[i] = kernel_estimator(cumul, b, kernel, grid[i],
                                                kind == EstimatorKind::kernel_corrected);
            break;
        }
        case EstimatorKind::sg:
            fn = smoothed_grenander(cumul, b, kernel, grid);
            break;
        case EstimatorKind::gs:
            fn = isotonized_kernel(cumul, b, kernel, grid, gamma).fn;
            break;
    }
    std::ostringstream os;
    write_estimate_csv(os, fn);
    write_output(out, os.str());
    return 0;
}

int cmd_errors(const std::string& in, const std::string& method, double b, double p,
               const std::string& fn_id, double a, double sigma,
               const std::string& weight_name, std::string interval, double gamma,
               const std::string& kernel_name, bool with_hellinger,
               const std::string& out) {
    const Sample sample = load_sample(in);
    const KernelSpec& kernel = kernel_by_name(kernel_name);
    const StepFunction cumul = cumulative_step(sample, ModelKind::regression);
    const MonotoneFunction lambda = builtin_function(fn_id, fn_params(a, sigma));
    const WeightMeasure weight = weight_by_name(weight_name, p);
    const EstimatorKind kind = estimator_from_name(method);

    double lo = 0.0, hi = 1.0;
    if (kind == EstimatorKind::kernel) {
        lo = b;
        hi = 1.0 - b;
    } else if (kind == EstimatorKind::gs) {
        lo = std::pow(b, gamma);
        hi = 1.0 - lo;
    }
    if (!interval.empty()) std::tie(lo, hi) = parse_interval(interval);

    RealFn est;
    PiecewiseLinear hull;
    GsEstimate gs;
    switch (kind) {
        case EstimatorKind::kernel:
            est = [&, b](double t) { return kernel_estimator(cumul, b, kernel, t, false); };
            break;
        case EstimatorKind::kernel_corrected:
            est = [&, b](double t) { return kernel_estimator(cumul, b, kernel, t, true); };
            break;
        case EstimatorKind::sg:
            hull = cumulative_hull(cumul);
            est = [&, b](double t) { return smoothed_grenander_at(hull, b, kernel, t); };
            break;
        case EstimatorKind::gs: {
            std::vector<double> grid(2049);
            for (std::size_t i = 0; i < grid.size(); ++i)
                grid[i] = lo + (hi - lo) * static_cast<double>(i) / 2048.0;
            gs = isotonized_kernel(cumul, b, kernel, grid, gamma);
            const SampledFunction& sf = gs.fn;
            est = [sf](double t) {
                auto it = std::lower_bound(sf.grid.begin(), sf.grid.end(), t - 1e-12);
                const std::size_t i = std::min<std::size_t>(
                    static_cast<std::size_t>(it - sf.grid.begin()),
                    sf.grid.size() - 1);
                return sf.values[i];
            };
            break;
        }
    }

    ordered_json j;
    j["method"] = method;
    j["p"] = p;
    j["b"] = b;
    j["interval"] = {lo, hi};
    j["lp_error"] = lp_error(est, lambda.eval, p, weight, lo, hi);
    if (with_hellinger) j["hellinger"] = hellinger(est, lambda.eval, weight);
    write_output(out, j.dump(2) + "\n");
    return 0;
}

int cmd_constants(const std::string& scenario_name, double p, std::size_t n, double b,
                  bool b_given, const std::string& out) {
    const Scenario sc = scenario_by_name(scenario_name);
    const KernelSpec& kernel = kernel_by_name(sc.kernel);
    if (!b_given) b = sc.rule.bandwidth(n);
    const double C0 = std::sqrt(static_cast<double>(n) * std::pow(b, 5));

    ordered_json j;
    j["sigma1"] = sigma1_constant(kernel, p);
    j["Dsq"] = kernel_Dsq(kernel);
    j["m_n"] = centering_constant(sc.model, sc.weight, kernel, p, n, b,
                                  CenteringVariant::full);
    j["m_c"] = centering_constant(sc.model, sc.weight, kernel, p, n, b,
                                  CenteringVariant::truncated);
    j["m_limit"] = centering_constant(sc.model, sc.weight, kernel, p, n, b,
                                      CenteringVariant::limit);
    j["sigma2"] = variance_sigma2(sc.model, sc.weight, kernel, p);
    const ThetaConstants th = variance_theta(sc.model, sc.weight, kernel, p, C0);
    j["theta2"] = th.theta2;
    j["theta1"] = th.theta1;
    j["theta_tilde2"] = th.theta_tilde2;
    j["alpha0"] = alpha0(sc.model, sc.weight, p);
    write_output(out, j.dump(2) + "\n");
    return 0;
}

int cmd_clt(const std::string& scenario_name, const std::string& estimator, double p,
            std::size_t n, std::size_t M, std::uint64_t seed, double b, bool b_given,
            double gamma, int workers, const std::string& out,
            const std::string& zcsv) {
    const Scenario sc = scenario_by_name(scenario_name);
    CltConfig cfg;
    cfg.model = sc.model;
    cfg.estimator = estimator_from_name(estimator);
    cfg.p = p;
    cfg.n = n;
    cfg.rule = sc.rule;
    if (b_given) cfg.rule = BandwidthRule{b, 0.0};
    cfg.weight = sc.weight;
    cfg.kernel = &kernel_by_name(sc.kernel);
    cfg.M = M;
    cfg.seed = seed;
    cfg.gamma = gamma;
    cfg.workers = workers;
    const CltReport report = clt_experiment(cfg);
    write_output(out, report.to_json());
    if (!zcsv.empty()) {
        std::ofstream os(zcsv, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open z CSV path " + zcsv);
        report.write_z_csv(os);
    }
    return 0;
}

int cmd_sgdist(const std::string& scenario_name, double p, std::size_t n,
               std::size_t M, std::uint64_t seed, double b, bool b_given, int workers,
               const std::string& out) {
    const Scenario sc = scenario_by_name(scenario_name);
    const double bw = b_given ? b : sc.rule.bandwidth(n);
    const SgVsKernelResult res =
        sg_vs_kernel_experiment(sc.model, p, n, bw, sc.weight, M, seed, workers,
                                &kernel_by_name(sc.kernel));
    write_output(out, res.to_json());
    return 0;
}

int cmd_boundary(const std::string& scenario_name, double p, const std::string& ladder,
                 std::size_t M, std::uint64_t seed, int workers,
                 const std::string& format, const std::string& out) {
    const Scenario sc = scenario_by_name(scenario_name);
    const BoundaryTable table = boundary_blowup_experiment(
        sc.model, p, parse_ladder(ladder), sc.rule, sc.weight, M, seed, workers,
        &kernel_by_name(sc.kernel));
    if (format == "json") {
        write_output(out, table.to_json());
    } else {
        std::ostringstream os;
        table.write_csv(os);
        write_output(out, os.str());
    }
    return 0;
}

int cmd_chernoff(double c, double step, std::size_t M, std::uint64_t seed, int workers,
                 const std::string& out) {
    const ChernoffGapSample gaps = chernoff_gap_sample(c, step, M, seed, workers);
    write_output(out, gaps.to_json());
    return 0;
}

int cmd_test(const std::string& in, double b, std::size_t B, double alpha,
             std::uint64_t seed, double p, std::size_t grid, int workers,
             const std::string& out) {
    const Sample sample = load_sample(in);
    TnOptions opts;
    opts.p = p;
    opts.grid = grid;
    const TestOutcome outcome =
        bootstrap_test(sample, b, B, alpha, seed, opts, resolve_workers(workers));
    write_output(out, outcome.to_json());
    return outcome.reject ? 10 : 0;
}

int cmd_power(const std::string& fn_id, double a, double sigma, std::size_t n,
              std::size_t N, std::size_t B, double alpha, double b, std::uint64_t seed,
              double p, int workers, const std::string& out) {
    TnOptions opts;
    opts.p = p;
    const PowerResult res = power_study(fn_id, fn_params(a, sigma), n, sigma, b, N, B,
                                        alpha, seed, opts, workers);
    std::ostringstream os;
    os << "fn,a,sigma,n,b,alpha,N,B,rate\n";
    os << fn_id << ',' << a << ',' << sigma << ',' << n << ',' << b << ',' << alpha
       << ',' << N << ',' << B << ',' << res.rejection_rate << '\n';
    write_output(out, os.str());
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    static const std::set<std::string> subcommands = {
        "estimate", "errors", "constants", "clt", "sgdist",
        "boundary", "chernoff", "test", "power"};

    std::string sub;
    for (const std::string& a : args)
        if (!a.empty() && a[0] != '-') {
            sub = a;
            break;
        }
    if (sub.empty() || subcommands.find(sub) == subcommands.end()) {
        std::cerr << "usage: smoothiso <subcommand> [options]\n  subcommands:";
        for (const std::string& s : subcommands) std::cerr << ' ' << s;
        std::cerr << "\n";
        return 2;
    }

    CLI::App app{"smooth isotonic estimators, limit constants and Monte-Carlo checks"};
    app.require_subcommand(1);

    // shared option state
    std::string in, out, zcsv, config_path, scenario = "lambda-a-regression";
    std::string method = "sg", fn_id = "lambda_a", weight_name = "uniform";
    std::string kernel_name = "triweight", interval, ladder = "1000,10000,100000";
    std::string estimator = "kernel_corrected", format = "csv";
    double b = 0.1, p = 2.0, gamma = 0.8, alpha = 0.05, a_param = 0.0, sigma = 0.1;
    double cher_c = 4.0, cher_step = 5e-4;
    std::size_t n = 100, M = 100, N = 200, B = 200, grid_n = 513;
    std::uint64_t seed = 0;
    int workers = 0;
    bool with_hellinger = false;

    auto add_common = [&](CLI::App* cmd, const std::set<std::string>&) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--out", out, "output path (default: stdout)");
        cmd->add_option("--workers", workers, "worker threads (0: env/hardware)");
        cmd->add_option("--seed", seed, "master seed (omitted: generated and printed)");
    };

    CLI::App* c_est = app.add_subcommand("estimate", "evaluate an estimator on a grid");
    c_est->add_option("--in", in)->required();
    c_est->add_option("--method", method);
    c_est->add_option("--b", b);
    c_est->add_option("--kernel", kernel_name);
    c_est->add_option("--grid", grid_n);
    c_est->add_option("--gamma", gamma);
    add_common(c_est, {});

    CLI::App* c_err = app.add_subcommand("errors", "L_p / Hellinger error vs a builtin");
    c_err->add_option("--in", in)->required();
    c_err->add_option("--method", method);
    c_err->add_option("--b", b);
    c_err->add_option("--p", p);
    c_err->add_option("--fn", fn_id);
    c_err->add_option("--a", a_param);
    c_err->add_option("--sigma", sigma);
    c_err->add_option("--weight", weight_name);
    c_err->add_option("--interval", interval);
    c_err->add_option("--gamma", gamma);
    c_err->add_option("--kernel", kernel_name);
    c_err->add_flag("--hellinger", with_hellinger);
    add_common(c_err, {});

    CLI::App* c_const = app.add_subcommand("constants", "limit constants for a scenario");
    c_const->add_option("--scenario", scenario);
    c_const->add_option("--p", p);
    c_const->add_option("--n", n);
    c_const->add_option("--b", b);
    add_common(c_const, {});

    CLI::App* c_clt = app.add_subcommand("clt", "CLT validation experiment");
    c_clt->add_option("--scenario", scenario);
    c_clt->add_option("--estimator", estimator);
    c_clt->add_option("--p", p);
    c_clt->add_option("--n", n);
    c_clt->add_option("--M", M);
    c_clt->add_option("--b", b);
    c_clt->add_option("--gamma", gamma);
    c_clt->add_option("--zcsv", zcsv);
    add_common(c_clt, {});

    CLI::App* c_sg = app.add_subcommand("sgdist", "SG vs kernel limit distribution");
    c_sg->add_option("--scenario", scenario);
    c_sg->add_option("--p", p);
    c_sg->add_option("--n", n);
    c_sg->add_option("--M", M);
    c_sg->add_option("--b", b);
    add_common(c_sg, {});

    CLI::App* c_bnd = app.add_subcommand("boundary", "boundary blow-up table");
    c_bnd->add_option("--scenario", scenario);
    c_bnd->add_option("--p", p);
    c_bnd->add_option("--n-ladder", ladder);
    c_bnd->add_option("--M", M);
    c_bnd->add_option("--format", format);
    add_common(c_bnd, {});

    CLI::App* c_cher = app.add_subcommand("chernoff", "[D_R Z](0) draws");
    c_cher->add_option("--c", cher_c);
    c_cher->add_option("--step", cher_step);
    c_cher->add_option("--M", M);
    add_common(c_cher, {});

    CLI::App* c_test = app.add_subcommand("test", "bootstrap monotonicity test");
    c_test->add_option("--in", in)->required();
    c_test->add_option("--b", b);
    c_test->add_option("--B", B);
    c_test->add_option("--alpha", alpha);
    c_test->add_option("--p", p);
    c_test->add_option("--grid", grid_n);
    add_common(c_test, {});

    CLI::App* c_pow = app.add_subcommand("power", "rejection-rate study");
    c_pow->add_option("--fn", fn_id);
    c_pow->add_option("--a", a_param);
    c_pow->add_option("--sigma", sigma);
    c_pow->add_option("--n", n);
    c_pow->add_option("--N", N);
    c_pow->add_option("--B", B);
    c_pow->add_option("--alpha", alpha);
    c_pow->add_option("--b", b);
    c_pow->add_option("--p", p);
    add_common(c_pow, {});

    std::vector<std::string> argv_copy = args;
    try {
        std::vector<const char*> argv;
        argv.push_back("smoothiso");
        for (const std::string& s : argv_copy) argv.push_back(s.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 3;
    }

    CLI::App* active = app.get_subcommands().front();
    auto given = [&](const std::string& name) {
        const CLI::Option* opt = active->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };

    try {
        // merge config file under the flags
        Config cfg;
        if (given("--config") || !config_path.empty()) {
            std::set<std::string> allowed;
            for (const CLI::Option* opt : active->get_options()) {
                std::string name = opt->get_name();
                if (name.rfind("--", 0) == 0) allowed.insert(name.substr(2));
            }
            allowed.erase("config");
            cfg.load(config_path, allowed);
            cfg.apply("in", in, given("--in"));
            cfg.apply("out", out, given("--out"));
            cfg.apply("zcsv", zcsv, given("--zcsv"));
            cfg.apply("scenario", scenario, given("--scenario"));
            cfg.apply("method", method, given("--method"));
            cfg.apply("fn", fn_id, given("--fn"));
            cfg.apply("weight", weight_name, given("--weight"));
            cfg.apply("kernel", kernel_name, given("--kernel"));
            cfg.apply("interval", interval, given("--interval"));
            cfg.apply("n-ladder", ladder, given("--n-ladder"));
            cfg.apply("estimator", estimator, given("--estimator"));
            cfg.apply("format", format, given("--format"));
            cfg.apply("b", b, given("--b"));
            cfg.apply("p", p, given("--p"));
            cfg.apply("gamma", gamma, given("--gamma"));
            cfg.apply("alpha", alpha, given("--alpha"));
            cfg.apply("a", a_param, given("--a"));
            cfg.apply("sigma", sigma, given("--sigma"));
            cfg.apply("c", cher_c, given("--c"));
            cfg.apply("step", cher_step, given("--step"));
            cfg.apply("n", n, given("--n"));
            cfg.apply("M", M, given("--M"));
            cfg.apply("N", N, given("--N"));
            cfg.apply("B", B, given("--B"));
            cfg.apply("grid", grid_n, given("--grid"));
            cfg.apply("seed", seed, given("--seed"));
            cfg.apply("workers", workers, given("--workers"));
        }
        const bool b_given = given("--b") || cfg.has("b");
        const bool seed_given = given("--seed") || cfg.has("seed");
        if (!seed_given) {
            seed = generate_seed();
            std::cerr << "[smoothiso] generated seed " << seed << "\n";
        }

        ordered_json resolved;
        resolved["seed"] = seed;
        resolved["workers"] = resolve_workers(workers);
        log_config(sub, resolved);

        if (sub == "estimate")
            return cmd_estimate(in, method, b, kernel_name, grid_n, gamma, out);
        if (sub == "errors")
            return cmd_errors(in, method, b, p, fn_id, a_param, sigma, weight_name,
                              interval, gamma, kernel_name, with_hellinger, out);
        if (sub == "constants")
            return cmd_constants(scenario, p, n, b, b_given, out);
        if (sub == "clt")
            return cmd_clt(scenario, estimator, p, n, M, seed, b, b_given, gamma,
                           workers, out, zcsv);
        if (sub == "sgdist")
            return cmd_sgdist(scenario, p, n, M, seed, b, b_given, workers, out);
        if (sub == "boundary")
            return cmd_boundary(scenario, p, ladder, M, seed, workers, format, out);
        if (sub == "chernoff")
            return cmd_chernoff(cher_c, cher_step, M, seed, workers, out);
        if (sub == "test")
            return cmd_test(in, b, B, alpha, seed, p, grid_n, workers, out);
        if (sub == "power")
            return cmd_power(fn_id, a_param, sigma, n, N, B, alpha, b, seed, p,
                             workers, out);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace smoothiso
