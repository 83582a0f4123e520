#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smoothiso/cli.hpp"
#include "smoothiso/core.hpp"
#include "smoothiso/asympt.hpp"
#include "smoothiso/kernel.hpp"
#include "smoothiso/parallel.hpp"

using namespace smoothiso;

namespace {

struct TempDir {
    std::string base;
    TempDir() {
        base = "cli_test_tmp";
        std::filesystem::create_directories(base);
    }
    ~TempDir() { std::filesystem::remove_all(base); }
    std::string path(const std::string& name) const { return base + "/" + name; }
};

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
}

std::string make_sample(const TempDir& dir, const std::string& fn, double a,
                        double sigma, std::size_t n, std::uint64_t seed) {
    const Sample s = simulate_regression(
        builtin_function(fn, {{"a", a}, {"sigma", sigma}}), n, sigma, seed);
    const std::string path = dir.path("sample.csv");
    std::ofstream os(path);
    write_sample_csv(os, s);
    return path;
}

}  // namespace

TEST_CASE("unknown subcommand exits 2") {
    CHECK(run({"frobnicate"}) == 2);
    CHECK(run({}) == 2);
}

TEST_CASE("constants subcommand emits the flat constants object") {
    TempDir dir;
    const std::string out = dir.path("constants.json");
    const int rc = run({"constants", "--scenario", "linear-regression", "--p", "2",
                        "--n", "2000", "--out", out});
    REQUIRE(rc == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    for (const char* key : {"sigma1", "Dsq", "m_n", "m_c", "m_limit", "sigma2",
                            "theta2", "theta1", "theta_tilde2", "alpha0"})
        CHECK(j.contains(key));
    CHECK(j["sigma1"].get<double>() ==
          doctest::Approx(sigma1_constant(triweight_kernel(), 2.0)));
    CHECK(j["alpha0"].get<double>() == 0.0);
}

TEST_CASE("estimate subcommand writes a grid CSV") {
    TempDir dir;
    const std::string sample = make_sample(dir, "lambda_a", 0.0, 0.1, 100, 5);
    const std::string out = dir.path("est.csv");
    const int rc = run({"estimate", "--in", sample, "--method", "sg", "--b", "0.1",
                        "--grid", "513", "--out", out});
    REQUIRE(rc == 0);
    std::ifstream is(out);
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,value");
    std::size_t rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 513);
}

TEST_CASE("errors subcommand reports the L_p error") {
    TempDir dir;
    const std::string sample = make_sample(dir, "lambda_a", 0.0, 0.05, 200, 8);
    const std::string out = dir.path("err.json");
    const int rc = run({"errors", "--in", sample, "--method", "kernel_corrected",
                        "--b", "0.1", "--p", "2", "--fn", "lambda_a", "--a", "0",
                        "--out", out});
    REQUIRE(rc == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j["lp_error"].get<double>() >= 0.0);
    CHECK(j["p"].get<double>() == 2.0);

    // explicit sub-interval shrinks the integral
    const std::string out2 = dir.path("err2.json");
    REQUIRE(run({"errors", "--in", sample, "--method", "kernel_corrected", "--b",
                 "0.1", "--p", "2", "--fn", "lambda_a", "--a", "0", "--interval",
                 "0.3,0.7", "--out", out2}) == 0);
    const nlohmann::json j2 = nlohmann::json::parse(slurp(out2));
    CHECK(j2["interval"][0].get<double>() == 0.3);
    CHECK(j2["lp_error"].get<double>() <= j["lp_error"].get<double>());
}

TEST_CASE("config file merging") {
    TempDir dir;
    const std::string out = dir.path("c.json");

    SUBCASE("unknown key is rejected with exit 3") {
        const std::string cfg = dir.path("bad.json");
        write_file(cfg, "{\"bandwith\": 0.1}\n");
        CHECK(run({"constants", "--config", cfg, "--out", out}) == 3);
    }
    SUBCASE("type mismatch is rejected with exit 3") {
        const std::string cfg = dir.path("bad2.json");
        write_file(cfg, "{\"p\": \"two\"}\n");
        CHECK(run({"constants", "--config", cfg, "--out", out}) == 3);
    }
    SUBCASE("malformed JSON is rejected with exit 3") {
        const std::string cfg = dir.path("bad3.json");
        write_file(cfg, "{oops\n");
        CHECK(run({"constants", "--config", cfg, "--out", out}) == 3);
    }
    SUBCASE("flags override config values") {
        const std::string cfg = dir.path("p1.json");
        write_file(cfg, "{\"p\": 1, \"scenario\": \"linear-regression\", \"n\": 1500}\n");
        REQUIRE(run({"constants", "--config", cfg, "--p", "2", "--out", out}) == 0);
        const nlohmann::json j = nlohmann::json::parse(slurp(out));
        CHECK(j["sigma1"].get<double>() ==
              doctest::Approx(sigma1_constant(triweight_kernel(), 2.0)));
    }
    SUBCASE("empty config object means all defaults") {
        const std::string cfg = dir.path("empty.json");
        write_file(cfg, "{}\n");
        REQUIRE(run({"constants", "--config", cfg, "--scenario", "linear-regression",
                     "--out", out}) == 0);
        const nlohmann::json j = nlohmann::json::parse(slurp(out));
        CHECK(j.contains("sigma1"));
    }
    SUBCASE("config values apply when no flag is given") {
        const std::string cfg = dir.path("p1b.json");
        write_file(cfg, "{\"p\": 1, \"scenario\": \"linear-regression\", \"n\": 1500}\n");
        REQUIRE(run({"constants", "--config", cfg, "--out", out}) == 0);
        const nlohmann::json j = nlohmann::json::parse(slurp(out));
        CHECK(j["sigma1"].get<double>() ==
              doctest::Approx(sigma1_constant(triweight_kernel(), 1.0)));
    }
}

TEST_CASE("test subcommand exit codes encode the decision") {
    TempDir dir;

    SUBCASE("clearly increasing data is rejected with exit 10") {
        const std::string sample = make_sample(dir, "lambda2", 0.0, 0.1, 100, 3);
        const std::string out = dir.path("t.json");
        const int rc = run({"test", "--in", sample, "--b", "0.1", "--B", "60",
                            "--alpha", "0.05", "--seed", "5", "--out", out});
        CHECK(rc == 10);
        const nlohmann::json j = nlohmann::json::parse(slurp(out));
        CHECK(j["reject"].get<bool>());
    }
    SUBCASE("decreasing data passes with exit 0") {
        const std::string sample = make_sample(dir, "lambda_a", 0.0, 0.05, 100, 4);
        const std::string out = dir.path("t0.json");
        const int rc = run({"test", "--in", sample, "--b", "0.1", "--B", "60",
                            "--alpha", "0.05", "--seed", "5", "--out", out});
        CHECK(rc == 0);
    }
    SUBCASE("the L1 variant is selected with --p 1") {
        const std::string sample = make_sample(dir, "lambda2", 0.0, 0.1, 100, 3);
        const std::string out = dir.path("t1.json");
        const int rc = run({"test", "--in", sample, "--b", "0.1", "--B", "60",
                            "--alpha", "0.05", "--seed", "5", "--p", "1", "--out", out});
        CHECK(rc == 10);  // strongly increasing data is rejected either way
    }
    SUBCASE("missing sample file is a runtime failure") {
        CHECK(run({"test", "--in", dir.path("nope.csv"), "--seed", "1"}) == 4);
    }
}

TEST_CASE("power subcommand emits one CSV row") {
    TempDir dir;
    const std::string out = dir.path("p.csv");
    const int rc = run({"power", "--fn", "lambda_a", "--a", "0.45", "--sigma", "0.025",
                        "--n", "60", "--N", "6", "--B", "30", "--alpha", "0.05",
                        "--seed", "7", "--out", out});
    REQUIRE(rc == 0);
    std::istringstream is(slurp(out));
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    CHECK(header == "fn,a,sigma,n,b,alpha,N,B,rate");
    CHECK(row.rfind("lambda_a,0.45,0.025,60,", 0) == 0);
}

TEST_CASE("reruns are byte-identical for any worker count") {
    TempDir dir;
    const std::string a = dir.path("a.json"), b = dir.path("b.json"), c = dir.path("c.json");
    const std::vector<std::string> base = {"clt", "--scenario", "linear-regression",
                                           "--estimator", "kernel_corrected", "--n",
                                           "300", "--M", "10", "--seed", "99"};
    auto with = [&](const std::string& out, const char* workers) {
        std::vector<std::string> args = base;
        args.insert(args.end(), {"--workers", workers, "--out", out});
        return run(args);
    };
    REQUIRE(with(a, "1") == 0);
    REQUIRE(with(b, "2") == 0);
    REQUIRE(with(c, "3") == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == slurp(c));
}

TEST_CASE("worker default comes from the environment, flags override") {
    setenv("SMOOTHISO_WORKERS", "3", 1);
    CHECK(resolve_workers(0) == 3);
    CHECK(resolve_workers(2) == 2);
    unsetenv("SMOOTHISO_WORKERS");
    CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("chernoff subcommand runs without an explicit seed") {
    TempDir dir;
    const std::string out = dir.path("ch.json");
    const int rc = run({"chernoff", "--c", "1", "--step", "0.001", "--M", "3",
                        "--out", out});
    REQUIRE(rc == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j["draws"].size() == 3);
}
