#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmpd/cli/config.hpp"
#include "pmpd/cli/output.hpp"
#include "pmpd/cli/runner.hpp"

using namespace pmpd::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("pmpd_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults") {
    const auto c = parse_config({});
    CHECK(c.n == 32);
    CHECK(c.alpha == 0.01);
    CHECK(c.b == 10.0);
    CHECK(c.algorithm.beta == 0.01);
    CHECK(c.algorithm.sigma == 0.1);
    CHECK(c.algorithm.delta_tol == 1e-12);
    CHECK(c.algorithm.mode == pmpd::pmp::StepMode::pmp_armijo);
    CHECK(c.sweep.empty());
    CHECK(c.meshes() == std::vector<std::size_t>{32});
}

TEST_CASE("flag parsing and range errors") {
    CHECK_THROWS_AS(parse_config({"--beta", "1.5"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--sigma", "0"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--b", "2.5"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--mode", "newton"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--unknown"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--n", "512"}), UsageError);
    CHECK(parse_config({"--n", "512", "--allow-large"}).n == 512);
    CHECK_THROWS_AS(parse_config({"--help"}), HelpRequested);

    const auto c = parse_config({"--sweep", "32,64,128", "--mode", "full-step", "--mass", "consistent"});
    CHECK(c.sweep == std::vector<std::size_t>{32, 64, 128});
    CHECK(c.algorithm.mode == pmpd::pmp::StepMode::full_step);
    CHECK(c.mass == pmpd::fem::MassKind::consistent);
    CHECK(parse_config({"--sweep", "default"}).sweep == kDefaultSweep);
    CHECK_THROWS_AS(parse_config({"--sweep", "32,x"}), UsageError);
}

TEST_CASE("config file with flag override") {
    const auto dir = scratch_dir("config");
    {
        std::ofstream os(dir / "run.ini");
        os << "n=16\nalpha=0.02\nbeta=0.5\n";
    }
    const auto c = parse_config({"--config", (dir / "run.ini").string(), "--alpha", "0.05"});
    CHECK(c.n == 16);
    CHECK(c.alpha == 0.05);
    CHECK(c.algorithm.beta == 0.5);
    {
        std::ofstream os(dir / "bad.ini");
        os << "n=16\nwidth=3\n";
    }
    CHECK_THROWS_AS(parse_config({"--config", (dir / "bad.ini").string()}), UsageError);
}

TEST_CASE("history csv round trip is exact") {
    std::vector<pmpd::pmp::IterationRecord> recs(2);
    recs[0] = {0, 4.75381234567891, -0.1 / 3.0, 1.0, 0.3125, 17, 1, -0.01};
    recs[1] = {1, 4.7, -1e-300, 0.0, 0.0, 0, 0, 0.0};
    std::stringstream ss;
    write_history_csv(ss, recs);
    const auto back = read_history_csv(ss);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].k == recs[i].k);
        CHECK(back[i].J == recs[i].J);
        CHECK(back[i].rho == recs[i].rho);
        CHECK(back[i].t_k == recs[i].t_k);
        CHECK(back[i].set_measure == recs[i].set_measure);
        CHECK(back[i].changed_cells == recs[i].changed_cells);
        CHECK(back[i].inner_trials == recs[i].inner_trials);
    }
}

TEST_CASE("sweep table formats h to three digits") {
    std::vector<RunSummary> rows;
    for (std::size_t n : {32u, 64u, 125u, 250u, 500u, 1000u}) {
        RunSummary r;
        r.n = n;
        r.h = std::sqrt(2.0) / static_cast<double>(n);
        rows.push_back(r);
    }
    rows.back().error = "skipped";
    std::stringstream ss;
    write_sweep_table(ss, rows);
    std::vector<std::string> h;
    std::string line;
    std::getline(ss, line);
    CHECK(line == kSweepHeader);
    while (std::getline(ss, line)) h.push_back(line.substr(0, line.find(',')));
    CHECK(h == std::vector<std::string>{"4.42e-02", "2.21e-02", "1.13e-02", "5.66e-03", "2.83e-03", "1.41e-03"});
}

TEST_CASE("run_main writes artifacts and reports exit codes") {
    const auto dir = scratch_dir("run");
    std::stringstream out, err;
    CHECK(run_main({"--n", "8", "--out-dir", (dir / "a").string(), "--dump-control", "--dump-fields"}, out, err) ==
          kExitOk);
    for (const char* f : {"history.csv", "summary.json", "control.txt", "state.txt", "adjoint.txt"})
        CHECK(fs::exists(dir / "a" / f));

    std::ifstream is(dir / "a" / "control.txt");
    std::size_t n = 0;
    const auto u = read_control_dump(is, n);
    CHECK(n == 8);
    CHECK(u.values.size() == 128);
    for (double v : u.values) {
        CHECK(v == std::round(v));
        CHECK(std::abs(v) <= 10.0);
    }

    const auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
    CHECK(summary["n"] == 8);
    CHECK(summary["termination"] == "residual_tol");

    CHECK(run_main({"--n", "8", "--delta-tol", "1e9", "--out-dir", (dir / "b").string()}, out, err) == kExitOk);
    std::ifstream hs(dir / "b" / "history.csv");
    const auto recs = read_history_csv(hs);
    CHECK(recs.size() == 1);
    CHECK(nlohmann::json::parse(slurp(dir / "b" / "summary.json"))["termination"] == "residual_tol");

    CHECK(run_main({"--beta", "1.5"}, out, err) == kExitUsage);
    CHECK(run_main({"--n", "4", "--out-dir", "/proc/pmpd-no-such-dir"}, out, err) == kExitIo);
}

TEST_CASE("single-mesh sweep matches the single run") {
    const auto dir = scratch_dir("sweep");
    auto config = parse_config({"--sweep", "8,16"});
    std::stringstream log;
    const auto rows = run_sweep(config, dir, log);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error.empty());
    CHECK(rows[1].J > rows[0].J);
    CHECK(fs::exists(dir / "sweep.csv"));
    CHECK(fs::exists(dir / "sweep_history.csv"));
    CHECK(fs::exists(dir / "n16" / "history.csv"));

    config.sweep = {16};
    const auto one = run_sweep(config, dir / "one", log);
    const auto single = run_single(config, 16, dir / "single");
    REQUIRE(one.size() == 1);
    CHECK(one[0].J == single.J);
    CHECK(one[0].rho_l1 == single.rho_l1);
    CHECK(one[0].iterations == single.iterations);
}

}
