#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "ezbsde/runner.hpp"

using namespace ezbsde;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE_MESSAGE(bool(in), "missing file " << p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("ezbsde_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

ExperimentConfig small_bs_config() {
    ExperimentConfig cfg;
    cfg.model = make_black_scholes(0.03, 0.05, 0.17);
    cfg.prefs = make_preferences(0.08, 2.0, 1.2);
    cfg.lambda = make_interval(0.0, 0.5);
    cfg.T = 30.0;
    cfg.N = 10;
    cfg.M = 500;
    cfg.seed = 42;
    return cfg;
}

}  // namespace

TEST_CASE("fmt17 round-trips doubles exactly") {
    const double xs[] = {0.1,      1.0 / 3.0, -2.5e-300, 1.7976931348623157e308,
                         0.0,      -0.0,      42.0,      6.02214076e23};
    for (double x : xs) {
        CHECK(std::stod(fmt17(x)) == x);
    }
    CHECK(fmt17(42.0) == "42");
}

TEST_CASE("apply_overrides validates") {
    ExperimentConfig cfg = small_bs_config();
    RunOverrides ov;
    ov.seed = 7;
    ov.paths = 100;
    ov.steps = 5;
    ov.out = "elsewhere";
    apply_overrides(cfg, ov);
    CHECK(cfg.seed == 7);
    CHECK(cfg.M == 100);
    CHECK(cfg.N == 5);
    CHECK(cfg.out_dir == "elsewhere");

    RunOverrides bad;
    bad.paths = 1;
    CHECK_THROWS_AS(apply_overrides(cfg, bad), std::invalid_argument);
    bad = RunOverrides{};
    bad.steps = 0;
    CHECK_THROWS_AS(apply_overrides(cfg, bad), std::invalid_argument);
}

TEST_CASE("solve artifacts are byte-identical across runs") {
    ExperimentConfig cfg = small_bs_config();
    fs::path d1 = fresh_dir("det1");
    fs::path d2 = fresh_dir("det2");

    cfg.out_dir = d1.string();
    CHECK(run_solve(cfg) == 0);
    cfg.out_dir = d2.string();
    CHECK(run_solve(cfg) == 0);

    for (const char* f : {"solution.csv", "strategy.csv", "profile.csv",
                          "summary.json", "verify.json"}) {
        CHECK_MESSAGE(slurp(d1 / f) == slurp(d2 / f), f);
    }

    // header sanity on the main table
    std::istringstream sol(slurp(d1 / "solution.csv"));
    std::string header;
    std::getline(sol, header);
    CHECK(header == "step,t,Y0_at_x0,Z0_at_x0,R2_Y,R2_Z,trunc_hits");
    int rows = 0;
    std::string line;
    while (std::getline(sol, line))
        if (!line.empty()) ++rows;
    CHECK(rows == cfg.N + 1);

    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("constraint sweep hits the clamp and the unconstrained point") {
    ExperimentConfig cfg = small_bs_config();
    fs::path d = fresh_dir("sweep");
    cfg.out_dir = d.string();
    // Merton ratio at these parameters is ~0.865: a cap of 0.2 binds, a cap
    // of 1.0 does not
    CHECK(run_sweep(cfg, "pi_upper", {0.2, 1.0}) == 0);

    std::istringstream in(slurp(d / "sweep.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "param,value,pi_star_0,c_hat_star_0,Y0,V0");

    double pis[2], v0s[2];
    for (int i = 0; i < 2; ++i) {
        std::string line;
        REQUIRE(std::getline(in, line));
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::string param;
        double value, pi, chat, y0, v0;
        row >> param >> value >> pi >> chat >> y0 >> v0;
        CHECK(param == "pi_upper");
        pis[i] = pi;
        v0s[i] = v0;
        CHECK(chat > 0.0);
        CHECK(v0 < 0.0);
    }
    CHECK(pis[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(pis[1] == doctest::Approx(0.8650519031141868).epsilon(1e-10));
    // a wider constraint set cannot hurt
    CHECK(v0s[1] >= v0s[0] - 1e-12);

    CHECK_THROWS_AS(run_sweep(cfg, "pi_upper", {}), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(cfg, "volatility", {0.1}),
                    std::invalid_argument);
    fs::remove_all(d);
}

TEST_CASE("plotdata without --generate reports the missing artifact") {
    fs::path d = fresh_dir("plot_missing");
    try {
        emit_plotdata(d.string(), false, 100, 5, 1);
        CHECK(false);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        CHECK(msg.find("missing artifact") != std::string::npos);
        CHECK(msg.find("--generate") != std::string::npos);
    }
    fs::remove_all(d);
}

TEST_CASE("plotdata generate produces every figure file" *
          doctest::timeout(300)) {
    fs::path d = fresh_dir("plot_gen");
    CHECK(emit_plotdata(d.string(), true, 400, 8, 3) == 0);

    const char* figs[] = {"fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b",
                          "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b"};
    for (const char* f : figs) {
        std::string dat = slurp(d / (std::string(f) + ".dat"));
        // exactly one header line, then at least one data row
        std::istringstream in(dat);
        std::string header, first;
        REQUIRE_MESSAGE(bool(std::getline(in, header)), f);
        CHECK_MESSAGE(std::getline(in, first), f);
        CHECK_MESSAGE(header.find_first_not_of(
                          " abcdefghijklmnopqrstuvwxyz"
                          "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.*=") ==
                          std::string::npos,
                      "header is words, not numbers: " << header);
        CHECK(fs::exists(d / (std::string(f) + ".txt")));
    }
    fs::remove_all(d);
}
