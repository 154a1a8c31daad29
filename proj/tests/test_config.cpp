#include <stdexcept>
#include <string>

#include "doctest.h"
#include "ezbsde/config.hpp"

using namespace ezbsde;

namespace {

// run the parser and hand back the error text (empty = no throw)
std::string parse_error(const std::string& text) {
    try {
        load_config_text(text, "cfg.ini");
        return "";
    } catch (const std::exception& e) {
        return e.what();
    }
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal config fills every default") {
    ExperimentConfig cfg =
        load_config_text("[model]\nkind = black_scholes\n", "cfg.ini");
    CHECK(cfg.model.kind == ModelKind::BlackScholes);
    CHECK(cfg.model.r0 == 0.03);
    CHECK(cfg.model.mu0 == 0.05);
    CHECK(cfg.model.sig == 0.17);
    CHECK(cfg.T == 30.0);
    CHECK(cfg.N == 100);
    CHECK(cfg.M == 100000);
    CHECK(cfg.seed == 42);
    CHECK(cfg.degree == 3);
    CHECK(cfg.kz == 0.0);
    CHECK(cfg.omega == 1.0);
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.lambda.kind == ConstraintSet::Kind::FullSpace);
    CHECK(!cfg.chat_set.has_value());
    CHECK(cfg.prefs.delta == 0.08);
    CHECK(cfg.prefs.gamma == 2.0);
    CHECK(cfg.prefs.psi == 1.2);
}

TEST_CASE("horizon default follows the model kind") {
    CHECK(load_config_text("[model]\nkind = heston\n", "cfg.ini").T == 10.0);
    CHECK(load_config_text("[model]\nkind = linear_diffusion\n", "cfg.ini").T ==
          1.0);
    // explicit grid wins
    ExperimentConfig cfg = load_config_text(
        "[model]\nkind = heston\n[grid]\nT = 2.5\nN = 7\n", "cfg.ini");
    CHECK(cfg.T == 2.5);
    CHECK(cfg.N == 7);
}

TEST_CASE("full round trip with comments and constraints") {
    const std::string text =
        "# demo configuration\n"
        "[model]\n"
        "kind = heston   ; inline comment\n"
        "b = 4.0\n"
        "x0 = 0.03\n"
        "[preferences]\n"
        "delta = 0.05\n"
        "gamma = 3\n"
        "psi = 1.5\n"
        "[constraints]\n"
        "pi = interval [0 0.1]\n"
        "chat = interval [0.01 0.2]\n"
        "[mc]\n"
        "M = 1000\n"
        "seed = 7\n"
        "degree = 2\n"
        "kz = 5\n"
        "[run]\n"
        "omega = 2\n"
        "out = scratch/run1\n";
    ExperimentConfig cfg = load_config_text(text, "cfg.ini");
    CHECK(cfg.model.b == 4.0);
    CHECK(cfg.model.l == 0.0225);  // untouched default
    CHECK(cfg.model.x0 == 0.03);
    CHECK(cfg.prefs.gamma == 3.0);
    CHECK(cfg.lambda.kind == ConstraintSet::Kind::Interval);
    CHECK(cfg.lambda.ivals[0][1] == 0.1);
    REQUIRE(cfg.chat_set.has_value());
    CHECK(cfg.chat_set->ivals[0][0] == 0.01);
    CHECK(cfg.M == 1000);
    CHECK(cfg.seed == 7);
    CHECK(cfg.kz == 5.0);
    CHECK(cfg.omega == 2.0);
    CHECK(cfg.out_dir == "scratch/run1");
}

TEST_CASE("unknown keys and sections are reported with their line") {
    std::string err = parse_error(
        "[model]\nkind = black_scholes\n[mc]\npaths = 100\n");
    CHECK(contains(err, "cfg.ini:4"));
    CHECK(contains(err, "unknown key 'mc.paths'"));

    err = parse_error("[model]\nkind = black_scholes\n[montecarlo]\nM = 10\n");
    CHECK(contains(err, "cfg.ini:4"));
    CHECK(contains(err, "unknown section [montecarlo]"));

    err = parse_error("[model]\nkind = black_scholes\nkind = heston\n");
    CHECK(contains(err, "cfg.ini:3"));
    CHECK(contains(err, "duplicate key 'model.kind'"));
    CHECK(contains(err, "first set on line 2"));

    err = parse_error("kind = black_scholes\n");
    CHECK(contains(err, "outside any section"));

    err = parse_error("[model\nkind = black_scholes\n");
    CHECK(contains(err, "unterminated section header"));

    err = parse_error("[model]\nkind black_scholes\n");
    CHECK(contains(err, "expected 'key = value'"));
}

TEST_CASE("validation errors name the offending key") {
    std::string err = parse_error(
        "[model]\nkind = black_scholes\n[preferences]\ngamma = -2\n");
    CHECK(contains(err, "cfg.ini:4"));
    CHECK(contains(err, "preferences.gamma must be > 1"));

    err = parse_error("[model]\nkind = black_scholes\n[preferences]\npsi = 1\n");
    CHECK(contains(err, "preferences.psi must be > 1"));

    err = parse_error(
        "[model]\nkind = black_scholes\n[preferences]\ndelta = 0\n");
    CHECK(contains(err, "preferences.delta must be > 0"));

    CHECK(contains(parse_error("[model]\nkind = garch\n"),
                   "unknown model.kind 'garch'"));
    CHECK(contains(parse_error("[model]\nkind = black_scholes\n[mc]\nM = 1\n"),
                   "mc.M must be >= 2"));
    CHECK(contains(
        parse_error("[model]\nkind = black_scholes\n[mc]\ndegree = 13\n"),
        "mc.degree out of range"));
    CHECK(contains(parse_error("[model]\nkind = black_scholes\n[mc]\nkz = -1\n"),
                   "mc.kz must be >= 0"));
    CHECK(contains(
        parse_error("[model]\nkind = black_scholes\n[mc]\nseed = -3\n"),
        "mc.seed must be >= 0"));
    CHECK(contains(
        parse_error("[model]\nkind = black_scholes\n[run]\nomega = 0\n"),
        "run.omega must be > 0"));
    CHECK(contains(parse_error("[model]\nkind = black_scholes\n[grid]\nT = 0\n"),
                   "grid.T must be > 0"));
    CHECK(contains(parse_error("[model]\nkind = black_scholes\n[grid]\nN = 0\n"),
                   "grid.N must be >= 1"));
    CHECK(contains(
        parse_error("[model]\nkind = black_scholes\n[grid]\nN = 2.5\n"),
        "grid.N must be an integer"));
    CHECK(contains(parse_error("[model]\nkind = black_scholes\nr = abc\n"),
                   "not a number"));
}

TEST_CASE("constraint grammar") {
    CHECK(parse_constraint("full").kind == ConstraintSet::Kind::FullSpace);

    ConstraintSet iv = parse_constraint("interval [0 0.5]");
    CHECK(iv.kind == ConstraintSet::Kind::Interval);
    CHECK(iv.ivals[0][0] == 0.0);
    CHECK(iv.ivals[0][1] == 0.5);
    // brackets are decoration
    CHECK(parse_constraint("interval 0 0.5").ivals == iv.ivals);

    ConstraintSet un = parse_constraint("union [0 1] [3 4]");
    CHECK(un.kind == ConstraintSet::Kind::UnionOfIntervals);
    REQUIRE(un.ivals.size() == 2);
    CHECK(un.ivals[1][0] == 3.0);

    ConstraintSet fs = parse_constraint("finite [0.25 0.5 1]");
    CHECK(fs.kind == ConstraintSet::Kind::FiniteSet);
    CHECK(fs.points.size() == 3);

    CHECK_THROWS_AS(parse_constraint(""), std::runtime_error);
    CHECK_THROWS_AS(parse_constraint("interval 0"), std::runtime_error);
    CHECK_THROWS_AS(parse_constraint("interval 0 1 2"), std::runtime_error);
    CHECK_THROWS_AS(parse_constraint("union 0 1 3"), std::runtime_error);
    CHECK_THROWS_AS(parse_constraint("finite"), std::runtime_error);
    CHECK_THROWS_AS(parse_constraint("full 1"), std::runtime_error);
    CHECK_THROWS_AS(parse_constraint("interval 0 1 garbage"),
                    std::runtime_error);
    try {
        parse_constraint("ball 1");
        CHECK(false);
    } catch (const std::exception& e) {
        CHECK(contains(e.what(), "unknown constraint kind 'ball'"));
        CHECK(contains(e.what(), "expected full/interval/union/finite"));
    }

    // a bad constraint inside a config file points at the config line
    std::string err = parse_error(
        "[model]\nkind = black_scholes\n[constraints]\npi = interval 0\n");
    CHECK(contains(err, "cfg.ini:4"));
    CHECK(contains(err, "exactly two numbers"));
}

TEST_CASE("missing config file") {
    CHECK_THROWS_AS(load_config("/no/such/file.ini"), std::runtime_error);
    try {
        load_config("/no/such/file.ini");
    } catch (const std::exception& e) {
        CHECK(contains(e.what(), "cannot open config file"));
    }
}
