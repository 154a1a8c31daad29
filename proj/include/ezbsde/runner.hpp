#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ezbsde/config.hpp"
#include "ezbsde/strategy.hpp"
#include "ezbsde/verify.hpp"

namespace ezbsde {

// command-line overrides applied on top of a loaded config
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    std::optional<int> steps;
    std::optional<std::string> out;
};
void apply_overrides(ExperimentConfig& cfg, const RunOverrides& ov);

// (t, x) samples used for r_min / C_p when building the generator context:
// three times crossed with a band around the state's typical range.
std::vector<std::pair<double, double>> default_bounds_grid(
    const MarketModel& model, double T);

GeneratorContext context_from_config(const ExperimentConfig& cfg);

// full pipeline, no files touched — shared by solve / sweep / tests
struct SolveArtifacts {
    GeneratorContext ctx;
    TimeGrid grid;
    PathSet paths;
    BsdeSolution sol;
    StrategyResult strat;
};
SolveArtifacts solve_experiment(const ExperimentConfig& cfg);

// writes solution.csv, strategy.csv, profile.csv, summary.json, verify.json
// into cfg.out_dir; returns 0, or 2 when an a priori Y bound is violated
int run_solve(const ExperimentConfig& cfg);

// parameter-condition report only (no solve): verify.json + stdout table
int run_verify(const ExperimentConfig& cfg);

// param is one of pi_upper / pi_lower / gamma / psi; one solve per value,
// all on the same seed; writes <out>/sweep.csv
int run_sweep(const ExperimentConfig& cfg, const std::string& param,
              const std::vector<double>& values);

// figure data files fig1a.dat ... fig6b.dat assembled from run artifacts in
// <dir>/runs/. generate=true performs the runs first (M paths, N steps,
// common seed); generate=false expects them to exist already.
int emit_plotdata(const std::string& dir, bool generate, int M, int N,
                  std::uint64_t seed);

// "%.17g" — round-trips doubles exactly, used for all CSV cells
std::string fmt17(double v);

}  // namespace ezbsde
