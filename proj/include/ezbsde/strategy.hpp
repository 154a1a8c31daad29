#pragma once

#include <vector>

#include "ezbsde/bsde_solver.hpp"

namespace ezbsde {

struct PortfolioChoice {
    double p = 0.0;   // p-space (sigma' pi)
    double pi = 0.0;  // fraction of wealth
};

// p* = proj_{A(t,x)}((kappa + rho z)/gamma), pi* = p*/sigma
PortfolioChoice optimal_portfolio(double t, double x, double z_at,
                                  const GeneratorContext& ctx);

// delta^psi e^{-(psi/theta) Y}, clamped into setC when present
double optimal_consumption(double y_at, const Preferences& prefs,
                           const std::optional<ConstraintSet>& setC);

struct UtilityEstimate {
    double v0 = 0.0;
    double se = 0.0;  // Monte-Carlo standard error of the mean
};

// Epstein-Zin utility of a proportional strategy, via the pathwise identity
//   V_0 = E[ U(W_T) exp(int_0^T f(c_s, V_s)/V_s ds) ]
// (exact for adapted integrands: d(V e^{int phi}) = e^{int phi} Z dB).
// phi = f/V depends on V only through the wealth-free ratio h = V W^{gamma-1},
// which a cross-path regression on basis(X_i) recovers; phi is bounded and
// flat in h near h -> 0-, so regression error enters only as a mild
// correction. The time integral is trapezoidal, matching the wealth drift.
UtilityEstimate evaluate_utility(const PathSet& paths, const TimeGrid& grid,
                                 const StateFn& chat,
                                 const std::vector<double>& lnW,
                                 const Preferences& prefs, int degree = 2);

struct StrategyResult {
    // all arrays M x (N+1), pathwise evaluations of the Markov controls
    std::vector<double> chat;
    std::vector<double> pp;  // p-space
    std::vector<double> pi;
    std::vector<double> lnW;
    double Y0 = 0.0;
    double V0_closed = 0.0;  // omega^{1-gamma}/(1-gamma) e^{Y0}
    double V0_sim = 0.0;
    double se_V0 = 0.0;
};

StrategyResult run_optimal(const GeneratorContext& ctx, const TimeGrid& grid,
                           const PathSet& paths, const BsdeSolution& sol,
                           double omega, int utility_degree = 2);

enum class PerturbMode { ShiftPi, ScaleC };

// pi -> proj_Lambda(pi* + eps) or chat -> clamp_C(chat* (1 + eps)); the
// perturbed controls stay Markov functions of (step, x), so wealth and
// utility are re-simulated on the same paths.
UtilityEstimate perturbed_utility(const GeneratorContext& ctx,
                                  const TimeGrid& grid, const PathSet& paths,
                                  const BsdeSolution& sol, PerturbMode mode,
                                  double eps, double omega,
                                  int utility_degree = 2);

}  // namespace ezbsde
