#pragma once

#include <optional>
#include <vector>

#include "ezbsde/constraint_set.hpp"
#include "ezbsde/market_model.hpp"
#include "ezbsde/path_engine.hpp"
#include "ezbsde/preferences.hpp"
#include "ezbsde/regression.hpp"

namespace ezbsde {

// Everything the driver needs at one (t, x, y, z). lambda lives in pi-space;
// the p-space set A = sigma(t,x)' * lambda is formed on the fly.
struct GeneratorContext {
    MarketModel model;
    Preferences prefs;
    ConstraintSet lambda = make_full_space(1);
    std::optional<ConstraintSet> setC;  // consumption-ratio constraint
    MarketBounds bounds;
    double T = 1.0;
    double C1 = 0.0;
    double ycap = 0.0;  // C1*T, the a priori upper bound on Y
};

// bounds_grid samples (t, x) for r_min / C_p; C1 = (1-gamma) r_min
// - delta*theta + 2(C0 + gamma(gamma-1) C_p).
GeneratorContext make_context(
    const MarketModel& model, const Preferences& prefs,
    const ConstraintSet& lambda, const std::optional<ConstraintSet>& setC,
    double T, const std::vector<std::pair<double, double>>& bounds_grid);

// Minimizer of g(c) = -(1-gamma) c + delta*theta e^{-y/theta} c^{1-1/psi}
// over setC (g is convex, so intervals clamp the stationary point
// delta^psi e^{-(psi/theta) y}; unions/finite sets scan candidates).
double clamp_consumption(double y, const Preferences& prefs,
                         const ConstraintSet& setC);

// The y-only part of the driver: the unconstrained identity
// (theta/psi) delta^psi e^{-(psi/theta) y} or the constrained infimum.
// y is clamped at ctx.ycap first (exact on the true solution, and the clamp
// is what makes the driver Lipschitz in y).
double consumption_term(double y, const GeneratorContext& ctx);

// Everything in the driver except consumption_term. Quadratic in z; the
// projection distance uses A = sigma' lambda at (t, x).
double generator_zpart(double t, double x, double z,
                       const GeneratorContext& ctx);

inline double generator_H(double t, double x, double y, double z,
                          const GeneratorContext& ctx) {
    return generator_zpart(t, x, z, ctx) + consumption_term(y, ctx);
}

struct SolverConfig {
    int degree = 3;
    double kz_override = 0.0;  // <= 0 uses 10*sqrt(C0+1)*(1+degree)
    double ridge = 1e-10;
};

struct BsdeStep {
    PolyFit y_fit;  // Y_i as a function of x (refit of the implicit solves)
    PolyFit z_fit;  // Z_i before truncation; query through z_at
    double r2_y = 1.0;
    double r2_z = 1.0;
    double se_y = 0.0;  // refit residual sd / sqrt(M) — Y regression error bar
    int trunc_hits = 0;
};

struct BsdeSolution {
    TimeGrid grid;
    std::vector<BsdeStep> steps;  // N+1 entries; step N is the zero pair
    double Y0 = 0.0;
    double Z0 = 0.0;
    double kz = 0.0;
    double ycap = 0.0;
    bool degenerate = false;  // constant state: scalar recursion, Z == 0

    double y_at(int i, double x) const;  // clamped at ycap
    double z_at(int i, double x) const;  // truncated at +-kz
};

// Backward regression Monte-Carlo for (Y, Z), trapezoidal in time:
//   target = Y_{i+1} + dt/2 H(t_{i+1}, X_{i+1}, Y_{i+1}, Z_{i+1})   per path
//   E_i    = regress(target | basis(X_i))
//   Z_i    = regress((target - E_i) dW_i / dt | basis(X_i)), |Z_i| <= K_Z
//   Y_i    : y = E_i + dt/2 H(t_i, X_i, y, Z_i)  (<= 20 Picard passes)
// then Y_i is clamped at C1*T. Degenerate-state models skip the regressions
// (conditional means are scalars and Z vanishes).
BsdeSolution solve_bsde(const GeneratorContext& ctx, const TimeGrid& grid,
                        const PathSet& paths, const SolverConfig& cfg = {});

// Constant-coefficient oracle: coefficients frozen at (t=0, x0), z = 0,
// so dY/dt = -H(Y), Y(T) = 0. Classical 4th-order Runge-Kutta on nsteps
// uniform steps; returns Y at nodes t_j = j T / nsteps (index 0 is t = 0).
std::vector<double> solve_ode_constant(const GeneratorContext& ctx,
                                       int nsteps = 10000);
// linear interpolation between oracle nodes
double ode_y_at(const std::vector<double>& nodes, double T, double t);

}  // namespace ezbsde
