#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ezbsde/bsde_solver.hpp"

namespace ezbsde {

// every condition carries both inequality sides; a bare boolean hides
// near-failures
struct CondReport {
    std::string name;
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string note;
};

struct C1C2 {
    double C1 = 0.0;
    std::function<double(double)> C2;  // t -> C2(t)
};

// C1 = (1-gamma) r_min - delta theta + 2(C0 + gamma(gamma-1) C_p)
// C2(t) = [(theta/psi) delta^psi e^{-(psi/theta) C1 T}
//          + (1-gamma)/(2 gamma) C0 - delta theta] (T - t)
C1C2 compute_C1_C2(const MarketBounds& bounds, const Preferences& prefs,
                   double T);

struct LfoResult {
    bool holds = false;
    double min_margin = 0.0;  // min over the grid of 1/2 + 2(1-g)/g |rho|^2
};
// 1/2 + (2(1-gamma)/gamma)|sigma'Sigma^{-1}sigma rho||rho| > 0 on the grid
LfoResult check_lfo_condition(const MarketModel& model,
                              const Preferences& prefs,
                              const std::vector<double>& xgrid);

// twice-differentiable test function with explicit derivative evaluators
struct ScalarField {
    std::function<double(double)> f;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

// Literal evaluation of the drift-domination operator
//   F(phi) = b phi' + a^2/2 phi''
//            - (2(1-g)/g)|kappa||rho a phi'| - (1-g) C_p |rho a phi'|
//            + (1/4) N^2 / D,
//   N = (1-g)C_p|rho| + (2(1-g)/g)|kappa||rho| - |phi' a|
//       + (2(1-g)/g)|rho||rho a phi'|,
//   D = 1/2 + (2(1-g)/g)|rho|^2.
// Throws std::domain_error when D <= 0 (the positivity assumption fails).
double lyapunov_operator(const ScalarField& phi, const MarketModel& model,
                         const Preferences& prefs, double C_p, double x);

// Parameter conditions for the linear-diffusion example:
//   (i) b, a > 0; (ii) r1 > 0;
//   (iii) a^2/b < (1 + 4(1-g)rho^2/g) / ((2(1-g)rho^2/g - 1)^2);
//   (iv) (psi-1) r1 < (b - (psi-1) a lambda1 rho)^2 / (2 a^2).
std::vector<CondReport> check_prop_exp2(double b, double a, double r1,
                                        double lambda1, double rho,
                                        const Preferences& prefs);

// Parameter conditions for the square-root volatility example:
//   (i) b, l, a, sigma, lambda > 0 and b l > a^2/2 (r1 = 0, the constant-rate
//       reading, is accepted with a note; r1 < 0 fails);
//   (ii) 1/2 + 2(1-g)rho^2/g > 0;
//   (iii) (psi-1) r1 < b^2/(2 a^2).
std::vector<CondReport> check_prop_exp1(double b, double l, double a,
                                        double sigma_scale, double lambda,
                                        double r1, double rho,
                                        const Preferences& prefs);

// zeta < beta^2/(2 a^2): the exponential-moment (Laplace-transform) condition
CondReport laplace_condition(double zeta, double beta, double a);

struct YBoundReport {
    bool upper_ok = true;
    double worst_upper = 0.0;  // max over paths/steps of Y - C1 T
    bool lower_checked = false;
    bool lower_ok = true;
    double worst_lower = 0.0;  // min over paths/steps of Y - lower bound
};
// Upper bound on every path-step; lower bound (1-gamma) r (T-t) + C2(t) only
// for constant-r models, with 3 regression standard errors of slack.
YBoundReport check_y_bounds(const BsdeSolution& sol,
                            const GeneratorContext& ctx, const PathSet& paths);

struct VerificationReport {
    double C1 = 0.0;
    double y_upper = 0.0;  // C1 T
    double C2_0 = 0.0;     // C2 at t = 0
    bool lfo_holds = false;
    double lfo_min = 0.0;
    bool lyapunov_valid = false;  // false when the denominator is <= 0
    double lyapunov_sup = 0.0;    // scan supremum (coarse grid)
    double lyapunov_sup_refined = 0.0;  // doubled grid, convergence check
    std::vector<CondReport> prop_conditions;
    YBoundReport ybounds;
    std::vector<std::string> notes;
};

// sol/paths may be null: then the Y-bound section is skipped (verify-only
// runs evaluate the parameter conditions without solving).
VerificationReport verify_all(const GeneratorContext& ctx,
                              const BsdeSolution* sol, const PathSet* paths);

}  // namespace ezbsde
