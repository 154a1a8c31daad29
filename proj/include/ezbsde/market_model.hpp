#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ezbsde {

struct ConstraintSet;  // constraint_set.hpp

enum class ModelKind { BlackScholes, LinearDiffusion, Heston };

// Market coefficients at one (t, x). All built-ins are one asset / one state
// factor, so everything is scalar; rho_perp = sqrt(1 - rho^2) keeps the
// correlation identity rho^2 + rho_perp^2 = 1 exact.
struct MarketCoeffs {
    double b = 0;         // state drift
    double a = 0;         // state diffusion
    double r = 0;         // short rate
    double mu = 0;        // excess return of the risky asset
    double sigma = 0;     // asset volatility (> 0)
    double rho = 1;       // corr(asset noise, state noise)
    double rho_perp = 0;  // orthogonal complement weight
};

struct MarketModel {
    ModelKind kind = ModelKind::BlackScholes;
    int state_dim = 1;
    int asset_dim = 1;
    double x0 = 0.0;

    // Raw parameters. Which ones matter depends on kind:
    //   BlackScholes:    r0 (rate), mu0 (excess return), sig (vol)
    //   LinearDiffusion: r(x) = r0 + r1*max(-100, x), kappa(x) = lam0 + lam1*clamp(x, +-100),
    //                    sigma = sig, state dX = -b X dt + a dW
    //   Heston:          r(x) = r0 + r1 x, mu(x) = sig*lam*x, sigma(x) = sig*x,
    //                    state dX = b(l - X)dt + a sqrt(X) dW
    double r0 = 0, r1 = 0;
    double lam0 = 0, lam1 = 0;
    double mu0 = 0;
    double sig = 0;
    double b = 0, a = 0, l = 0;
    double rho = 1.0;
    bool feller_ok = true;  // reported at construction for Heston

    MarketCoeffs at(double t, double x) const;
    double kappa(double t, double x) const;  // mu/sigma, the market price of risk

    // true when the state has no diffusion (Black-Scholes): X is frozen at x0
    // and the BSDE degenerates to a scalar recursion with Z = 0.
    bool state_degenerate() const { return kind == ModelKind::BlackScholes; }

    // open state domain E
    double domain_lo() const;
    double domain_hi() const;

    std::string name() const;
};

MarketModel make_black_scholes(double r, double mu, double sigma);
MarketModel make_linear_diffusion(double b, double a, double sigma, double r0,
                                  double r1, double lambda0, double lambda1,
                                  double rho);
MarketModel make_heston(double b, double l, double a, double r0, double r1,
                        double sigma_scale, double lambda, double rho);

struct MarketBounds {
    double C0 = 0;     // bound on the squared market price of risk
    double r_min = 0;  // min(0, inf r); kept <= 0 so downstream bounds stay conservative
    double C_p = 0;    // norm bound for a bounded element of A = sigma' * Lambda
};

// lambda is the portfolio constraint in pi-space; C_p bounds the min-norm
// element of A = sigma' * Lambda, which is 0 whenever 0 is in Lambda. For sets
// without 0 and state-dependent sigma the bound is sampled over the grid (a
// sampled sup, since sigma may be unbounded on E).
MarketBounds market_bounds(const MarketModel& model, const ConstraintSet& lambda,
                           const std::vector<std::pair<double, double>>& grid);

}  // namespace ezbsde
