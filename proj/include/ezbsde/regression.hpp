#pragma once

#include <vector>

namespace ezbsde {

// Least-squares fit of y on monomials of x up to `degree`. Inputs are
// standardized to [-1, 1] over the training range before building the Gram
// matrix (keeps degree-3+ fits well conditioned on narrow state ranges like
// a CIR band). Evaluation clamps x to the training range: the fit is a
// conditional-expectation surrogate and polynomial extrapolation outside the
// sampled support is garbage.
struct PolyFit {
    std::vector<double> coef;  // coefficients in standardized coordinates
    double center = 0.0;
    double halfwidth = 1.0;  // 0.5*(x_hi - x_lo), or 1 for degenerate inputs
    double x_lo = 0.0, x_hi = 0.0;
    double r2 = 1.0;  // in-sample R^2 (1 when the target variance is ~0)

    double operator()(double x) const;
};

// ridge on the standardized Gram matrix; degenerate x-ranges (< 1e-12 wide,
// e.g. the Black-Scholes constant state) collapse to a plain mean.
PolyFit fit_poly(const std::vector<double>& x, const std::vector<double>& y,
                 int degree, double ridge = 1e-10);

double mean_of(const std::vector<double>& v);
// sample standard deviation (n-1); 0 for n < 2
double sd_of(const std::vector<double>& v);

}  // namespace ezbsde
