#pragma once

// Epstein-Zin preference parameters and the recursive-utility aggregator.
//
// Parameter regime is fixed to delta > 0, gamma > 1, psi > 1, which makes
// theta = (1 - gamma)/(1 - 1/psi) strictly negative and continuation
// utilities strictly negative.  Other regimes (gamma < 1, theta > 0) are
// rejected at construction.

namespace ezbsde {

struct Preferences {
    double delta = 0.08;  // subjective discount rate (per year)
    double gamma = 2.0;   // relative risk aversion, > 1
    double psi = 1.2;     // elasticity of intertemporal substitution, > 1
    double theta = -6.0;  // derived: (1 - gamma)/(1 - 1/psi) < 0
};

// theta = (1 - gamma)/(1 - 1/psi); throws std::invalid_argument outside
// gamma > 1, psi > 1.
double theta_of(double gamma, double psi);

// Validates the domain and fills in theta.
Preferences make_preferences(double delta, double gamma, double psi);

// Aggregator f(c, v) = delta c^{1-1/psi}/(1-1/psi) ((1-gamma)v)^{1-1/theta}
//                      - delta theta v.
// Domain: c >= 0 and v < 0 strictly (gamma > 1 needs (1-gamma)v > 0 for the
// fractional power; v = 0 is rejected because the utility is strictly
// negative in this regime).
double aggregator_f(double c, double v, const Preferences& prefs);

// The equivalent "normalized" form
//   delta (1-gamma)v/(1-1/psi) [ (c ((1-gamma)v)^{-1/(1-gamma)})^{1-1/psi} - 1 ],
// kept as an independent evaluation path for testing the algebraic identity.
double aggregator_f_normalized(double c, double v, const Preferences& prefs);

// Bequest utility U(c) = c^{1-gamma}/(1-gamma), c > 0; strictly negative.
double bequest_U(double c, double gamma);

// Scale-free forms used by the homothetic utility evaluator.  For a
// proportional strategy the continuation value factors as
// V = W^{1-gamma} h(t, X) with h < 0, and both quantities below depend only
// on the consumption-to-wealth ratio chat and the ratio h:
//
//   aggregator_ratio(chat, h) = f(chat W, h W^{1-gamma}) / W^{1-gamma}
//   aggregator_over_v(chat, h) = f(c, v)/v,  bounded, -> -delta*theta as h->0-
double aggregator_ratio(double chat, double h, const Preferences& prefs);
double aggregator_over_v(double chat, double h, const Preferences& prefs);

}  // namespace ezbsde
