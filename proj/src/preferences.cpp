#include "ezbsde/preferences.hpp"

#include <cmath>
#include <stdexcept>

namespace ezbsde {

double theta_of(double gamma, double psi) {
    if (!(gamma > 1.0))
        throw std::invalid_argument("preferences: gamma must be > 1");
    if (!(psi > 1.0))
        throw std::invalid_argument("preferences: psi must be > 1");
    return (1.0 - gamma) / (1.0 - 1.0 / psi);
}

Preferences make_preferences(double delta, double gamma, double psi) {
    if (!(delta > 0.0))
        throw std::invalid_argument("preferences: delta must be > 0");
    Preferences p;
    p.delta = delta;
    p.gamma = gamma;
    p.psi = psi;
    p.theta = theta_of(gamma, psi);  // validates gamma, psi
    return p;
}

double aggregator_f(double c, double v, const Preferences& prefs) {
    if (c < 0.0)
        throw std::invalid_argument("aggregator_f: c must be >= 0");
    if (!(v < 0.0))
        throw std::invalid_argument("aggregator_f: v must be < 0");
    const double om = 1.0 - 1.0 / prefs.psi;   // 1 - 1/psi, in (0, 1)
    const double u = (1.0 - prefs.gamma) * v;  // > 0
    // c = 0 is allowed: c^{1-1/psi} = 0 for psi > 1.
    const double cpow = (c == 0.0) ? 0.0 : std::pow(c, om);
    return prefs.delta * cpow / om * std::pow(u, 1.0 - 1.0 / prefs.theta) -
           prefs.delta * prefs.theta * v;
}

double aggregator_f_normalized(double c, double v, const Preferences& prefs) {
    if (c < 0.0)
        throw std::invalid_argument("aggregator_f: c must be >= 0");
    if (!(v < 0.0))
        throw std::invalid_argument("aggregator_f: v must be < 0");
    const double om = 1.0 - 1.0 / prefs.psi;
    const double u = (1.0 - prefs.gamma) * v;  // > 0
    const double scaled = c / std::pow(u, 1.0 / (1.0 - prefs.gamma));
    const double spow = (scaled == 0.0) ? 0.0 : std::pow(scaled, om);
    return prefs.delta * u / om * (spow - 1.0);
}

double bequest_U(double c, double gamma) {
    if (!(c > 0.0))
        throw std::invalid_argument("bequest_U: c must be > 0");
    if (!(gamma > 1.0))
        throw std::invalid_argument("bequest_U: gamma must be > 1");
    return std::pow(c, 1.0 - gamma) / (1.0 - gamma);
}

double aggregator_ratio(double chat, double h, const Preferences& prefs) {
    // f(chat W, h W^{1-gamma}) / W^{1-gamma}; h plays the role of v at W = 1.
    const double om = 1.0 - 1.0 / prefs.psi;
    const double u = (1.0 - prefs.gamma) * h;  // > 0 for h < 0
    const double cpow = (chat == 0.0) ? 0.0 : std::pow(chat, om);
    return prefs.delta * cpow / om * std::pow(u, 1.0 - 1.0 / prefs.theta) -
           prefs.delta * prefs.theta * h;
}

double aggregator_over_v(double chat, double h, const Preferences& prefs) {
    // f(c, v)/v = delta c^{1-1/psi} (1-gamma) ((1-gamma)v)^{-1/theta} / (1-1/psi)
    //             - delta theta.
    // With theta < 0 the power -1/theta is a small positive exponent, so the
    // first term vanishes as v -> 0- and grows slowly as v -> -inf.
    const double om = 1.0 - 1.0 / prefs.psi;
    const double u = (1.0 - prefs.gamma) * h;  // > 0
    const double cpow = (chat == 0.0) ? 0.0 : std::pow(chat, om);
    return prefs.delta * cpow / om * (1.0 - prefs.gamma) *
               std::pow(u, -1.0 / prefs.theta) -
           prefs.delta * prefs.theta;
}

}  // namespace ezbsde
