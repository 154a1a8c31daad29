#include "ezbsde/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ezbsde/constraint_set.hpp"

namespace ezbsde {

namespace {
constexpr double kLinTrunc = 100.0;  // truncation level for the linear model
}

MarketCoeffs MarketModel::at(double /*t*/, double x) const {
    MarketCoeffs c;
    c.rho = rho;
    c.rho_perp = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    switch (kind) {
        case ModelKind::BlackScholes:
            c.b = 0.0;
            c.a = 0.0;
            c.r = r0;
            c.mu = mu0;
            c.sigma = sig;
            break;
        case ModelKind::LinearDiffusion: {
            c.b = -b * x;
            c.a = a;
            c.r = r0 + r1 * std::max(-kLinTrunc, x);
            const double lam =
                lam0 + lam1 * std::clamp(x, -kLinTrunc, kLinTrunc);
            c.sigma = sig;
            c.mu = sig * lam;
            break;
        }
        case ModelKind::Heston:
            c.b = b * (l - x);
            c.a = a * std::sqrt(std::max(0.0, x));
            c.r = r0 + r1 * x;
            c.mu = sig * lam0 * x;
            c.sigma = sig * x;
            break;
    }
    return c;
}

double MarketModel::kappa(double t, double x) const {
    if (kind == ModelKind::Heston) return lam0;  // mu/sigma = lambda exactly
    const MarketCoeffs c = at(t, x);
    return c.mu / c.sigma;
}

double MarketModel::domain_lo() const {
    return kind == ModelKind::Heston ? 0.0
                                     : -std::numeric_limits<double>::infinity();
}

double MarketModel::domain_hi() const {
    return std::numeric_limits<double>::infinity();
}

std::string MarketModel::name() const {
    switch (kind) {
        case ModelKind::BlackScholes:
            return "black_scholes";
        case ModelKind::LinearDiffusion:
            return "linear_diffusion";
        case ModelKind::Heston:
            return "heston";
    }
    return "?";
}

MarketModel make_black_scholes(double r, double mu, double sigma) {
    if (sigma <= 0.0)
        throw std::invalid_argument("black_scholes: sigma must be > 0");
    MarketModel m;
    m.kind = ModelKind::BlackScholes;
    m.r0 = r;
    m.mu0 = mu;
    m.sig = sigma;
    m.rho = 1.0;  // single Brownian; W^rho = W
    m.x0 = 0.0;
    return m;
}

MarketModel make_linear_diffusion(double b, double a, double sigma, double r0,
                                  double r1, double lambda0, double lambda1,
                                  double rho) {
    if (b <= 0.0 || a <= 0.0 || sigma <= 0.0)
        throw std::invalid_argument("linear_diffusion: need b, a, sigma > 0");
    if (std::abs(rho) > 1.0)
        throw std::invalid_argument("linear_diffusion: |rho| must be <= 1");
    MarketModel m;
    m.kind = ModelKind::LinearDiffusion;
    m.b = b;
    m.a = a;
    m.sig = sigma;
    m.r0 = r0;
    m.r1 = r1;
    m.lam0 = lambda0;
    m.lam1 = lambda1;
    m.rho = rho;
    m.x0 = 0.0;
    return m;
}

MarketModel make_heston(double b, double l, double a, double r0, double r1,
                        double sigma_scale, double lambda, double rho) {
    if (b <= 0.0 || l <= 0.0 || a <= 0.0 || sigma_scale <= 0.0 || lambda <= 0.0)
        throw std::invalid_argument("heston: need b, l, a, sigma, lambda > 0");
    if (std::abs(rho) > 1.0)
        throw std::invalid_argument("heston: |rho| must be <= 1");
    MarketModel m;
    m.kind = ModelKind::Heston;
    m.b = b;
    m.l = l;
    m.a = a;
    m.sig = sigma_scale;
    m.lam0 = lambda;
    m.r0 = r0;
    m.r1 = r1;
    m.rho = rho;
    m.x0 = l;  // start at the long-run mean
    m.feller_ok = (b * l > 0.5 * a * a);  // warning-level, not an error
    return m;
}

MarketBounds market_bounds(const MarketModel& model, const ConstraintSet& lambda,
                           const std::vector<std::pair<double, double>>& grid) {
    if (grid.empty()) throw std::invalid_argument("market_bounds: empty grid");
    MarketBounds bd;

    // C0: analytic where the model structure gives it, else sampled + headroom.
    switch (model.kind) {
        case ModelKind::BlackScholes:
            bd.C0 = (model.mu0 / model.sig) * (model.mu0 / model.sig);
            break;
        case ModelKind::LinearDiffusion: {
            // kappa(x) = lam0 + lam1*clamp(x, +-100) is bounded by construction
            const double k1 = model.lam0 - model.lam1 * kLinTrunc;
            const double k2 = model.lam0 + model.lam1 * kLinTrunc;
            bd.C0 = std::max(k1 * k1, k2 * k2);
            break;
        }
        case ModelKind::Heston:
            bd.C0 = model.lam0 * model.lam0;
            break;
    }

    // Every built-in kind has the analytic C0 above; the grid only feeds
    // r_min and the (sampled) C_p. A 10%-headroom sampled C0 would only be
    // needed for kinds without a closed form, which do not exist here.
    double rmin = 0.0;
    double cp = 0.0;
    const BoundedElement be = bounded_element(lambda);
    for (const auto& [t, x] : grid) {
        const MarketCoeffs c = model.at(t, x);
        rmin = std::min(rmin, c.r);
        if (be.C_p > 0.0) cp = std::max(cp, std::abs(c.sigma) * be.C_p);
    }
    // the linear model's r is truncated below at -100, catch that even if the
    // sample grid does not reach it
    if (model.kind == ModelKind::LinearDiffusion)
        rmin = std::min(rmin, model.r0 + model.r1 * -kLinTrunc);
    bd.r_min = std::min(0.0, rmin);
    bd.C_p = cp;
    return bd;
}

}  // namespace ezbsde
