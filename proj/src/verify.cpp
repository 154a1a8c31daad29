#include "ezbsde/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ezbsde/constraint_set.hpp"

namespace ezbsde {

C1C2 compute_C1_C2(const MarketBounds& bounds, const Preferences& prefs,
                   double T) {
    if (T <= 0) throw std::invalid_argument("compute_C1_C2: T must be > 0");
    const double g = prefs.gamma;
    const double om = 1.0 - g;
    C1C2 out;
    out.C1 = om * bounds.r_min - prefs.delta * prefs.theta +
             2.0 * (bounds.C0 + g * (g - 1.0) * bounds.C_p * bounds.C_p);

    const double cons0 = (prefs.theta / prefs.psi) *
                         std::pow(prefs.delta, prefs.psi) *
                         std::exp(-(prefs.psi / prefs.theta) * out.C1 * T);
    const double slope =
        cons0 + om / (2.0 * g) * bounds.C0 - prefs.delta * prefs.theta;
    out.C2 = [slope, T](double t) { return slope * (T - t); };
    return out;
}

LfoResult check_lfo_condition(const MarketModel& model,
                              const Preferences& prefs,
                              const std::vector<double>& xgrid) {
    if (xgrid.empty())
        throw std::invalid_argument("check_lfo_condition: empty grid");
    const double g = prefs.gamma;
    LfoResult res;
    res.min_margin = std::numeric_limits<double>::infinity();
    for (double x : xgrid) {
        const MarketCoeffs co = model.at(0.0, x);
        // one asset: sigma' Sigma^{-1} sigma rho = rho
        const double m =
            0.5 + (2.0 * (1.0 - g) / g) * std::abs(co.rho) * std::abs(co.rho);
        res.min_margin = std::min(res.min_margin, m);
    }
    res.holds = res.min_margin > 0.0;
    return res;
}

double lyapunov_operator(const ScalarField& phi, const MarketModel& model,
                         const Preferences& prefs, double C_p, double x) {
    const MarketCoeffs co = model.at(0.0, x);
    const double g = prefs.gamma;
    const double om = 1.0 - g;
    const double two_om_g = 2.0 * om / g;
    const double rho = std::abs(co.rho);

    const double D = 0.5 + two_om_g * rho * rho;
    if (D <= 0.0) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "lyapunov_operator: denominator 1/2 + 2(1-g)/g rho^2 = "
                      "%.6g <= 0 at x = %.6g",
                      D, x);
        throw std::domain_error(buf);
    }

    const double kap = std::abs(model.kappa(0.0, x));
    const double d1 = phi.d1(x);
    const double agrad = std::abs(co.rho * co.a * d1);  // |rho a' grad phi|

    const double drift = co.b * d1 + 0.5 * co.a * co.a * phi.d2(x) -
                         two_om_g * kap * agrad - om * C_p * agrad;

    const double N = om * C_p * rho + two_om_g * kap * rho -
                     std::abs(d1 * co.a) + two_om_g * rho * agrad;

    return drift + 0.25 * N * N / D;
}

namespace {

CondReport regime_condition(const Preferences& p) {
    CondReport c;
    c.name = "regime";
    c.lhs = std::min({p.delta, p.gamma - 1.0, p.psi - 1.0});
    c.rhs = 0.0;
    c.holds = c.lhs > 0.0;
    c.note = "delta > 0, gamma > 1, psi > 1";
    return c;
}

}  // namespace

std::vector<CondReport> check_prop_exp2(double b, double a, double r1,
                                        double lambda1, double rho,
                                        const Preferences& prefs) {
    const double g = prefs.gamma;
    const double psi = prefs.psi;
    std::vector<CondReport> out;

    CondReport c1;
    c1.name = "exp2.i";
    c1.lhs = std::min(b, a);
    c1.rhs = 0.0;
    c1.holds = c1.lhs > 0.0;
    c1.note = "mean reversion and state volatility positive";
    out.push_back(c1);

    CondReport c2;
    c2.name = "exp2.ii";
    c2.lhs = r1;
    c2.rhs = 0.0;
    c2.holds = c2.lhs > 0.0;
    c2.note = "rate slope positive";
    out.push_back(c2);

    CondReport c3;
    c3.name = "exp2.iii";
    const double num = 1.0 + 4.0 * (1.0 - g) * rho * rho / g;
    const double den = 2.0 * (1.0 - g) * rho * rho / g - 1.0;
    c3.lhs = a * a / b;
    c3.rhs = num / (den * den);
    c3.holds = c3.lhs < c3.rhs;
    if (num <= 0.0) {
        char buf[120];
        std::snprintf(buf, sizeof(buf),
                      "numerator 1 + 4(1-g)rho^2/g = %.6g <= 0: condition "
                      "unattainable at this gamma/rho",
                      num);
        c3.note = buf;
    } else {
        c3.note = "a^2/b small enough for the quadratic ansatz";
    }
    out.push_back(c3);

    CondReport c4 =
        laplace_condition((psi - 1.0) * r1, b - (psi - 1.0) * a * lambda1 * rho, a);
    c4.name = "exp2.iv";
    out.push_back(c4);
    return out;
}

std::vector<CondReport> check_prop_exp1(double b, double l, double a,
                                        double sigma_scale, double lambda,
                                        double r1, double rho,
                                        const Preferences& prefs) {
    const double g = prefs.gamma;
    const double psi = prefs.psi;
    std::vector<CondReport> out;

    CondReport c1;
    c1.name = "exp1.i";
    const bool positive = b > 0.0 && l > 0.0 && a > 0.0 && sigma_scale > 0.0 &&
                          lambda > 0.0 && r1 >= 0.0;
    c1.lhs = b * l;
    c1.rhs = 0.5 * a * a;
    c1.holds = positive && c1.lhs > c1.rhs;
    if (r1 == 0.0) {
        c1.note =
            "positivity + Feller b l > a^2/2; r1 = 0 kept (constant rate, "
            "the rate-slope clause is then vacuous along with (iii))";
    } else {
        c1.note = "positivity + Feller b l > a^2/2";
    }
    out.push_back(c1);

    CondReport c2;
    c2.name = "exp1.ii";
    c2.lhs = 0.5 + 2.0 * (1.0 - g) * rho * rho / g;
    c2.rhs = 0.0;
    c2.holds = c2.lhs > 0.0;
    c2.note = "drift-domination denominator positive";
    out.push_back(c2);

    CondReport c3 = laplace_condition((psi - 1.0) * r1, b, a);
    c3.name = "exp1.iii";
    out.push_back(c3);
    return out;
}

CondReport laplace_condition(double zeta, double beta, double a) {
    if (a == 0.0)
        throw std::invalid_argument("laplace_condition: a must be nonzero");
    CondReport c;
    c.name = "laplace";
    c.lhs = zeta;
    c.rhs = beta * beta / (2.0 * a * a);
    c.holds = c.lhs < c.rhs;
    c.note = "exponential moment of the discounted rate stays finite";
    return c;
}

YBoundReport check_y_bounds(const BsdeSolution& sol,
                            const GeneratorContext& ctx, const PathSet& paths) {
    YBoundReport rep;
    const int N = sol.grid.N;
    const double T = sol.grid.T;
    rep.worst_upper = -std::numeric_limits<double>::infinity();

    // constant short rate: Black-Scholes always, the factor models when the
    // slope is switched off
    const bool const_rate = ctx.model.kind == ModelKind::BlackScholes ||
                            ctx.model.r1 == 0.0;
    C1C2 cc = compute_C1_C2(ctx.bounds, ctx.prefs, T);
    rep.lower_checked = const_rate;
    rep.worst_lower = std::numeric_limits<double>::infinity();

    for (int i = 0; i <= N; ++i) {
        const double t = sol.grid.t(i);
        const double se = sol.steps[i].se_y;
        const double lower = (1.0 - ctx.prefs.gamma) * ctx.model.r0 * (T - t) +
                             cc.C2(t) - 3.0 * se;
        for (int p = 0; p < paths.M; ++p) {
            const double y = sol.y_at(i, paths.x(p, i));
            rep.worst_upper = std::max(rep.worst_upper, y - ctx.ycap);
            if (const_rate)
                rep.worst_lower = std::min(rep.worst_lower, y - lower);
        }
    }
    rep.upper_ok = rep.worst_upper <= 1e-9;
    rep.lower_ok = !const_rate || rep.worst_lower >= -1e-9;
    if (!rep.lower_checked) rep.worst_lower = 0.0;
    return rep;
}

VerificationReport verify_all(const GeneratorContext& ctx,
                              const BsdeSolution* sol, const PathSet* paths) {
    VerificationReport rep;
    const MarketModel& m = ctx.model;
    const Preferences& pr = ctx.prefs;

    C1C2 cc = compute_C1_C2(ctx.bounds, pr, ctx.T);
    rep.C1 = cc.C1;
    rep.y_upper = cc.C1 * ctx.T;
    rep.C2_0 = cc.C2(0.0);

    // state grid for the scans: one point for the degenerate model, a band
    // around the typical range otherwise
    std::vector<double> xs;
    if (m.state_degenerate()) {
        xs.push_back(m.x0);
    } else if (m.kind == ModelKind::Heston) {
        for (int i = 0; i <= 40; ++i)
            xs.push_back(1e-3 + (4.0 * m.l - 1e-3) * i / 40.0);
    } else {
        for (int i = 0; i <= 40; ++i) xs.push_back(-0.5 + 1.0 * i / 40.0);
    }

    LfoResult lfo = check_lfo_condition(m, pr, xs);
    rep.lfo_holds = lfo.holds;
    rep.lfo_min = lfo.min_margin;
    if (!lfo.holds)
        rep.notes.push_back(
            "local Lipschitz margin 1/2 + 2(1-g)/g rho^2 is not positive: the "
            "comparison-based uniqueness argument does not apply at these "
            "parameters (solver output is still produced)");

    rep.prop_conditions.push_back(regime_condition(pr));
    if (m.kind == ModelKind::LinearDiffusion) {
        auto v = check_prop_exp2(m.b, m.a, m.r1, m.lam1, m.rho, pr);
        rep.prop_conditions.insert(rep.prop_conditions.end(), v.begin(),
                                   v.end());
    } else if (m.kind == ModelKind::Heston) {
        auto v = check_prop_exp1(m.b, m.l, m.a, m.sig, m.lam0, m.r1, m.rho, pr);
        rep.prop_conditions.insert(rep.prop_conditions.end(), v.begin(),
                                   v.end());
    }
    for (const auto& c : rep.prop_conditions) {
        if (!c.holds) {
            rep.notes.push_back("condition " + c.name +
                                " fails: " + c.note);
        }
    }

    // Lyapunov scan with the model's natural test function. Degenerate state
    // needs no ergodicity argument; for the factor models a failed denominator
    // is reported, not hidden.
    if (!m.state_degenerate()) {
        ScalarField phi;
        std::vector<double> scan;
        if (m.kind == ModelKind::Heston) {
            const double c1v = 0.01, c2v = 0.01;
            phi.f = [=](double x) { return c1v * x - c2v * std::log(x); };
            phi.d1 = [=](double x) { return c1v - c2v / x; };
            phi.d2 = [=](double x) { return c2v / (x * x); };
            for (int i = 0; i <= 400; ++i)
                scan.push_back(std::pow(10.0, -3.0 + 6.0 * i / 400.0));
        } else {
            const double c0 = 0.01;
            phi.f = [=](double x) { return c0 * x * x; };
            phi.d1 = [=](double x) { return 2.0 * c0 * x; };
            phi.d2 = [=](double) { return 2.0 * c0; };
            for (int i = 0; i <= 400; ++i)
                scan.push_back(-200.0 + 400.0 * i / 400.0);
        }
        try {
            double sup = -std::numeric_limits<double>::infinity();
            for (double x : scan)
                sup = std::max(sup,
                               lyapunov_operator(phi, m, pr, ctx.bounds.C_p, x));
            // doubled grid as a convergence check on the scan itself
            double sup2 = sup;
            for (size_t i = 0; i + 1 < scan.size(); ++i)
                sup2 = std::max(
                    sup2, lyapunov_operator(phi, m, pr, ctx.bounds.C_p,
                                            0.5 * (scan[i] + scan[i + 1])));
            rep.lyapunov_valid = true;
            rep.lyapunov_sup = sup;
            rep.lyapunov_sup_refined = sup2;
        } catch (const std::domain_error& e) {
            rep.lyapunov_valid = false;
            rep.notes.push_back(std::string("lyapunov scan aborted: ") +
                                e.what());
        }
    } else {
        rep.notes.push_back(
            "state space is a single point (constant market coefficients): "
            "lyapunov scan not applicable");
    }

    if (sol != nullptr && paths != nullptr) {
        rep.ybounds = check_y_bounds(*sol, ctx, *paths);
        if (!rep.ybounds.upper_ok)
            rep.notes.push_back("upper bound Y <= C1 T violated on some path");
        if (rep.ybounds.lower_checked && !rep.ybounds.lower_ok)
            rep.notes.push_back(
                "lower bound (1-g) r (T-t) + C2(t) violated beyond 3 "
                "regression standard errors");
    }
    return rep;
}

}  // namespace ezbsde
