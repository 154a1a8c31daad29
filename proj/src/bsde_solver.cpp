#include "ezbsde/bsde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ezbsde {

GeneratorContext make_context(
    const MarketModel& model, const Preferences& prefs,
    const ConstraintSet& lambda, const std::optional<ConstraintSet>& setC,
    double T, const std::vector<std::pair<double, double>>& bounds_grid) {
    if (T <= 0.0) throw std::invalid_argument("make_context: T must be > 0");
    if (setC) {
        if (setC->dim != 1)
            throw std::invalid_argument(
                "make_context: consumption set must be scalar");
        for (const auto& iv : setC->ivals)
            if (iv[0] < 0.0)
                throw std::invalid_argument(
                    "make_context: consumption set must lie in [0, inf)");
        for (double p : setC->points)
            if (p < 0.0)
                throw std::invalid_argument(
                    "make_context: consumption set must lie in [0, inf)");
        if (setC->kind == ConstraintSet::Kind::FullSpace)
            throw std::invalid_argument(
                "make_context: consumption FullSpace is spelled 'no set'");
    }
    GeneratorContext ctx;
    ctx.model = model;
    ctx.prefs = prefs;
    ctx.lambda = lambda;
    ctx.setC = setC;
    ctx.T = T;
    ctx.bounds = market_bounds(model, lambda, bounds_grid);
    const double g = prefs.gamma;
    ctx.C1 = (1.0 - g) * ctx.bounds.r_min - prefs.delta * prefs.theta +
             2.0 * (ctx.bounds.C0 + g * (g - 1.0) * ctx.bounds.C_p);
    ctx.ycap = ctx.C1 * T;
    return ctx;
}

double clamp_consumption(double y, const Preferences& prefs,
                         const ConstraintSet& setC) {
    const double cstar =
        std::pow(prefs.delta, prefs.psi) *
        std::exp(-(prefs.psi / prefs.theta) * y);
    switch (setC.kind) {
        case ConstraintSet::Kind::Interval:
        case ConstraintSet::Kind::Box:
            return std::clamp(cstar, setC.ivals[0][0], setC.ivals[0][1]);
        case ConstraintSet::Kind::UnionOfIntervals: {
            // convex objective: per-interval minimizer is the clamp; compare
            // objective values, ties to the smaller c
            const double om = 1.0 - 1.0 / prefs.psi;
            const double w = prefs.delta * prefs.theta *
                             std::exp(-y / prefs.theta);
            auto g = [&](double c) {
                return -(1.0 - prefs.gamma) * c + w * std::pow(c, om);
            };
            double best = std::numeric_limits<double>::infinity();
            double bestc = 0.0;
            bool first = true;
            for (const auto& iv : setC.ivals) {
                const double c = std::clamp(cstar, iv[0], iv[1]);
                const double v = g(c);
                if (first || v < best || (v == best && c < bestc)) {
                    best = v;
                    bestc = c;
                    first = false;
                }
            }
            return bestc;
        }
        case ConstraintSet::Kind::FiniteSet: {
            const double om = 1.0 - 1.0 / prefs.psi;
            const double w = prefs.delta * prefs.theta *
                             std::exp(-y / prefs.theta);
            double best = std::numeric_limits<double>::infinity();
            double bestc = 0.0;
            bool first = true;
            for (double c : setC.points) {
                const double v = -(1.0 - prefs.gamma) * c + w * std::pow(c, om);
                if (first || v < best || (v == best && c < bestc)) {
                    best = v;
                    bestc = c;
                    first = false;
                }
            }
            return bestc;
        }
        case ConstraintSet::Kind::FullSpace:
            return cstar;
    }
    throw std::logic_error("clamp_consumption: unknown set kind");
}

double consumption_term(double y, const GeneratorContext& ctx) {
    const Preferences& pf = ctx.prefs;
    const double yc = std::min(y, ctx.ycap);
    if (!ctx.setC) {
        return (pf.theta / pf.psi) * std::pow(pf.delta, pf.psi) *
               std::exp(-(pf.psi / pf.theta) * yc);
    }
    const double c = clamp_consumption(yc, pf, *ctx.setC);
    const double om = 1.0 - 1.0 / pf.psi;
    const double cpow = c > 0.0 ? std::pow(c, om) : 0.0;
    return -(1.0 - pf.gamma) * c +
           pf.delta * pf.theta * std::exp(-yc / pf.theta) * cpow;
}

double generator_zpart(double t, double x, double z,
                       const GeneratorContext& ctx) {
    const MarketCoeffs co = ctx.model.at(t, x);
    if (co.sigma == 0.0)
        throw std::runtime_error("generator: singular sigma at state " +
                                 std::to_string(x));
    const double g = ctx.prefs.gamma;
    const double kap = co.mu / co.sigma;
    const double rho = co.rho;
    const double u = (kap + rho * z) / g;
    const double d = distance1_scaled(ctx.lambda, co.sigma, u);
    return -0.5 * g * (1.0 - g) * d * d +
           z * z * (0.5 + (1.0 - g) * rho * rho / (2.0 * g)) +
           (1.0 - g) / g * kap * rho * z + (1.0 - g) / (2.0 * g) * kap * kap +
           (1.0 - g) * co.r - ctx.prefs.delta * ctx.prefs.theta;
}

double BsdeSolution::y_at(int i, double x) const {
    return std::min(steps[i].y_fit(x), ycap);
}

double BsdeSolution::z_at(int i, double x) const {
    return std::clamp(steps[i].z_fit(x), -kz, kz);
}

namespace {

// implicit trapezoid step: solve y = E + dt/2 (zpart + cons(y))
double picard_solve(double E, double zpart, double dt,
                    const GeneratorContext& ctx, int step_for_error) {
    double y = E;
    for (int it = 0; it < 20; ++it) {
        const double yn = E + 0.5 * dt * (zpart + consumption_term(y, ctx));
        if (std::abs(yn - y) <= 1e-12 * (1.0 + std::abs(yn))) return yn;
        y = yn;
    }
    throw std::runtime_error("solve_bsde: Picard did not converge at step " +
                             std::to_string(step_for_error));
}

// scalar recursion for degenerate-state models (Z == 0, X frozen at x0)
BsdeSolution solve_scalar(const GeneratorContext& ctx, const TimeGrid& grid,
                          double kz) {
    const int N = grid.N;
    const double dt = grid.dt();
    const double x0 = ctx.model.x0;

    BsdeSolution sol;
    sol.grid = grid;
    sol.kz = kz;
    sol.ycap = ctx.ycap;
    sol.degenerate = true;
    sol.steps.resize(N + 1);

    auto const_fit = [](double v) {
        PolyFit f;
        f.coef = {v};
        f.center = 0.0;
        f.halfwidth = 1.0;
        f.x_lo = -std::numeric_limits<double>::infinity();
        f.x_hi = std::numeric_limits<double>::infinity();
        f.r2 = 1.0;
        return f;
    };

    double y = 0.0;
    sol.steps[N].y_fit = const_fit(0.0);
    sol.steps[N].z_fit = const_fit(0.0);
    for (int i = N - 1; i >= 0; --i) {
        const double Hnext = generator_H(grid.t(i + 1), x0, y, 0.0, ctx);
        const double E = y + 0.5 * dt * Hnext;
        const double zpart = generator_zpart(grid.t(i), x0, 0.0, ctx);
        y = std::min(picard_solve(E, zpart, dt, ctx, i), ctx.ycap);
        sol.steps[i].y_fit = const_fit(y);
        sol.steps[i].z_fit = const_fit(0.0);
    }
    sol.Y0 = y;
    sol.Z0 = 0.0;
    return sol;
}

}  // namespace

BsdeSolution solve_bsde(const GeneratorContext& ctx, const TimeGrid& grid,
                        const PathSet& paths, const SolverConfig& cfg) {
    const double kz =
        cfg.kz_override > 0.0
            ? cfg.kz_override
            : 10.0 * std::sqrt(ctx.bounds.C0 + 1.0) * (1.0 + cfg.degree);

    if (ctx.model.state_degenerate()) return solve_scalar(ctx, grid, kz);

    if (paths.N != grid.N)
        throw std::invalid_argument("solve_bsde: grid/paths mismatch");
    const int N = grid.N;
    const int M = paths.M;
    const double dt = grid.dt();

    BsdeSolution sol;
    sol.grid = grid;
    sol.kz = kz;
    sol.ycap = ctx.ycap;
    sol.degenerate = false;
    sol.steps.resize(N + 1);
    {
        PolyFit zero;
        zero.coef = {0.0};
        zero.x_lo = -std::numeric_limits<double>::infinity();
        zero.x_hi = std::numeric_limits<double>::infinity();
        sol.steps[N].y_fit = zero;
        sol.steps[N].z_fit = zero;
    }

    // pathwise state: Y_{i+1} and H(t_{i+1}, ., Y_{i+1}, Z_{i+1})
    std::vector<double> ycur(M, 0.0), hcur(M, 0.0);
    std::vector<double> xi(M), target(M), evals(M), ztar(M), zi(M);

    // terminal: Y_N = 0, Z_N = 0
    parallel_blocks(M, [&](std::int64_t lo, std::int64_t hi, std::int64_t) {
        for (std::int64_t p = lo; p < hi; ++p)
            hcur[p] = generator_H(grid.t(N), paths.x(static_cast<int>(p), N),
                                  0.0, 0.0, ctx);
    });

    for (int i = N - 1; i >= 0; --i) {
        const double ti = grid.t(i);
        for (int p = 0; p < M; ++p) {
            xi[p] = paths.x(p, i);
            target[p] = ycur[p] + 0.5 * dt * hcur[p];
        }

        PolyFit efit, zfit;
        try {
            efit = fit_poly(xi, target, cfg.degree, cfg.ridge);
            for (int p = 0; p < M; ++p) {
                evals[p] = efit(xi[p]);
                ztar[p] = (target[p] - evals[p]) * paths.dw(p, i) / dt;
            }
            zfit = fit_poly(xi, ztar, cfg.degree, cfg.ridge);
        } catch (const std::exception& e) {
            throw std::runtime_error("solve_bsde: regression failed at step " +
                                     std::to_string(i) + ": " + e.what());
        }

        std::vector<int> hits(num_blocks(M), 0);
        parallel_blocks(M, [&](std::int64_t lo, std::int64_t hi,
                               std::int64_t blk) {
            int h = 0;
            for (std::int64_t p = lo; p < hi; ++p) {
                double zv = zfit(xi[p]);
                if (zv > kz || zv < -kz) {
                    ++h;
                    zv = std::clamp(zv, -kz, kz);
                }
                zi[p] = zv;
                const double zpart = generator_zpart(ti, xi[p], zv, ctx);
                const double y =
                    picard_solve(evals[p], zpart, dt, ctx, i);
                ycur[p] = std::min(y, ctx.ycap);
                hcur[p] = zpart + consumption_term(ycur[p], ctx);
            }
            hits[blk] = h;
        });

        BsdeStep& st = sol.steps[i];
        st.z_fit = zfit;
        st.r2_z = zfit.r2;
        st.trunc_hits = 0;
        for (int h : hits) st.trunc_hits += h;
        try {
            st.y_fit = fit_poly(xi, ycur, cfg.degree, cfg.ridge);
        } catch (const std::exception& e) {
            throw std::runtime_error("solve_bsde: Y refit failed at step " +
                                     std::to_string(i) + ": " + e.what());
        }
        st.r2_y = st.y_fit.r2;
        double ss = 0.0;
        for (int p = 0; p < M; ++p) {
            const double e = ycur[p] - st.y_fit(xi[p]);
            ss += e * e;
        }
        st.se_y = M > 1 ? std::sqrt(ss / (M - 1)) / std::sqrt(double(M)) : 0.0;
    }

    sol.Y0 = sol.y_at(0, ctx.model.x0);
    sol.Z0 = sol.z_at(0, ctx.model.x0);
    return sol;
}

std::vector<double> solve_ode_constant(const GeneratorContext& ctx,
                                       int nsteps) {
    if (nsteps < 1)
        throw std::invalid_argument("solve_ode_constant: nsteps must be >= 1");
    const double h = ctx.T / nsteps;
    const double x0 = ctx.model.x0;
    // autonomous after freezing coefficients: dY/dtau = H(Y) with tau = T - t
    const double zpart = generator_zpart(0.0, x0, 0.0, ctx);
    auto rhs = [&](double y) { return zpart + consumption_term(y, ctx); };

    std::vector<double> ys(nsteps + 1);
    ys[nsteps] = 0.0;  // Y(T) = 0
    double y = 0.0;
    for (int j = nsteps - 1; j >= 0; --j) {
        const double k1 = rhs(y);
        const double k2 = rhs(y + 0.5 * h * k1);
        const double k3 = rhs(y + 0.5 * h * k2);
        const double k4 = rhs(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ys[j] = y;
    }
    return ys;
}

double ode_y_at(const std::vector<double>& nodes, double T, double t) {
    const int n = static_cast<int>(nodes.size()) - 1;
    const double s = std::clamp(t / T, 0.0, 1.0) * n;
    const int j = std::min(static_cast<int>(s), n - 1);
    const double w = s - j;
    return (1.0 - w) * nodes[j] + w * nodes[j + 1];
}

}  // namespace ezbsde
