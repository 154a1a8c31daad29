#include "ezbsde/strategy.hpp"

#include <cmath>
#include <stdexcept>

namespace ezbsde {

PortfolioChoice optimal_portfolio(double t, double x, double z_at,
                                  const GeneratorContext& ctx) {
    const MarketCoeffs co = ctx.model.at(t, x);
    if (co.sigma == 0.0)
        throw std::runtime_error("optimal_portfolio: singular sigma");
    const double u = (co.mu / co.sigma + co.rho * z_at) / ctx.prefs.gamma;
    PortfolioChoice pc;
    pc.p = project1_scaled(ctx.lambda, co.sigma, u);
    pc.pi = pc.p / co.sigma;
    return pc;
}

double optimal_consumption(double y_at, const Preferences& prefs,
                           const std::optional<ConstraintSet>& setC) {
    if (setC) return clamp_consumption(y_at, prefs, *setC);
    return std::pow(prefs.delta, prefs.psi) *
           std::exp(-(prefs.psi / prefs.theta) * y_at);
}

UtilityEstimate evaluate_utility(const PathSet& paths, const TimeGrid& grid,
                                 const StateFn& chat,
                                 const std::vector<double>& lnW,
                                 const Preferences& prefs, int degree) {
    const int N = grid.N;
    const int M = paths.M;
    const double dt = grid.dt();
    const double om1g = 1.0 - prefs.gamma;
    if (lnW.size() != static_cast<size_t>(M) * (N + 1))
        throw std::invalid_argument("evaluate_utility: lnW size mismatch");
    constexpr double kHceil = -1e-12;  // utility ratio must stay negative

    std::vector<double> P(M), phinext(M);
    parallel_blocks(M, [&](std::int64_t lo, std::int64_t hi, std::int64_t) {
        for (std::int64_t p = lo; p < hi; ++p) {
            const double lwT = lnW[static_cast<size_t>(p) * (N + 1) + N];
            P[p] = std::exp(om1g * lwT) / om1g;  // bequest U(W_T)
            const double cN =
                chat(N, grid.t(N), paths.x(static_cast<int>(p), N));
            // V_T = U(W_T) has ratio h = 1/(1-gamma)
            phinext[p] = aggregator_over_v(cN, 1.0 / om1g, prefs);
        }
    });

    std::vector<double> xi(M), ratio(M);
    for (int i = N - 1; i >= 0; --i) {
        const double ti = grid.t(i);
        for (int p = 0; p < M; ++p) {
            xi[p] = paths.x(p, i);
            const double lw = lnW[static_cast<size_t>(p) * (N + 1) + i];
            ratio[p] = P[p] * std::exp(-om1g * lw);
        }
        const PolyFit hfit = fit_poly(xi, ratio, degree);
        parallel_blocks(M, [&](std::int64_t lo, std::int64_t hi,
                               std::int64_t) {
            for (std::int64_t p = lo; p < hi; ++p) {
                const double ci = chat(i, ti, xi[p]);
                // the fit estimates h_i e^{-dt phi_i} (the step-i factor is
                // not in P yet); one fixed-point pass restores h_i
                const double ht = std::min(hfit(xi[p]), kHceil);
                const double h = std::min(
                    ht * std::exp(dt * aggregator_over_v(ci, ht, prefs)),
                    kHceil);
                const double phii = aggregator_over_v(ci, h, prefs);
                P[p] *= std::exp(0.5 * dt * (phii + phinext[p]));
                phinext[p] = phii;
            }
        });
    }

    UtilityEstimate est;
    est.v0 = mean_of(P);
    est.se = sd_of(P) / std::sqrt(static_cast<double>(M));
    return est;
}

namespace {

// Markov controls read off the BSDE solution
StateFn optimal_chat_fn(const GeneratorContext& ctx, const BsdeSolution& sol) {
    return [&ctx, &sol](int i, double /*t*/, double x) {
        return optimal_consumption(sol.y_at(i, x), ctx.prefs, ctx.setC);
    };
}

StateFn optimal_p_fn(const GeneratorContext& ctx, const BsdeSolution& sol) {
    return [&ctx, &sol](int i, double t, double x) {
        return optimal_portfolio(t, x, sol.z_at(i, x), ctx).p;
    };
}

}  // namespace

StrategyResult run_optimal(const GeneratorContext& ctx, const TimeGrid& grid,
                           const PathSet& paths, const BsdeSolution& sol,
                           double omega, int utility_degree) {
    if (sol.grid.N != grid.N)
        throw std::invalid_argument("run_optimal: grid mismatch");
    const int N = grid.N;
    const int M = paths.M;

    StrategyResult res;
    res.Y0 = sol.Y0;
    res.chat.resize(static_cast<size_t>(M) * (N + 1));
    res.pp.resize(res.chat.size());
    res.pi.resize(res.chat.size());

    parallel_blocks(M, [&](std::int64_t lo, std::int64_t hi, std::int64_t) {
        for (std::int64_t p = lo; p < hi; ++p) {
            for (int i = 0; i <= N; ++i) {
                const double x = paths.x(static_cast<int>(p), i);
                const double t = grid.t(i);
                const size_t k = static_cast<size_t>(p) * (N + 1) + i;
                res.chat[k] =
                    optimal_consumption(sol.y_at(i, x), ctx.prefs, ctx.setC);
                const PortfolioChoice pc =
                    optimal_portfolio(t, x, sol.z_at(i, x), ctx);
                res.pp[k] = pc.p;
                res.pi[k] = pc.pi;
            }
        }
    });

    const StateFn chat_fn = optimal_chat_fn(ctx, sol);
    const StateFn p_fn = optimal_p_fn(ctx, sol);
    res.lnW = simulate_wealth(ctx.model, grid, paths, chat_fn, p_fn, omega);

    const UtilityEstimate est =
        evaluate_utility(paths, grid, chat_fn, res.lnW, ctx.prefs,
                         utility_degree);
    res.V0_sim = est.v0;
    res.se_V0 = est.se;
    res.V0_closed = std::pow(omega, 1.0 - ctx.prefs.gamma) /
                    (1.0 - ctx.prefs.gamma) * std::exp(sol.Y0);
    return res;
}

UtilityEstimate perturbed_utility(const GeneratorContext& ctx,
                                  const TimeGrid& grid, const PathSet& paths,
                                  const BsdeSolution& sol, PerturbMode mode,
                                  double eps, double omega,
                                  int utility_degree) {
    const StateFn chat_base = optimal_chat_fn(ctx, sol);

    StateFn chat_fn, p_fn;
    if (mode == PerturbMode::ShiftPi) {
        chat_fn = chat_base;
        p_fn = [&ctx, &sol, eps](int i, double t, double x) {
            const PortfolioChoice pc =
                optimal_portfolio(t, x, sol.z_at(i, x), ctx);
            const double pi_pert = project1(ctx.lambda, pc.pi + eps);
            return pi_to_p(ctx.model.at(t, x).sigma, pi_pert);
        };
    } else {
        p_fn = optimal_p_fn(ctx, sol);
        chat_fn = [&ctx, &sol, eps, chat_base](int i, double t, double x) {
            double c = chat_base(i, t, x) * (1.0 + eps);
            if (ctx.setC) c = project1(*ctx.setC, c);
            return std::max(0.0, c);
        };
    }

    const std::vector<double> lnW =
        simulate_wealth(ctx.model, grid, paths, chat_fn, p_fn, omega);
    return evaluate_utility(paths, grid, chat_fn, lnW, ctx.prefs,
                            utility_degree);
}

}  // namespace ezbsde
