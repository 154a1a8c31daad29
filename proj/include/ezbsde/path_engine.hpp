#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ezbsde/market_model.hpp"

namespace ezbsde {

struct TimeGrid {
    double T = 1.0;
    int N = 1;

    double dt() const { return T / N; }
    double t(int i) const { return T * static_cast<double>(i) / N; }
};

// One block of simulated state paths. Row-major per path: X has N+1 entries,
// the increment arrays N. Immutable after simulate_state returns.
struct PathSet {
    int M = 0;
    int N = 0;
    std::uint64_t seed = 0;
    std::vector<double> X;       // M x (N+1)
    std::vector<double> dW;      // M x N, state Brownian increments
    std::vector<double> dWperp;  // M x N, orthogonal increments

    double x(int p, int i) const {
        return X[static_cast<size_t>(p) * (N + 1) + i];
    }
    double dw(int p, int i) const {
        return dW[static_cast<size_t>(p) * N + i];
    }
    double dwp(int p, int i) const {
        return dWperp[static_cast<size_t>(p) * N + i];
    }
};

// Per-path RNG derived from (seed, path index): growing M appends paths
// without reshuffling existing ones.
PathSet simulate_state(const MarketModel& model, const TimeGrid& grid, int M,
                       std::uint64_t seed);

// dW^rho = rho dW + rho_perp dWperp; throws if rho^2 + rho_perp^2 != 1
// beyond 1e-10.
double correlated_increment(double rho, double rho_perp, double dw, double dwp);

// strategy evaluated along a path: (step index, t_i, X_i) -> value
using StateFn = std::function<double(int step, double t, double x)>;

// Wealth in log space (strict positivity for proportional consumption).
// chat is the consumption-to-wealth ratio, pfun the p-space investment
// (p = sigma' pi). Drift uses the trapezoid of
//   D = r + p*kappa - chat - p^2/2
// between step endpoints; the stochastic term stays left-point (p_i dW^rho_i)
// so the integral is non-anticipating. Returns ln W as an M x (N+1) array.
std::vector<double> simulate_wealth(const MarketModel& model,
                                    const TimeGrid& grid, const PathSet& paths,
                                    const StateFn& chat, const StateFn& pfun,
                                    double omega);

// --- threading helpers ------------------------------------------------
// Work is cut into fixed 4096-wide blocks regardless of the thread count, so
// per-block partial results (and hence any serial block-order reduction) are
// bit-identical no matter how many workers run. EZBSDE_THREADS overrides the
// hardware default.
int hardware_threads();
constexpr std::int64_t kParallelBlock = 4096;
std::int64_t num_blocks(std::int64_t n);
void parallel_blocks(std::int64_t n,
                     const std::function<void(std::int64_t lo, std::int64_t hi,
                                              std::int64_t block)>& fn);

}  // namespace ezbsde
