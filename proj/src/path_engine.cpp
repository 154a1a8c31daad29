#include "ezbsde/path_engine.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace ezbsde {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// independent stream per (seed, path): two splitmix rounds feed mt19937_64
std::mt19937_64 path_engine_for(std::uint64_t seed, std::int64_t path) {
    std::uint64_t s = seed ^ (0xD1342543DE82EF95ULL * (static_cast<std::uint64_t>(path) + 1));
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<unsigned>(a), static_cast<unsigned>(a >> 32),
                      static_cast<unsigned>(b), static_cast<unsigned>(b >> 32)};
    return std::mt19937_64(seq);
}

constexpr double kHestonFloor = 1e-10;

}  // namespace

int hardware_threads() {
    if (const char* env = std::getenv("EZBSDE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

std::int64_t num_blocks(std::int64_t n) {
    return (n + kParallelBlock - 1) / kParallelBlock;
}

void parallel_blocks(std::int64_t n,
                     const std::function<void(std::int64_t, std::int64_t,
                                              std::int64_t)>& fn) {
    if (n <= 0) return;
    const std::int64_t nb = num_blocks(n);
    const int nt = std::min<std::int64_t>(hardware_threads(), nb);
    if (nt <= 1) {
        for (std::int64_t b = 0; b < nb; ++b)
            fn(b * kParallelBlock, std::min(n, (b + 1) * kParallelBlock), b);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= nb) return;
            try {
                fn(b * kParallelBlock, std::min(n, (b + 1) * kParallelBlock), b);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

double correlated_increment(double rho, double rho_perp, double dw,
                            double dwp) {
    if (std::abs(rho * rho + rho_perp * rho_perp - 1.0) > 1e-10)
        throw std::invalid_argument(
            "correlated_increment: rho^2 + rho_perp^2 != 1");
    return rho * dw + rho_perp * dwp;
}

PathSet simulate_state(const MarketModel& model, const TimeGrid& grid, int M,
                       std::uint64_t seed) {
    if (M < 1) throw std::invalid_argument("simulate_state: M must be >= 1");
    if (grid.N < 1) throw std::invalid_argument("simulate_state: N must be >= 1");
    if (!(model.x0 > model.domain_lo() && model.x0 < model.domain_hi()))
        throw std::invalid_argument("simulate_state: x0 outside state domain");

    const int N = grid.N;
    const double dt = grid.dt();
    const double sqdt = std::sqrt(dt);

    PathSet ps;
    ps.M = M;
    ps.N = N;
    ps.seed = seed;
    ps.X.resize(static_cast<size_t>(M) * (N + 1));
    ps.dW.resize(static_cast<size_t>(M) * N);
    ps.dWperp.resize(static_cast<size_t>(M) * N);

    // OU exact transition pieces (linear diffusion only)
    const double ou_decay = std::exp(-model.b * dt);
    const double ou_sdev =
        model.b > 0.0
            ? model.a * std::sqrt((1.0 - std::exp(-2.0 * model.b * dt)) /
                                  (2.0 * model.b))
            : model.a * sqdt;

    parallel_blocks(M, [&](std::int64_t lo, std::int64_t hi, std::int64_t) {
        for (std::int64_t p = lo; p < hi; ++p) {
            std::mt19937_64 eng = path_engine_for(seed, p);
            std::normal_distribution<double> nd;
            double* Xrow = &ps.X[static_cast<size_t>(p) * (N + 1)];
            double* dWrow = &ps.dW[static_cast<size_t>(p) * N];
            double* dWprow = &ps.dWperp[static_cast<size_t>(p) * N];
            Xrow[0] = model.x0;
            for (int i = 0; i < N; ++i) {
                const double xi1 = nd(eng);
                const double xi2 = nd(eng);
                dWrow[i] = sqdt * xi1;
                dWprow[i] = sqdt * xi2;
                switch (model.kind) {
                    case ModelKind::BlackScholes:
                        Xrow[i + 1] = Xrow[i];
                        break;
                    case ModelKind::LinearDiffusion:
                        // exact Gaussian transition, driven by the same xi1
                        // as the stored Brownian increment
                        Xrow[i + 1] = ou_decay * Xrow[i] + ou_sdev * xi1;
                        break;
                    case ModelKind::Heston: {
                        const double xp = std::max(0.0, Xrow[i]);
                        const double xn = Xrow[i] + model.b * (model.l - xp) * dt +
                                          model.a * std::sqrt(xp) * dWrow[i];
                        Xrow[i + 1] = std::max(xn, kHestonFloor);
                        break;
                    }
                }
            }
        }
    });
    return ps;
}

std::vector<double> simulate_wealth(const MarketModel& model,
                                    const TimeGrid& grid, const PathSet& paths,
                                    const StateFn& chat, const StateFn& pfun,
                                    double omega) {
    if (omega <= 0.0)
        throw std::invalid_argument("simulate_wealth: omega must be > 0");
    if (paths.N != grid.N)
        throw std::invalid_argument("simulate_wealth: grid/paths mismatch");

    const int N = grid.N;
    const double dt = grid.dt();
    std::vector<double> lnW(static_cast<size_t>(paths.M) * (N + 1));
    const double lnw0 = std::log(omega);

    parallel_blocks(paths.M, [&](std::int64_t lo, std::int64_t hi,
                                 std::int64_t) {
        for (std::int64_t p = lo; p < hi; ++p) {
            double* row = &lnW[static_cast<size_t>(p) * (N + 1)];
            row[0] = lnw0;
            // D at the left endpoint of the first step
            double x_i = paths.x(static_cast<int>(p), 0);
            double t_i = grid.t(0);
            double p_i = pfun(0, t_i, x_i);
            double c_i = chat(0, t_i, x_i);
            MarketCoeffs co = model.at(t_i, x_i);
            double D_i = co.r + p_i * (co.mu / co.sigma) - c_i - 0.5 * p_i * p_i;
            for (int i = 0; i < N; ++i) {
                const double dwrho = correlated_increment(
                    co.rho, co.rho_perp, paths.dw(static_cast<int>(p), i),
                    paths.dwp(static_cast<int>(p), i));
                // right endpoint of this step = left endpoint of the next
                const double x_n = paths.x(static_cast<int>(p), i + 1);
                const double t_n = grid.t(i + 1);
                const double p_n = pfun(i + 1, t_n, x_n);
                const double c_n = chat(i + 1, t_n, x_n);
                const MarketCoeffs cn = model.at(t_n, x_n);
                const double D_n =
                    cn.r + p_n * (cn.mu / cn.sigma) - c_n - 0.5 * p_n * p_n;
                row[i + 1] = row[i] + 0.5 * dt * (D_i + D_n) + p_i * dwrho;
                x_i = x_n;
                t_i = t_n;
                p_i = p_n;
                c_i = c_n;
                co = cn;
                D_i = D_n;
            }
        }
    });
    return lnW;
}

}  // namespace ezbsde
