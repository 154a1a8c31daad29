#include <cmath>

#include "doctest.h"
#include "ezbsde/constraint_set.hpp"
#include "ezbsde/market_model.hpp"

using namespace ezbsde;

TEST_CASE("constant-coefficient market") {
    MarketModel m = make_black_scholes(0.03, 0.05, 0.17);
    CHECK(m.state_degenerate());
    MarketCoeffs c = m.at(1.0, 0.0);
    CHECK(c.r == 0.03);
    CHECK(c.mu == 0.05);
    CHECK(c.sigma == 0.17);
    CHECK(c.a == 0.0);
    CHECK(m.kappa(0.0, 0.0) == doctest::Approx(0.05 / 0.17).epsilon(1e-15));
}

TEST_CASE("linear factor market: truncations") {
    MarketModel m = make_linear_diffusion(0.0226, 0.0189, 0.0436, 0.0014, 1.0,
                                          0.05, 1.0, -0.935);
    CHECK(!m.state_degenerate());
    // r is truncated below only: r(-200) = r0 - 100, r(50) = r0 + 50
    CHECK(m.at(0, -200.0).r == doctest::Approx(0.0014 - 100.0).epsilon(1e-15));
    CHECK(m.at(0, 50.0).r == doctest::Approx(50.0014).epsilon(1e-15));
    // kappa is truncated both sides
    CHECK(m.kappa(0, 200.0) == doctest::Approx(100.05).epsilon(1e-15));
    CHECK(m.kappa(0, -200.0) == doctest::Approx(-99.95).epsilon(1e-15));
    CHECK(m.kappa(0, 0.0) == doctest::Approx(0.05).epsilon(1e-15));
    // OU drift
    CHECK(m.at(0, 0.1).b == doctest::Approx(-0.0226 * 0.1).epsilon(1e-15));
    CHECK(m.at(0, 0.1).a == 0.0189);
    CHECK(m.at(0, 0.1).sigma == 0.0436);
    CHECK(m.at(0, 0.1).rho == -0.935);
    // mu = sigma * kappa
    CHECK(m.at(0, 0.1).mu ==
          doctest::Approx(0.0436 * (0.05 + 0.1)).epsilon(1e-13));
}

TEST_CASE("square-root volatility market") {
    MarketModel m = make_heston(5.0, 0.0225, 0.25, 0.05, 0.0, 1.0, 0.47, -0.5);
    CHECK(m.x0 == 0.0225);
    CHECK(m.feller_ok);  // 5 * 0.0225 = 0.1125 > 0.03125 = a^2/2
    MarketCoeffs c = m.at(0.0, 0.04);
    CHECK(c.sigma == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(c.mu == doctest::Approx(0.47 * 0.04).epsilon(1e-15));
    CHECK(c.a == doctest::Approx(0.25 * 0.2).epsilon(1e-15));
    CHECK(c.b == doctest::Approx(5.0 * (0.0225 - 0.04)).epsilon(1e-13));
    CHECK(c.r == 0.05);
    // the price of risk is exactly lambda, even at the origin where mu/sigma
    // is 0/0
    CHECK(m.kappa(0.0, 0.0) == 0.47);
    CHECK(m.kappa(0.0, 1e-12) == 0.47);
    // Feller violation is reported, not rejected
    MarketModel bad = make_heston(1.0, 0.01, 0.5, 0.05, 0.0, 1.0, 0.47, -0.5);
    CHECK(!bad.feller_ok);
}

TEST_CASE("correlation decomposition is exact") {
    MarketModel m = make_heston(5.0, 0.0225, 0.25, 0.05, 0.0, 1.0, 0.47, -0.5);
    MarketCoeffs c = m.at(0.0, 0.0225);
    CHECK(c.rho * c.rho + c.rho_perp * c.rho_perp ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("market bounds: constant coefficients") {
    MarketModel m = make_black_scholes(0.03, 0.05, 0.17);
    auto bd = market_bounds(m, make_interval(0.0, 0.5), {{0.0, 0.0}});
    // C0 = (mu/sigma)^2
    CHECK(bd.C0 == doctest::Approx(0.08650519031141869).epsilon(1e-15));
    CHECK(bd.r_min == 0.0);  // min(0, 0.03)
    CHECK(bd.C_p == 0.0);    // 0 is in the constraint set
}

TEST_CASE("market bounds: linear factor") {
    MarketModel m = make_linear_diffusion(0.0226, 0.0189, 0.0436, 0.0014, 1.0,
                                          0.05, 1.0, -0.935);
    std::vector<std::pair<double, double>> grid = {{0.0, 0.0}, {0.5, -0.3}};
    auto bd = market_bounds(m, make_interval(0.0, 0.5), grid);
    // kappa is clamped to [lambda0 - 100, lambda0 + 100]
    CHECK(bd.C0 == doctest::Approx(100.05 * 100.05).epsilon(1e-14));
    // rate truncation floor r0 - 100 r1 dominates any sampled value
    CHECK(bd.r_min == doctest::Approx(0.0014 - 100.0).epsilon(1e-14));
    CHECK(bd.C_p == 0.0);
}

TEST_CASE("market bounds: stochastic volatility and a set without zero") {
    MarketModel m = make_heston(5.0, 0.0225, 0.25, 0.05, 0.0, 1.0, 0.47, -0.5);
    std::vector<std::pair<double, double>> grid;
    for (int i = 1; i <= 20; ++i) grid.emplace_back(0.0, 0.01 * i);
    auto bd = market_bounds(m, make_interval(0.0, 0.1), grid);
    CHECK(bd.C0 == doctest::Approx(0.47 * 0.47).epsilon(1e-15));
    CHECK(bd.r_min == 0.0);
    CHECK(bd.C_p == 0.0);

    // constraint bounded away from zero: C_p = sup_x |sigma(x)| * min-norm
    auto bd2 = market_bounds(m, make_interval(0.3, 0.5), grid);
    CHECK(bd2.C_p == doctest::Approx(0.2 * 0.3).epsilon(1e-13));
}
