#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ezbsde/regression.hpp"

using namespace ezbsde;

TEST_CASE("exact polynomial recovery") {
    std::vector<double> x, y;
    for (int i = 0; i <= 200; ++i) {
        double xi = -1.0 + 2.0 * i / 200.0;
        x.push_back(xi);
        y.push_back(2.0 - xi + 0.5 * xi * xi * xi);
    }
    PolyFit f = fit_poly(x, y, 3);
    for (double q : {-0.9, -0.2, 0.0, 0.4, 1.0})
        CHECK(f(q) == doctest::Approx(2.0 - q + 0.5 * q * q * q)
                          .epsilon(1e-8));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("narrow state ranges stay conditioned") {
    // CIR-like band around 0.0225: raw monomials of x would be hopeless
    std::vector<double> x, y;
    for (int i = 0; i <= 400; ++i) {
        double xi = 0.02 + 0.005 * i / 400.0;
        x.push_back(xi);
        y.push_back(1.0 + 40.0 * (xi - 0.0225));
    }
    PolyFit f = fit_poly(x, y, 3);
    CHECK(f(0.0225) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f(0.024) == doctest::Approx(1.0 + 40.0 * 0.0015).epsilon(1e-9));
}

TEST_CASE("noisy fit has sensible R^2") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::vector<double> x, y;
    for (int i = 0; i < 5000; ++i) {
        double xi = -2.0 + 4.0 * i / 5000.0;
        x.push_back(xi);
        y.push_back(3.0 * xi + noise(rng));
    }
    PolyFit f = fit_poly(x, y, 1);
    CHECK(f.r2 > 0.97);
    CHECK(f.r2 < 1.0);
    CHECK(f(1.0) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("degenerate x collapses to the mean") {
    std::vector<double> x(100, 0.17), y;
    for (int i = 0; i < 100; ++i) y.push_back(i % 2 ? 1.0 : 3.0);
    PolyFit f = fit_poly(x, y, 3);
    CHECK(f(0.17) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f(123.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("evaluation clamps to the training range") {
    std::vector<double> x, y;
    for (int i = 0; i <= 100; ++i) {
        double xi = static_cast<double>(i) / 100.0;
        x.push_back(xi);
        y.push_back(xi * xi);
    }
    PolyFit f = fit_poly(x, y, 2);
    // outside [0, 1] the fit returns the boundary value, not an extrapolation
    CHECK(f(5.0) == doctest::Approx(f(1.0)).epsilon(1e-13));
    CHECK(f(-3.0) == doctest::Approx(f(0.0)).epsilon(1e-13));
}

TEST_CASE("mean and standard deviation helpers") {
    std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
    CHECK(mean_of(v) == doctest::Approx(2.5).epsilon(1e-15));
    // sample sd with n-1: sqrt(5/3)
    CHECK(sd_of(v) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-14));
    CHECK(sd_of({7.0}) == 0.0);
}

TEST_CASE("mismatched or empty inputs throw") {
    CHECK_THROWS(fit_poly({1.0, 2.0}, {1.0}, 1));
    CHECK_THROWS(fit_poly({}, {}, 1));
}
