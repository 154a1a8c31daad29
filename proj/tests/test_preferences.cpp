#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ezbsde/preferences.hpp"

using namespace ezbsde;

TEST_CASE("theta for the baseline parameters") {
    // (1-2)/(1-1/1.2) = -6
    CHECK(theta_of(2.0, 1.2) == doctest::Approx(-6.0).epsilon(1e-14));
    CHECK(theta_of(5.0, 1.5) == doctest::Approx(-12.0).epsilon(1e-14));
}

TEST_CASE("parameter domain is enforced") {
    CHECK_THROWS_AS(make_preferences(0.08, 0.5, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(make_preferences(0.08, 2.0, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(make_preferences(-0.01, 2.0, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(make_preferences(0.08, 1.0, 1.2), std::invalid_argument);
}

TEST_CASE("aggregator fixed values") {
    Preferences p = make_preferences(0.08, 2.0, 1.2);
    // f(c, v) = delta c^{1-1/psi}/(1-1/psi) ((1-gamma)v)^{1-1/theta}
    //           - delta theta v
    // at c = 1, v = -1: 0.08*6*1 + 0.08*(-6)*(-1)*(-1)... spelled out:
    // delta/(1-1/psi) = 0.48, ((1-gamma)(-1))^{7/6} = 1, -delta*theta*(-1)
    // = -0.48, so f = 0.
    CHECK(std::abs(aggregator_f(1.0, -1.0, p)) < 1e-15);
    // c = 0 kills the first term: f = -delta*theta*v = 0.48*(-1)
    CHECK(aggregator_f(0.0, -1.0, p) == doctest::Approx(-0.48).epsilon(1e-14));
}

TEST_CASE("two aggregator forms agree off the special points") {
    Preferences p = make_preferences(0.08, 2.0, 1.2);
    for (double c : {0.01, 0.009, 0.5, 2.0})
        for (double v : {-0.2, -1.0, -7.5}) {
            double a = aggregator_f(c, v, p);
            double b = aggregator_f_normalized(c, v, p);
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
        }
}

TEST_CASE("aggregator domain guards") {
    Preferences p = make_preferences(0.08, 2.0, 1.2);
    CHECK_THROWS_AS(aggregator_f(1.0, 0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(aggregator_f(1.0, 0.5, p), std::invalid_argument);
    CHECK_THROWS_AS(aggregator_f(-1.0, -1.0, p), std::invalid_argument);
}

TEST_CASE("bequest utility") {
    CHECK(bequest_U(1.0, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(bequest_U(2.0, 2.0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK_THROWS_AS(bequest_U(0.0, 2.0), std::invalid_argument);
}

TEST_CASE("scale-free forms match the raw aggregator") {
    Preferences p = make_preferences(0.08, 2.0, 1.2);
    // V = W^{1-gamma} h: ratio and over-v forms must agree with f itself
    for (double W : {0.5, 1.0, 3.0})
        for (double chat : {0.02, 0.08})
            for (double h : {-0.1, -1.0, -4.0}) {
                double v = std::pow(W, 1.0 - p.gamma) * h;
                double f = aggregator_f(chat * W, v, p);
                CHECK(aggregator_ratio(chat, h, p) ==
                      doctest::Approx(f / std::pow(W, 1.0 - p.gamma))
                          .epsilon(1e-12));
                CHECK(aggregator_over_v(chat, h, p) ==
                      doctest::Approx(f / v).epsilon(1e-12));
            }
}

TEST_CASE("f/v stays bounded as the value ratio vanishes") {
    Preferences p = make_preferences(0.08, 2.0, 1.2);
    // limit h -> 0-: the consumption term dies (theta < 0) leaving
    // -delta*theta = 0.48
    CHECK(aggregator_over_v(0.05, -1e-14, p) ==
          doctest::Approx(0.48).epsilon(1e-2));
    CHECK(aggregator_over_v(0.05, -1e-60, p) ==
          doctest::Approx(0.48).epsilon(1e-9));
}
