#include <doctest.h>

#include <cmath>

#include "mfbm/quadrature.hpp"

using namespace mfbm;

TEST_CASE("Gauss-Legendre panel is exact on polynomials") {
    GaussLegendre rule(12);
    auto cubic = [](double x) { return 3.0 * x * x * x - x + 2.0; };
    // antiderivative 3x^4/4 - x^2/2 + 2x on [-1, 2]
    CHECK(rule.panel(cubic, -1.0, 2.0) == doctest::Approx(15.75).epsilon(1e-13));
    // int_0^1 x^k dx = 1/(k+1)
    for (int k = 0; k < 20; ++k) {
        auto f = [k](double x) { return std::pow(x, k); };
        CHECK(rule.panel(f, 0.0, 1.0) == doctest::Approx(1.0 / (k + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("graded panels resolve integrable endpoint singularities") {
    GradedIntegrator quad;
    CHECK(quad.zero_graded([](double x) { return std::log(x); }, 1.0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(quad.zero_graded([](double x) { return 1.0 / std::sqrt(x); }, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(quad.zero_graded([](double x) { return std::pow(x, -0.8); }, 1.0) == doctest::Approx(5.0).epsilon(1e-10));
    const double lnpi = quad.even_symmetric([](double x) { return std::log(x) * std::log(x); }, 1.0);
    CHECK(lnpi == doctest::Approx(4.0).epsilon(1e-12));  // 2 int_0^1 ln^2 = 2*2
}

TEST_CASE("composite rule on a smooth integrand") {
    GradedIntegrator quad;
    CHECK(quad.composite([](double x) { return std::sin(x); }, 0.0, M_PI, 8) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("algebraic log tails against interval differences") {
    GaussLegendre rule(32);
    for (double q : {1.3, 1.9, 2.7}) {
        for (int j : {0, 1, 2}) {
            auto f = [&](double x) { return std::pow(x, -q) * std::pow(std::log(x), j); };
            const double interval = rule.panel(f, 2.0, 3.0) + rule.panel(f, 3.0, 4.0);
            CHECK(tail_power_log(2.0, q, j) - tail_power_log(4.0, q, j) ==
                  doctest::Approx(interval).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(tail_power_log(2.0, 0.9, 0), std::domain_error);
}
