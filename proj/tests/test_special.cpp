#include <doctest.h>

#include <cmath>

#include "mfbm/special.hpp"

using namespace mfbm;

TEST_CASE("digamma at classical points") {
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
    CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-12));
    CHECK(digamma(2.0) == doctest::Approx(0.42278433509846713).epsilon(1e-12));
    CHECK(digamma(5.0 / 3.0) == doctest::Approx(0.1817655842134116).epsilon(1e-12));
    // recurrence psi(x+1) = psi(x) + 1/x
    for (double x : {0.2, 0.77, 3.4, 11.0}) CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-12));
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
}

TEST_CASE("trigamma at classical points") {
    CHECK(trigamma(1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
    CHECK(trigamma(0.5) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-12));
    CHECK(trigamma(2.0) == doctest::Approx(M_PI * M_PI / 6.0 - 1.0).epsilon(1e-12));
    // reflection at 1/3: psi1(1/3) + psi1(2/3) = 4 pi^2 / 3
    CHECK(trigamma(1.0 / 3.0) + trigamma(2.0 / 3.0) ==
          doctest::Approx(4.0 * M_PI * M_PI / 3.0).epsilon(1e-12));
    for (double x : {0.31, 1.6, 4.2}) CHECK(trigamma(x + 1.0) == doctest::Approx(trigamma(x) - 1.0 / (x * x)).epsilon(1e-11));
}

TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
    CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-7));
}
