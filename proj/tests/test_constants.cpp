#include <doctest.h>

#include <cmath>

#include "mfbm/constants.hpp"
#include "mfbm/quadrature.hpp"
#include "mfbm/special.hpp"

using namespace mfbm;
namespace cn = mfbm::constants;

namespace {

// direct quadrature of int_0^inf (A x^-p / (1 + A x^-p))^2 x^r dx, used as
// the oracle for the gamma closed form
double master_integral_oracle(double a, double p, double r) {
    GradedIntegrator quad;
    auto f = [&](double x) {
        const double u = a * std::pow(x, -p);
        const double v = u / (1.0 + u);
        return v * v * std::pow(x, r);
    };
    const double cutoff = std::max(8.0, std::pow(8.0 * a, 1.0 / p));
    double head = quad.zero_graded(f, 1.0) + quad.composite(f, 1.0, cutoff, 256);
    // tail: (A x^-p/(1+A x^-p))^2 = A^2 x^-2p (1 + A x^-p)^{-2}, expanded
    double tail = 0.0, coef = a * a;
    for (int m = 0; m < 300; ++m) {
        const double term = coef * tail_power_log(cutoff, (2.0 + m) * p - r, 0);
        tail += term;
        if (std::abs(term) < 1e-18 * (head + tail)) break;
        coef *= -a * (m + 2.0) / (m + 1.0);
    }
    return head + tail;
}

}  // namespace

TEST_CASE("master integral closed form") {
    // I(0) at A=1, p=0.6 equals (1/0.6) Gamma(5/3) Gamma(1/3)
    CHECK(cn::master_integral(1.0, 0.6, 0.0) ==
          doctest::Approx(std::tgamma(5.0 / 3.0) * std::tgamma(1.0 / 3.0) / 0.6).epsilon(1e-13));
    // gamma evaluation against quadrature
    for (double a : {0.3, 1.0, 2.5}) {
        for (double r : {0.0, -0.2, 0.15}) {
            CHECK(cn::master_integral(a, 0.6, r) ==
                  doctest::Approx(master_integral_oracle(a, 0.6, r)).epsilon(1e-8));
        }
    }
    // I(0) with A = c_H(0.8) is J0/2 for sigma = 1
    const double ch = spectral::constants(HurstIndex(0.8)).c_h;
    CHECK(cn::master_integral(ch, 0.6, 0.0) == doctest::Approx(0.14105).epsilon(2e-3));
    // Gamma pole excluded: (r+1)/p = 2
    CHECK_THROWS_AS(cn::master_integral(1.0, 0.6, 0.2), std::domain_error);
    CHECK_THROWS_AS(cn::master_integral(1.0, 0.6, -1.0), std::domain_error);
}

TEST_CASE("closed-form information constants at the reference point") {
    const Theta theta(1.0, HurstIndex(0.8));
    const auto jc = cn::j_constants(theta);
    CHECK(std::abs(jc.j0 - 0.2820) <= 5e-4);
    CHECK(std::abs(jc.jperp - 34.1772) <= 0.02);
    CHECK(jc.m == doctest::Approx(jc.j1 / jc.j0).epsilon(1e-14));
    CHECK(jc.jperp > 0.0);

    // algebraic identity: Jperp = J0 (4/p^2) (psi1(1/p) + psi1(2 - 1/p))
    const double p = 0.6;
    const double ident = jc.j0 * 4.0 / (p * p) * (trigamma(1.0 / p) + trigamma(2.0 - 1.0 / p));
    CHECK(jc.jperp == doctest::Approx(ident).epsilon(1e-10));

    CHECK_THROWS_AS(cn::j_constants(Theta(1.0, HurstIndex(0.6))), std::domain_error);
}

TEST_CASE("scale covariance of J0 in sigma") {
    for (double h : {0.78, 0.85, 0.9}) {
        const double p = 2.0 * h - 1.0;
        const double base = cn::j_constants(Theta(1.0, HurstIndex(h))).j0;
        for (double s : {0.5, 2.0, 3.7}) {
            const double scaled = cn::j_constants(Theta(s, HurstIndex(h))).j0;
            CHECK(scaled == doctest::Approx(base * std::pow(s, 2.0 / p - 4.0)).epsilon(1e-10));
        }
    }
}

TEST_CASE("quadrature oracle agrees with the closed forms") {
    const Theta theta(1.0, HurstIndex(0.8));
    const auto cf = cn::j_constants(theta);
    const auto oc = cn::j_constants_oracle(theta);
    CHECK(oc.j0 == doctest::Approx(cf.j0).epsilon(1e-6));
    CHECK(oc.j1 == doctest::Approx(cf.j1).epsilon(1e-6));
    CHECK(oc.j2 == doctest::Approx(cf.j2).epsilon(1e-6));

    const auto oc2 = cn::j_constants_oracle(Theta(0.5, HurstIndex(0.9)));
    CHECK(oc2.jperp > 0.0);
}

TEST_CASE("T constants in the fBm-dominated regime") {
    const auto t = cn::t_constants(HurstIndex(0.3));
    CHECK(std::isfinite(t[0]));
    CHECK(t[1] > 0.0);
    // Cauchy-Schwarz with the stated normalizations: T2 >= T1^2 / 2
    CHECK(t[1] >= 0.5 * t[0] * t[0]);
    // independent high-precision oracle values (Hurwitz-zeta route), frozen
    CHECK(t[0] == doctest::Approx(0.874271836153).epsilon(1e-6));
    CHECK(t[1] == doctest::Approx(3.70798999174).epsilon(1e-6));
    CHECK_THROWS_AS(cn::t_constants(HurstIndex(0.6)), std::domain_error);
}

TEST_CASE("limiting information matrices by regime") {
    const auto sup = cn::limit_information(Theta(1.0, HurstIndex(0.8)));
    CHECK(sup.regime == Regime::supercritical);
    CHECK(sup.projection_required);
    CHECK(sup.matrix[0][1] == 0.0);
    CHECK(sup.matrix[0][0] == doctest::Approx(0.0897).epsilon(0.01));
    CHECK(sup.matrix[1][1] == doctest::Approx(2.7197).epsilon(0.01));
    CHECK(sup.normalization == "sqrt(T_n)");

    const auto sub = cn::limit_information(Theta(1.0, HurstIndex(0.6)));
    CHECK(sub.regime == Regime::subcritical);
    CHECK_FALSE(sub.projection_required);
    CHECK(sub.matrix[0][1] == sub.matrix[1][0]);
    CHECK(sub.matrix[0][0] * sub.matrix[1][1] - sub.matrix[0][1] * sub.matrix[1][0] > 0.0);
    // independent high-precision oracle values (Hurwitz-zeta route), frozen
    CHECK(sub.matrix[0][0] == doctest::Approx(2.16426164137).epsilon(1e-6));
    CHECK(sub.matrix[0][1] == doctest::Approx(1.07187978886).epsilon(1e-6));
    CHECK(sub.matrix[1][1] == doctest::Approx(7.46756437117).epsilon(1e-6));

    const auto pure = cn::limit_information(Theta(2.0, HurstIndex(0.3)));
    CHECK(pure.regime == Regime::fbm_dominated);
    CHECK(pure.matrix[0][0] == doctest::Approx(0.5).epsilon(1e-14));  // 2 / sigma^2
    CHECK(pure.matrix[0][1] == pure.matrix[1][0]);
    CHECK(pure.matrix[0][0] * pure.matrix[1][1] - pure.matrix[0][1] * pure.matrix[1][0] > 0.0);
    CHECK(pure.normalization == "sqrt(n)");

    CHECK_THROWS_AS(cn::limit_information(Theta(1.0, HurstIndex(0.75))), std::domain_error);
    CHECK_THROWS_AS(Theta(-1.0, HurstIndex(0.8)), std::invalid_argument);
}
