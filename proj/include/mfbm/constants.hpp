#pragma once

#include <array>
#include <string>

#include "mfbm/spectral.hpp"

namespace mfbm {

struct Theta {
    double sigma;
    HurstIndex hurst;

    Theta(double s, HurstIndex h) : sigma(s), hurst(h) {
        if (!(s > 0.0)) throw std::invalid_argument("Theta: sigma must be positive");
    }

    /// sigma = 0 degenerates the model to scaled white noise; admitted only
    /// as a test fixture.
    static Theta degenerate_for_tests(double s, HurstIndex h) {
        Theta t(1.0, h);
        t.sigma = s;
        return t;
    }
};

/// Information constants of the supercritical regime, all derived from the
/// weight w(x) = (c_h |x|^{-p} / (1 + sigma^2 c_h |x|^{-p}))^2.
struct InfoConstants {
    double j0 = 0.0;     // int w
    double j1 = 0.0;     // int w (C_H - 2 ln|x|)
    double j2 = 0.0;     // int w (C_H - 2 ln|x|)^2
    double jperp = 0.0;  // j2 - j1^2 / j0
    double m = 0.0;      // j1 / j0
    double a = 0.0;      // sigma^2 c_h
    double log_a = 0.0;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Limiting covariance of the normalized score pair, with the scalar
/// normalization sequence it applies to.
struct LimitInformation {
    Regime regime;
    Matrix2 matrix{};
    std::string normalization;  // "sqrt(T_n)", "sqrt(n) Delta^p", "sqrt(n)"
    bool projection_required = false;
};

namespace constants {

/// int_0^inf (A x^{-p} / (1 + A x^{-p}))^2 x^r dx
///   = (1/p) A^{(r+1)/p} Gamma((r+1)/p) Gamma(2 - (r+1)/p),
/// valid for 0 < (r+1)/p < 2.
double master_integral(double a, double p, double r);

/// Closed forms (gamma/digamma/trigamma) for the J constants; H > 3/4 only.
InfoConstants j_constants(const Theta& theta);

/// Same constants by direct adaptive quadrature of the weight integrals,
/// with the algebraic tail beyond the quadrature cutoff summed analytically.
/// Independent of the closed-form route.
InfoConstants j_constants_oracle(const Theta& theta);

/// (T1, T2) = ((1/2pi) int b, (1/4pi) int b^2) of the log-derivative symbol;
/// H in (0, 1/2) only.
std::array<double, 2> t_constants(const HurstIndex& H);

/// Regime-dispatched limiting information matrix.
LimitInformation limit_information(const Theta& theta);

}  // namespace constants

}  // namespace mfbm
