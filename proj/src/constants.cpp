#include "mfbm/constants.hpp"

#include <cmath>

#include "mfbm/quadrature.hpp"
#include "mfbm/special.hpp"

namespace mfbm {
namespace constants {
namespace {

void require_supercritical(const Theta& theta, const char* who) {
    if (classify_regime(theta.hurst) != Regime::supercritical)
        throw std::domain_error(std::string(who) + ": requires H > 3/4");
}

}  // namespace

double master_integral(double a, double p, double r) {
    if (!(a > 0.0)) throw std::domain_error("master_integral: A must be positive");
    const double q = (r + 1.0) / p;
    if (!(q > 0.0 && q < 2.0)) throw std::domain_error("master_integral: (r+1)/p must lie in (0,2)");
    return std::pow(a, q) / p * std::tgamma(q) * std::tgamma(2.0 - q);
}

InfoConstants j_constants(const Theta& theta) {
    require_supercritical(theta, "j_constants");
    const double p = theta.hurst.memory_exponent();
    const auto sc = spectral::constants(theta.hurst);
    const double ch = sc.c_h;
    const double big_ch = sc.c_h_log_deriv;

    InfoConstants out;
    out.a = theta.sigma * theta.sigma * ch;
    out.log_a = std::log(out.a);

    const double s4 = std::pow(theta.sigma, 4.0);
    out.j0 = 2.0 / s4 * master_integral(out.a, p, 0.0);
    const double shift = 2.0 / p * (out.log_a + digamma(1.0 / p) - digamma(2.0 - 1.0 / p));
    const double curv = 4.0 / (p * p) * (trigamma(1.0 / p) + trigamma(2.0 - 1.0 / p));
    out.j1 = out.j0 * (big_ch - shift);
    out.j2 = out.j0 * ((big_ch - shift) * (big_ch - shift) + curv);
    out.jperp = out.j2 - out.j1 * out.j1 / out.j0;
    out.m = out.j1 / out.j0;
    return out;
}

InfoConstants j_constants_oracle(const Theta& theta) {
    require_supercritical(theta, "j_constants_oracle");
    const double p = theta.hurst.memory_exponent();
    const auto sc = spectral::constants(theta.hurst);
    const double ch = sc.c_h;
    const double big_ch = sc.c_h_log_deriv;
    const double a = theta.sigma * theta.sigma * ch;

    auto w = [&](double x) {
        const double v = ch * std::pow(x, -p);
        const double d = 1.0 + theta.sigma * theta.sigma * v;
        return (v / d) * (v / d);
    };
    auto q = [&](double x) { return big_ch - 2.0 * std::log(x); };

    // head: graded panels near the log singularity at 0, composite to X
    const double cutoff = std::max(4.0, std::pow(4.0 * a, 1.0 / p));
    GradedIntegrator quad;
    double head0 = quad.zero_graded([&](double x) { return w(x); }, 1.0);
    double head1 = quad.zero_graded([&](double x) { return w(x) * q(x); }, 1.0);
    double head2 = quad.zero_graded([&](double x) { return w(x) * q(x) * q(x); }, 1.0);
    const int panels = 64 + static_cast<int>(8.0 * cutoff);
    head0 += quad.composite([&](double x) { return w(x); }, 1.0, cutoff, panels);
    head1 += quad.composite([&](double x) { return w(x) * q(x); }, 1.0, cutoff, panels);
    head2 += quad.composite([&](double x) { return w(x) * q(x) * q(x); }, 1.0, cutoff, panels);

    // tail: w(x) = c^2 x^{-2p} sum_{m>=0} (m+1) (-A x^{-p})^m for x >= X,
    // integrated termwise against the ln-polynomials of q(x)^k
    double tail0 = 0.0, tail1 = 0.0, tail2 = 0.0;
    double coef = ch * ch;  // (m+1) (-A)^m c^2 at m = 0
    for (int m = 0;; ++m) {
        const double qexp = (2.0 + m) * p;
        const double i0 = tail_power_log(cutoff, qexp, 0);
        const double i1 = tail_power_log(cutoff, qexp, 1);
        const double i2 = tail_power_log(cutoff, qexp, 2);
        tail0 += coef * i0;
        tail1 += coef * (big_ch * i0 - 2.0 * i1);
        tail2 += coef * (big_ch * big_ch * i0 - 4.0 * big_ch * i1 + 4.0 * i2);
        if (std::abs(coef * i0) < 1e-17 * (std::abs(head0 + tail0) + 1e-300) || m > 400) break;
        coef *= -a * (m + 2.0) / (m + 1.0);
    }

    InfoConstants out;
    out.a = a;
    out.log_a = std::log(a);
    out.j0 = 2.0 * (head0 + tail0);
    out.j1 = 2.0 * (head1 + tail1);
    out.j2 = 2.0 * (head2 + tail2);
    out.jperp = out.j2 - out.j1 * out.j1 / out.j0;
    out.m = out.j1 / out.j0;
    return out;
}

std::array<double, 2> t_constants(const HurstIndex& H) {
    if (!(H.value() < 0.5)) throw std::domain_error("t_constants: requires H < 1/2");
    GradedIntegrator quad;
    const double t1 = quad.even_symmetric([&](double l) { return spectral::log_deriv(H, l); }, M_PI) / (2.0 * M_PI);
    const double t2 = quad.even_symmetric(
                          [&](double l) {
                              const double b = spectral::log_deriv(H, l);
                              return b * b;
                          },
                          M_PI) /
                      (4.0 * M_PI);
    return {t1, t2};
}

LimitInformation limit_information(const Theta& theta) {
    LimitInformation out;
    out.regime = classify_regime(theta.hurst);
    const double s = theta.sigma;
    switch (out.regime) {
        case Regime::supercritical: {
            const auto jc = j_constants(theta);
            out.matrix[0][0] = s * s / M_PI * jc.j0;
            out.matrix[1][1] = std::pow(s, 4.0) / (4.0 * M_PI) * jc.jperp;
            out.matrix[0][1] = out.matrix[1][0] = 0.0;
            out.normalization = "sqrt(T_n)";
            out.projection_required = true;
            break;
        }
        case Regime::subcritical: {
            GradedIntegrator quad;
            const auto& H = theta.hurst;
            const double ff = quad.zero_graded([&](double l) { const double f = spectral::density(H, l); return f * f; }, M_PI);
            const double fdf = quad.zero_graded(
                [&](double l) { return spectral::density(H, l) * spectral::density_dh(H, l); }, M_PI);
            const double dfdf = quad.zero_graded(
                [&](double l) { const double d = spectral::density_dh(H, l); return d * d; }, M_PI);
            out.matrix[0][0] = 2.0 * s * s / M_PI * ff;
            out.matrix[0][1] = out.matrix[1][0] = std::pow(s, 3.0) / M_PI * fdf;
            out.matrix[1][1] = std::pow(s, 4.0) / (2.0 * M_PI) * dfdf;
            out.normalization = "sqrt(n) Delta^p";
            break;
        }
        case Regime::fbm_dominated: {
            const auto t = t_constants(theta.hurst);
            out.matrix[0][0] = 2.0 / (s * s);
            out.matrix[0][1] = out.matrix[1][0] = t[0] / s;
            out.matrix[1][1] = t[1];
            out.normalization = "sqrt(n)";
            break;
        }
    }
    return out;
}

}  // namespace constants
}  // namespace mfbm
