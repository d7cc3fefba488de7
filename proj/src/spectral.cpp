#include "mfbm/spectral.hpp"

#include <cmath>

#include "mfbm/quadrature.hpp"
#include "mfbm/special.hpp"

namespace mfbm {

Regime classify_regime(const HurstIndex& H) {
    const double h = H.value();
    if (h == 0.5 || h == 0.75) throw std::domain_error("classify_regime: boundary H in {1/2, 3/4} not handled");
    if (h > 0.75) return Regime::supercritical;
    if (h > 0.5) return Regime::subcritical;
    return Regime::fbm_dominated;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::supercritical: return "supercritical";
        case Regime::subcritical: return "subcritical";
        default: return "fbm_dominated";
    }
}

namespace spectral {
namespace {

// Tail sums for the aliasing series, by Euler-Maclaurin on g(t) = t^{-s}
// and g(t) = t^{-s} ln t. Cutting at b ~ 1e2 leaves an error O(b^{-s-5}).
double zeta_tail(double s, double b) {
    const double bs = std::pow(b, -s);
    double v = b * bs / (s - 1.0) + 0.5 * bs;
    v += s / 12.0 * bs / b;
    v -= s * (s + 1.0) * (s + 2.0) / 720.0 * bs / (b * b * b);
    v += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * bs / (b * b * b * b * b);
    return v;
}

double log_zeta_tail(double s, double b) {
    const double bs = std::pow(b, -s);
    const double lb = std::log(b);
    const double s1 = s - 1.0;
    double v = b * bs * (lb / s1 + 1.0 / (s1 * s1)) + 0.5 * bs * lb;
    v -= bs / b * (1.0 - s * lb) / 12.0;
    v += bs / (b * b * b) * ((s + 2.0) * (2.0 * s + 1.0) + s * (s + 1.0) - s * (s + 1.0) * (s + 2.0) * lb) / 720.0;
    return v;
}

struct SeriesEval {
    double value;     // B(lambda, H)
    double dh_value;  // dH B(lambda, H)
    int terms;
};

// Aliasing series B(lambda,H) = sum_{j>=1} (2 pi j + lambda)^{-s} + (2 pi j - lambda)^{-s},
// s = 2H+1, together with its H-derivative, truncated at an adaptive J with
// Euler-Maclaurin tail correction.
SeriesEval aliased_series(double h, double lambda) {
    const double s = 2.0 * h + 1.0;
    const double two_pi = 2.0 * M_PI;
    const double log_two_pi = std::log(two_pi);

    double sum = 0.0, dsum = 0.0;
    int j = 0;
    int block_end = 24;
    for (;;) {
        for (; j < block_end; ) {
            ++j;
            const double ap = two_pi * j + lambda;
            const double am = two_pi * j - lambda;
            const double tp = std::pow(ap, -s);
            const double tm = std::pow(am, -s);
            sum += tp + tm;
            dsum += -2.0 * (std::log(ap) * tp + std::log(am) * tm);
        }
        // tail via Hurwitz-zeta style sums at b = J + 1 +- lambda/(2 pi)
        const double bp = j + 1.0 + lambda / two_pi;
        const double bm = j + 1.0 - lambda / two_pi;
        const double pref = std::pow(two_pi, -s);
        const double tail = pref * (zeta_tail(s, bp) + zeta_tail(s, bm));
        const double dtail =
            -2.0 * pref *
            (log_two_pi * (zeta_tail(s, bp) + zeta_tail(s, bm)) + log_zeta_tail(s, bp) + log_zeta_tail(s, bm));
        // error estimate: last Euler-Maclaurin order of the tail
        const double em_err = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * pref *
                              std::pow(bm, -s - 5.0) * (1.0 + std::abs(std::log(bm)));
        if (em_err < 1e-14 * (std::abs(sum + tail) + 1e-300) || j >= 4096) {
            return {sum + tail, dsum + dtail, j};
        }
        block_end = 2 * j;
    }
}

void check_lambda(double lambda) {
    if (lambda == 0.0) throw std::domain_error("spectral density: lambda = 0");
    if (std::abs(lambda) > M_PI + 1e-12) throw std::domain_error("spectral density: |lambda| > pi");
}

}  // namespace

double autocov(const HurstIndex& H, long k) {
    const double two_h = 2.0 * H.value();
    const double a = static_cast<double>(std::labs(k));
    return 0.5 * (std::pow(a + 1.0, two_h) - 2.0 * std::pow(a, two_h) + std::pow(std::abs(a - 1.0), two_h));
}

double autocov_dh(const HurstIndex& H, long k) {
    const double two_h = 2.0 * H.value();
    const double a = static_cast<double>(std::labs(k));
    auto term = [two_h](double x) { return x > 0.0 ? std::pow(x, two_h) * std::log(x) : 0.0; };
    return term(a + 1.0) - 2.0 * term(a) + term(std::abs(a - 1.0));
}

SpectralConstants constants(const HurstIndex& H) {
    const double h = H.value();
    const double c = std::tgamma(2.0 * h + 1.0) * std::sin(M_PI * h) / (2.0 * M_PI);
    const double dlog = 2.0 * digamma(2.0 * h + 1.0) + M_PI / std::tan(M_PI * h);
    const int terms = aliased_series(h, 1.0).terms;  // representative cutoff
    return {c, dlog, terms};
}

double density(const HurstIndex& H, double lambda) {
    check_lambda(lambda);
    const double h = H.value();
    const double al = std::abs(lambda);
    const auto ser = aliased_series(h, al);
    const double c = std::tgamma(2.0 * h + 1.0) * std::sin(M_PI * h) / (2.0 * M_PI);
    const double half_sin = std::sin(0.5 * al);
    // 2 sin^2(l/2) == 1 - cos l, stable for small l; the 4 pi c prefactor
    // makes the (1/2pi)-inversion of f recover rho exactly
    return 4.0 * M_PI * c * 2.0 * half_sin * half_sin * (std::pow(al, -2.0 * h - 1.0) + ser.value);
}

double density_dh(const HurstIndex& H, double lambda) {
    check_lambda(lambda);
    const double h = H.value();
    const double al = std::abs(lambda);
    const auto ser = aliased_series(h, al);
    const auto sc = constants(H);
    const double base = std::pow(al, -2.0 * h - 1.0) + ser.value;
    const double dbase = -2.0 * std::log(al) * std::pow(al, -2.0 * h - 1.0) + ser.dh_value;
    const double half_sin = std::sin(0.5 * al);
    return 4.0 * M_PI * sc.c_h * 2.0 * half_sin * half_sin * (sc.c_h_log_deriv * base + dbase);
}

double log_deriv(const HurstIndex& H, double lambda) {
    return density_dh(H, lambda) / density(H, lambda);
}

double fourier_coefficient(const HurstIndex& H, long k) {
    const double kk = static_cast<double>(std::labs(k));
    // graded panels down to `a`, then the analytic power-law stub on (0, a]
    const int levels = 34;
    const double a = M_PI * std::pow(2.0, -levels);
    double total = 0.0;
    double hi = M_PI;
    GaussLegendre rule(24);
    for (int m = 0; m < levels; ++m) {
        const double lo = 0.5 * hi;
        total += rule.panel([&](double l) { return density(H, l) * std::cos(kk * l); }, lo, hi);
        hi = lo;
    }
    const double p = H.memory_exponent();
    const double c_eff = 2.0 * M_PI * constants(H).c_h;  // low-frequency amplitude of density()
    total += c_eff * std::pow(a, 1.0 - p) / (1.0 - p);
    return total / M_PI;
}

}  // namespace spectral
}  // namespace mfbm
