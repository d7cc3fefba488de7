#pragma once

#include <stdexcept>

namespace mfbm {

/// Hurst index H in (0,1); the memory exponent p = 2H-1 is always derived,
/// never stored.
class HurstIndex {
public:
    explicit HurstIndex(double h) : h_(h) {
        if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("HurstIndex: H must lie in (0,1)");
    }
    double value() const { return h_; }
    double memory_exponent() const { return 2.0 * h_ - 1.0; }

private:
    double h_;
};

enum class Regime {
    supercritical,   // H > 3/4
    subcritical,     // 1/2 < H < 3/4
    fbm_dominated,   // H < 1/2
};

/// Throws std::domain_error at the untreated boundaries H = 1/2 and H = 3/4.
Regime classify_regime(const HurstIndex& H);
const char* regime_name(Regime r);

struct SpectralConstants {
    double c_h;            // Gamma(2H+1) sin(pi H) / (2 pi)
    double c_h_log_deriv;  // d/dH ln c_h = 2 psi(2H+1) + pi cot(pi H)
    int truncation_terms;  // series cutoff used by the density evaluations
};

namespace spectral {

/// Autocovariance of standard fGn: rho(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2.
double autocov(const HurstIndex& H, long k);

/// Entrywise H-derivative of autocov (convention 0 ln 0 = 0).
double autocov_dh(const HurstIndex& H, long k);

/// Spectral density f(lambda) of standard fGn on [-pi,pi] \ {0}, normalized so
/// that rho(k) = (1/2pi) int f(lambda) e^{ik lambda} d lambda.
double density(const HurstIndex& H, double lambda);

/// H-derivative of the density, by termwise differentiation of the series.
double density_dh(const HurstIndex& H, double lambda);

/// Log-derivative symbol density_dh / density; -2 ln|lambda| singularity at 0.
double log_deriv(const HurstIndex& H, double lambda);

SpectralConstants constants(const HurstIndex& H);

/// (1/2pi) int_{-pi}^{pi} f(lambda) cos(k lambda) d lambda, with the
/// near-zero contribution handled analytically. Recovers autocov(H, k).
double fourier_coefficient(const HurstIndex& H, long k);

}  // namespace spectral

}  // namespace mfbm
