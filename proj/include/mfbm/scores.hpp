#pragma once

#include <array>

#include "mfbm/simulate.hpp"
#include "mfbm/toeplitz.hpp"

namespace mfbm {

struct Normalizers {
    double sqrt_horizon;  // sqrt(T_n)
    double l_n;           // ln(1/Delta)
    double v_n;           // sqrt(n) Delta^p
    double sqrt_n;
};

/// Exact score pair and its decomposition at the model's theta.
///   s_h = sigma ln(Delta) s_sigma + r_h            (exact identity)
///   r_h_perp = r_h - (sigma a_n / 2) s_sigma       (projection)
struct ScoreEval {
    double s_sigma = 0.0;
    double s_h = 0.0;
    double r_h = 0.0;
    double r_h_perp = 0.0;
    std::array<double, 2> xi{};  // (s_sigma, r_h_perp) / sqrt(T_n)
    std::array<double, 2> u{};   // (s_sigma / sqrt(T_n), r_h / (L_n sqrt(T_n)))
    Normalizers norms{};
};

enum class RateVariant { empirical, deterministic };

/// Lower-triangular transformations taking (S_sigma, S_H) to the decoupled
/// pair; the projection row uses either the exact trace ratio a_n or its
/// deterministic second-order replacement 2 ln(1/Delta) + m.
struct RateMatrices {
    Matrix2 m1{}, m2{}, m{};
    double a_n_used = 0.0;
    RateVariant variant = RateVariant::empirical;
};

struct LanCheck {
    std::array<double, 2> h{};
    double llr_exact = 0.0;
    double llr_predicted = 0.0;  // h . xi - h' I h / 2
    double gap = 0.0;
};

/// Gaussian log-likelihood of x under the model covariance Delta (I + gamma T).
double log_lik(const CovModel& model, const Eigen::VectorXd& x);

ScoreEval scores(const CovModel& model, const Eigen::VectorXd& x);

RateMatrices rate_matrices(const CovModel& model, RateVariant variant);

/// Local parameter at perturbation h: theta + M' h / sqrt(T_n).
Theta perturbed_theta(const CovModel& model, const std::array<double, 2>& h);

/// Log-likelihood-ratio check against the quadratic expansion; rebuilds the
/// model at the perturbed theta exactly (no linearization).
LanCheck lan_check(const CovModel& model, const std::array<double, 2>& h, const Eigen::VectorXd& x,
                   const LimitInformation& info);

/// Same with a caller-supplied perturbed model (valid if built at
/// perturbed_theta(model, h) on the same scheme); avoids refactorization in
/// replication sweeps.
LanCheck lan_check_with(const CovModel& model, const CovModel& perturbed, const std::array<double, 2>& h,
                        const Eigen::VectorXd& x, const LimitInformation& info);

}  // namespace mfbm
