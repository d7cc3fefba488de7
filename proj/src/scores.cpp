#include "mfbm/scores.hpp"

#include <cmath>

namespace mfbm {

namespace {

Matrix2 mat_mul(const Matrix2& a, const Matrix2& b) {
    Matrix2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

}  // namespace

double log_lik(const CovModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.n()) throw std::invalid_argument("log_lik: dimension mismatch");
    const double n = static_cast<double>(model.n());
    const double log_det_v = n * std::log(model.delta()) + model.log_det_a();
    const double quad = x.dot(model.solve_a(x)) / model.delta();
    return -0.5 * n * std::log(2.0 * M_PI) - 0.5 * log_det_v - 0.5 * quad;
}

ScoreEval scores(const CovModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.n()) throw std::invalid_argument("scores: dimension mismatch");
    const auto& tr = model.traces();
    const double sigma = model.theta().sigma;
    const double gamma = model.gamma();
    const double delta = model.delta();
    const double log_delta = std::log(delta);

    const Eigen::VectorXd u = x / std::sqrt(delta);
    const Eigen::VectorXd y = model.solve_a(u);
    const Eigen::VectorXd ty = model.t_dense().selfadjointView<Eigen::Lower>() * y;
    const Eigen::VectorXd tdy = model.t_dh_dense().selfadjointView<Eigen::Lower>() * y;
    const double q_c = y.dot(ty);
    const double q_d = y.dot(tdy);
    // independent evaluation of the H-score kernel 2 ln(Delta) T + Td
    const double q_h = y.dot(2.0 * log_delta * ty + tdy);

    ScoreEval out;
    out.s_sigma = gamma / sigma * (q_c - tr.tr_c);
    out.r_h = 0.5 * gamma * (q_d - tr.tr_d);
    out.s_h = 0.5 * gamma * (q_h - (2.0 * log_delta * tr.tr_c + tr.tr_d));
    out.r_h_perp = out.r_h - 0.5 * sigma * tr.a_n * out.s_sigma;

    const double horizon = model.horizon();
    out.norms.sqrt_horizon = std::sqrt(horizon);
    out.norms.l_n = std::log(1.0 / delta);
    out.norms.v_n = std::sqrt(static_cast<double>(model.n())) *
                    std::pow(delta, model.theta().hurst.memory_exponent());
    out.norms.sqrt_n = std::sqrt(static_cast<double>(model.n()));
    out.xi = {out.s_sigma / out.norms.sqrt_horizon, out.r_h_perp / out.norms.sqrt_horizon};
    out.u = {out.s_sigma / out.norms.sqrt_horizon, out.r_h / (out.norms.l_n * out.norms.sqrt_horizon)};
    return out;
}

RateMatrices rate_matrices(const CovModel& model, RateVariant variant) {
    const double sigma = model.theta().sigma;
    const double log_delta = std::log(model.delta());
    RateMatrices out;
    out.variant = variant;
    out.m1 = {{{1.0, 0.0}, {-sigma * log_delta, 1.0}}};
    const Regime regime = classify_regime(model.theta().hurst);
    if (regime != Regime::supercritical) {
        out.m2 = {{{1.0, 0.0}, {0.0, 1.0}}};
        out.m = out.m1;
        out.a_n_used = 0.0;
        return out;
    }
    if (variant == RateVariant::empirical) {
        out.a_n_used = model.traces().a_n;
    } else {
        const auto jc = constants::j_constants(model.theta());
        out.a_n_used = 2.0 * std::log(1.0 / model.delta()) + jc.m;
    }
    out.m2 = {{{1.0, 0.0}, {-0.5 * sigma * out.a_n_used, 1.0}}};
    out.m = mat_mul(out.m2, out.m1);
    return out;
}

Theta perturbed_theta(const CovModel& model, const std::array<double, 2>& h) {
    if (classify_regime(model.theta().hurst) != Regime::supercritical)
        throw std::domain_error("perturbed_theta: requires the supercritical regime");
    const auto rm = rate_matrices(model, RateVariant::empirical);
    const double s = std::sqrt(model.horizon());
    // delta = M' h / sqrt(T_n)
    const double d_sigma = (h[0] + rm.m[1][0] * h[1]) / s;
    const double d_h = h[1] / s;
    const double sigma_h = model.theta().sigma + d_sigma;
    const double hurst_h = model.theta().hurst.value() + d_h;
    if (!(sigma_h > 0.0) || !(hurst_h > 0.0 && hurst_h < 1.0))
        throw std::domain_error("perturbed_theta: theta + h r_n^{-1} leaves the parameter space");
    return Theta(sigma_h, HurstIndex(hurst_h));
}

LanCheck lan_check_with(const CovModel& model, const CovModel& perturbed, const std::array<double, 2>& h,
                        const Eigen::VectorXd& x, const LimitInformation& info) {
    LanCheck out;
    out.h = h;
    out.llr_exact = log_lik(perturbed, x) - log_lik(model, x);
    const auto se = scores(model, x);
    const double quad = h[0] * (info.matrix[0][0] * h[0] + info.matrix[0][1] * h[1]) +
                        h[1] * (info.matrix[1][0] * h[0] + info.matrix[1][1] * h[1]);
    out.llr_predicted = h[0] * se.xi[0] + h[1] * se.xi[1] - 0.5 * quad;
    out.gap = out.llr_exact - out.llr_predicted;
    return out;
}

LanCheck lan_check(const CovModel& model, const std::array<double, 2>& h, const Eigen::VectorXd& x,
                   const LimitInformation& info) {
    if (h[0] == 0.0 && h[1] == 0.0) {
        LanCheck out;
        out.h = h;
        return out;
    }
    const CovModel perturbed(perturbed_theta(model, h), model.scheme());
    return lan_check_with(model, perturbed, h, x, info);
}

}  // namespace mfbm
