#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mfbm/scores.hpp"

using namespace mfbm;

TEST_CASE("log-likelihood of the diagonal model") {
    const Theta theta(1.0, HurstIndex(0.5));
    const SamplingScheme scheme(64, 0.4);
    const CovModel model(theta, scheme);
    const double n = 64.0;
    const double expect = -0.5 * n * std::log(2.0 * M_PI) -
                          0.5 * n * std::log(scheme.delta() * (1.0 + model.gamma()));
    CHECK(log_lik(model, Eigen::VectorXd::Zero(64)) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("log-likelihood against a dense oracle") {
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(64, 0.3);
    const CovModel model(theta, scheme);
    const auto path = mfbm_increments(theta, scheme, 17);

    Eigen::MatrixXd v = scheme.delta() * (model.gamma() * model.t_dense());
    v.diagonal().array() += scheme.delta();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
    const double log_det = es.eigenvalues().array().log().sum();
    const double quad = path.x.dot(es.operatorInverseSqrt() * es.operatorInverseSqrt() * path.x);
    const double oracle = -0.5 * 64.0 * std::log(2.0 * M_PI) - 0.5 * log_det - 0.5 * quad;
    CHECK(log_lik(model, path.x) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("score identities hold exactly on every path") {
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(128, 0.3);
    const CovModel model(theta, scheme);
    const auto& tr = model.traces();
    const FgnSampler sampler(theta.hurst, scheme.n);

    for (int r = 0; r < 32; ++r) {
        const auto x = mfbm_increments_with(sampler, theta, scheme, 5, r);
        const auto se = scores(model, x);
        const double tol = 1e-10 * (std::abs(se.s_h) + 1.0);
        CHECK(std::abs(se.s_h - theta.sigma * std::log(model.delta()) * se.s_sigma - se.r_h) <= tol);
        CHECK(std::abs(se.r_h_perp + 0.5 * theta.sigma * tr.a_n * se.s_sigma - se.r_h) <= tol);
    }
}

TEST_CASE("score sandwich equals the whitened quadratic form") {
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(128, 0.3);
    const CovModel model(theta, scheme);
    const auto& tr = model.traces();
    const auto path = mfbm_increments(theta, scheme, 23);

    // whitened route: z = L^{-1} x / sqrt(Delta), kernel L^{-1} T L^{-T}
    const Eigen::VectorXd z = model.whiten(path.x);
    Eigen::MatrixXd a = model.gamma() * model.t_dense();
    a.diagonal().array() += 1.0;
    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    Eigen::MatrixXd w = model.t_dense();
    llt.matrixL().solveInPlace(w);
    Eigen::MatrixXd wt = w.transpose();
    llt.matrixL().solveInPlace(wt);
    const double q_c = z.dot(wt.selfadjointView<Eigen::Lower>() * z);
    const double s_sigma_white = model.gamma() / theta.sigma * (q_c - tr.tr_c);

    const auto se = scores(model, path.x);
    CHECK(se.s_sigma == doctest::Approx(s_sigma_white).epsilon(1e-8));
}

TEST_CASE("scores are centered and the projected pair is uncorrelated") {
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(512, 0.3);
    const CovModel model(theta, scheme);
    const auto& tr = model.traces();
    const FgnSampler sampler(theta.hurst, scheme.n);

    const int reps = 2000;
    std::vector<double> s_sig(reps), r_perp(reps), s_h(reps), r_h(reps);
    for (int r = 0; r < reps; ++r) {
        const auto x = mfbm_increments_with(sampler, theta, scheme, 31, r);
        const auto se = scores(model, x);
        s_sig[r] = se.s_sigma;
        r_perp[r] = se.r_h_perp;
        s_h[r] = se.s_h;
        r_h[r] = se.r_h;
    }
    auto mean = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double t : v) s += t;
        return s / v.size();
    };
    auto sd = [&](const std::vector<double>& v) {
        const double m = mean(v);
        double s = 0.0;
        for (double t : v) s += (t - m) * (t - m);
        return std::sqrt(s / (v.size() - 1.0));
    };
    // centering: all four quantities have mean 0 within 3 SE
    for (const auto* v : {&s_sig, &r_perp, &s_h, &r_h})
        CHECK(std::abs(mean(*v)) < 3.0 * sd(*v) / std::sqrt(static_cast<double>(reps)));

    // Wick variance: Var(S_sigma) = 2 (gamma/sigma)^2 tr(C^2), 3 SE band
    const double var_s = sd(s_sig) * sd(s_sig);
    const double expect = 2.0 * model.gamma() * model.gamma() * tr.tr_c2;
    CHECK(std::abs(var_s - expect) < 3.0 * expect * std::sqrt(2.0 / reps));

    // exact orthogonality shows as vanishing sample correlation
    const double ms = mean(s_sig), mp = mean(r_perp);
    double cov = 0.0;
    for (int r = 0; r < reps; ++r) cov += (s_sig[r] - ms) * (r_perp[r] - mp);
    cov /= (reps - 1.0);
    const double corr = cov / (sd(s_sig) * sd(r_perp));
    CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("rate matrix arithmetic at Delta = 0.01") {
    // Delta = 10000^{-0.5} = 0.01, so the removal row carries -sigma ln(Delta) = ln(100)
    const SamplingScheme fine(10000, 0.5);
    CHECK(-1.0 * std::log(fine.delta()) == doctest::Approx(4.605170185988091).epsilon(1e-12));
}

TEST_CASE("rate matrices") {
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(100, 0.5);  // Delta = 0.1
    const CovModel model(theta, scheme);

    const auto rm = rate_matrices(model, RateVariant::empirical);
    CHECK(rm.m1[1][0] == doctest::Approx(std::log(10.0)).epsilon(1e-12));
    CHECK(rm.m1[0][0] == 1.0);
    CHECK(rm.m1[0][1] == 0.0);
    CHECK(rm.m[1][0] == doctest::Approx(rm.m1[1][0] - 0.5 * rm.a_n_used).epsilon(1e-12));
    CHECK(rm.m[0][0] == 1.0);
    CHECK(rm.m[1][1] == 1.0);
    CHECK(rm.a_n_used == doctest::Approx(model.traces().a_n));

    const auto rd = rate_matrices(model, RateVariant::deterministic);
    const auto jc = constants::j_constants(theta);
    CHECK(rd.a_n_used == doctest::Approx(2.0 * std::log(10.0) + jc.m).epsilon(1e-12));

    // non-supercritical: projection step degenerates to the identity
    const CovModel sub(Theta(1.0, HurstIndex(0.6)), SamplingScheme(64, 0.3));
    const auto rs = rate_matrices(sub, RateVariant::empirical);
    CHECK(rs.m[1][0] == doctest::Approx(rs.m1[1][0]));
    CHECK(rs.m2[1][0] == 0.0);
}

TEST_CASE("deterministic projection coefficient approaches the empirical one") {
    double prev = -1.0;
    for (long n : {512L, 1024L}) {
        const CovModel model(Theta(1.0, HurstIndex(0.8)), SamplingScheme(n, 0.3));
        const double a_emp = rate_matrices(model, RateVariant::empirical).a_n_used;
        const double a_det = rate_matrices(model, RateVariant::deterministic).a_n_used;
        const double diff = std::abs(a_emp - a_det);
        if (prev >= 0.0) CHECK(diff < prev);
        prev = diff;
    }
}

TEST_CASE("lan check") {
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(256, 0.3);
    const CovModel model(theta, scheme);
    const auto info = constants::limit_information(theta);
    const auto path = mfbm_increments(theta, scheme, 41);

    const auto zero = lan_check(model, {0.0, 0.0}, path.x, info);
    CHECK(zero.llr_exact == 0.0);
    CHECK(zero.llr_predicted == 0.0);
    CHECK(zero.gap == 0.0);

    const auto lc = lan_check(model, {0.0, 1.0}, path.x, info);
    CHECK(std::isfinite(lc.gap));
    CHECK(lc.gap == lc.llr_exact - lc.llr_predicted);

    // the local parameter must stay inside the supercritical regime
    CHECK_THROWS_AS(lan_check(model, {0.0, -1e4}, path.x, info), std::domain_error);
    const CovModel sub(Theta(1.0, HurstIndex(0.6)), SamplingScheme(64, 0.3));
    CHECK_THROWS_AS(perturbed_theta(sub, {1.0, 0.0}), std::domain_error);
}
