#include <doctest.h>

#include <cmath>

#include "mfbm/experiments.hpp"

using namespace mfbm;

TEST_CASE("mc report is reproducible bit-for-bit") {
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(256, 0.3);
    set_num_threads(2);
    const auto a = mc_clt(theta, scheme, 200, 9001);
    const auto b = mc_clt(theta, scheme, 200, 9001);
    CHECK(a.sample_cov[0][0] == b.sample_cov[0][0]);
    CHECK(a.sample_cov[0][1] == b.sample_cov[0][1]);
    CHECK(a.sample_cov[1][1] == b.sample_cov[1][1]);
    CHECK(a.ks_distance[0] == b.ks_distance[0]);
    CHECK(a.correlation_unprojected == b.correlation_unprojected);
    set_num_threads(0);
}

TEST_CASE("sample covariance is symmetric PSD and flags tiny R") {
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(128, 0.3);
    const auto rep = mc_clt(theta, scheme, 2, 5);
    CHECK(rep.sample_cov[0][1] == rep.sample_cov[1][0]);
    CHECK(rep.sample_cov[0][0] >= 0.0);
    CHECK(rep.sample_cov[1][1] >= 0.0);
    CHECK(rep.sample_cov[0][0] * rep.sample_cov[1][1] - rep.sample_cov[0][1] * rep.sample_cov[1][0] >= -1e-12);
    CHECK_FALSE(rep.normality_reliable);
    CHECK(rep.samples.size() == 2);

    CHECK_THROWS_AS(mc_clt(theta, scheme, 1, 5), std::invalid_argument);
}

TEST_CASE("mc variances match the exact Wick values") {
    // validates the harness against exact traces (not the asymptotic targets)
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(512, 0.3);
    const CovModel model(theta, scheme);
    const auto& tr = model.traces();
    const long reps = 600;
    const auto rep = mc_clt_with(model, reps, 77);

    const double horizon = scheme.horizon();
    const double g = model.gamma();
    const double var1 = 2.0 * g * g * tr.tr_c2 / horizon;
    const double var2 = 0.5 * g * g * tr.tr_dperp2 / horizon;
    const double band = 4.0 * std::sqrt(2.0 / static_cast<double>(reps));
    CHECK(std::abs(rep.sample_cov[0][0] / var1 - 1.0) < band);
    CHECK(std::abs(rep.sample_cov[1][1] / var2 - 1.0) < band);
    // exact orthogonality: correlation within MC noise of zero
    CHECK(std::abs(rep.correlation) < 4.0 / std::sqrt(static_cast<double>(reps)));

    // KS distance against the exact-variance normal (quadratic-form CLT is
    // already effective at this size)
    std::vector<double> first;
    first.reserve(rep.samples.size());
    for (const auto& s : rep.samples) first.push_back(s[0]);
    std::sort(first.begin(), first.end());
    double d = 0.0;
    const double sd = std::sqrt(var1);
    for (std::size_t i = 0; i < first.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-first[i] / sd / std::sqrt(2.0));
        d = std::max(d, std::max((i + 1.0) / first.size() - cdf, cdf - static_cast<double>(i) / first.size()));
    }
    CHECK(d < 0.08);
}

TEST_CASE("degeneracy report matches mc statistics") {
    const Theta theta(1.0, HurstIndex(0.8));
    const SamplingScheme scheme(256, 0.3);
    const auto deg = degeneracy_report(theta, scheme, 400, 123);
    CHECK(deg.replications == 400);
    CHECK(std::isfinite(deg.sample_correlation));
    CHECK(std::abs(deg.deterministic_correlation) <= 1.0);
    // the sample correlation estimates the deterministic one
    const double se = (1.0 - deg.deterministic_correlation * deg.deterministic_correlation) / std::sqrt(400.0);
    CHECK(std::abs(deg.sample_correlation - deg.deterministic_correlation) < 5.0 * se + 0.05);

    CHECK_THROWS_AS(degeneracy_report(Theta(1.0, HurstIndex(0.6)), scheme, 100, 1), std::domain_error);
}

TEST_CASE("trace convergence table at small sizes") {
    const Theta theta(1.0, HurstIndex(0.8));
    const auto table = trace_convergence(theta, {128, 256}, 0.3);
    REQUIRE(table.rows.size() == 2);
    for (const auto& row : table.rows) {
        CHECK(row.gap_c2 < 0.05);
        CHECK(row.exact_dperp2 > 0.0);
        CHECK(std::abs(row.a_n - row.exact_cd / row.exact_c2) < 1e-12);
    }
    CHECK(table.rows[1].gap_c2 < table.rows[0].gap_c2);
}

TEST_CASE("op/F ratios decay") {
    const auto sub = opf_decay(Theta(1.0, HurstIndex(0.6)), {128, 256, 512}, 0.3);
    REQUIRE(sub.rows.size() == 3);
    CHECK(sub.rows[1].ratio_c < sub.rows[0].ratio_c);
    CHECK(sub.rows[2].ratio_c < sub.rows[1].ratio_c);
    CHECK(sub.rate_label == "n^{p-1/2}");

    const auto fbm = opf_decay(Theta(1.0, HurstIndex(0.3)), {256, 512}, 0.3);
    CHECK(fbm.rows[1].ratio_d < fbm.rows[0].ratio_d);

    // supercritical norm-bound diagnostic: opC <= 1/gamma throughout
    const auto sup = opf_decay(Theta(1.0, HurstIndex(0.8)), {256, 512}, 0.3);
    for (std::size_t i = 0; i < sup.rows.size(); ++i) {
        const SamplingScheme s(sup.rows[i].n, 0.3);
        CHECK(sup.rows[i].op_c <= 1.0 / s.gamma(Theta(1.0, HurstIndex(0.8))) + 1e-10);
    }
    CHECK(sup.rows[1].ratio_c < sup.rows[0].ratio_c);
    CHECK(sup.rows[1].ratio_dperp < sup.rows[0].ratio_dperp);
}

TEST_CASE("op/F ratios strictly decrease along the supercritical sweep") {
    const auto sup = opf_decay(Theta(1.0, HurstIndex(0.8)), {256, 512, 1024, 2048}, 0.3);
    for (std::size_t i = 1; i < sup.rows.size(); ++i) {
        CHECK(sup.rows[i].ratio_c < sup.rows[i - 1].ratio_c);
        CHECK(sup.rows[i].ratio_dperp < sup.rows[i - 1].ratio_dperp);
    }
}

TEST_CASE("loglog slope recovers a power law") {
    std::vector<long> n{128, 256, 512, 1024};
    std::vector<double> y;
    for (long v : n) y.push_back(3.0 * std::pow(static_cast<double>(v), -0.37));
    CHECK(loglog_slope(n, y) == doctest::Approx(-0.37).epsilon(1e-12));
}
