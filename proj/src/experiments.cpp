#include "mfbm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "mfbm/quadrature.hpp"
#include "mfbm/special.hpp"

namespace mfbm {

namespace {

// Fill out[r] = f(r) for r in [0, count) on the worker pool. Each entry is
// owned by exactly one replication index, so the result is independent of
// scheduling.
template <class F>
void parallel_replications(long count, F&& f) {
    const int workers = static_cast<int>(std::max<long>(1, std::min<long>(num_threads(), count)));
    if (workers == 1) {
        for (long r = 0; r < count; ++r) f(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (long r = w; r < count; r += workers) f(r);
        });
    }
    for (auto& th : pool) th.join();
}

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double ks_against_normal(std::vector<double> v, double variance) {
    std::sort(v.begin(), v.end());
    const double sd = std::sqrt(variance);
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double cdf = normal_cdf(v[i] / sd);
        const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
        const double lo = cdf - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

struct PairStats {
    double var0, var1, cov, corr;
};

PairStats pair_stats(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = sample_mean(a), mb = sample_mean(b);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    const double denom = static_cast<double>(a.size()) - 1.0;
    PairStats st{saa / denom, sbb / denom, sab / denom, 0.0};
    st.corr = st.cov / std::sqrt(st.var0 * st.var1);
    return st;
}

double central_moment(const std::vector<double>& v, int k) {
    const double m = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += std::pow(x - m, k);
    return s / static_cast<double>(v.size());
}

}  // namespace

MCReport mc_clt(const Theta& theta, const SamplingScheme& scheme, long replications, std::uint64_t seed) {
    const CovModel model(theta, scheme);
    return mc_clt_with(model, replications, seed);
}

MCReport mc_clt_with(const CovModel& model, long replications, std::uint64_t seed) {
    if (replications < 2) throw std::invalid_argument("mc_clt: needs at least 2 replications");
    const Theta& theta = model.theta();
    const SamplingScheme& scheme = model.scheme();
    MCReport rep{theta, scheme, replications, seed, classify_regime(theta.hurst), "", {}, {}, {}, {}, {}, {}, 0.0, 0.0, true};

    model.traces();  // force the one-time dense work before the loop
    const FgnSampler sampler(theta.hurst, scheme.n);
    const auto info = constants::limit_information(theta);
    rep.target = info.matrix;
    rep.normalization = info.normalization;
    rep.normality_reliable = replications >= 100;

    std::vector<double> comp0(replications), comp1(replications), u0(replications), u1(replications);
    parallel_replications(replications, [&](long r) {
        const Eigen::VectorXd x =
            mfbm_increments_with(sampler, theta, scheme, seed, static_cast<std::uint64_t>(r));
        const ScoreEval se = scores(model, x);
        switch (rep.regime) {
            case Regime::supercritical:
                comp0[r] = se.xi[0];
                comp1[r] = se.xi[1];
                break;
            case Regime::subcritical:
                comp0[r] = se.s_sigma / se.norms.v_n;
                comp1[r] = se.r_h / se.norms.v_n;
                break;
            case Regime::fbm_dominated:
                comp0[r] = se.s_sigma / se.norms.sqrt_n;
                comp1[r] = se.r_h / se.norms.sqrt_n;
                break;
        }
        u0[r] = se.u[0];
        u1[r] = se.u[1];
    });

    const PairStats st = pair_stats(comp0, comp1);
    rep.sample_cov = {{{st.var0, st.cov}, {st.cov, st.var1}}};
    rep.correlation = st.corr;
    rep.correlation_unprojected = pair_stats(u0, u1).corr;
    rep.samples.resize(replications);
    for (long r = 0; r < replications; ++r) rep.samples[r] = {comp0[r], comp1[r]};

    const double se_factor = std::sqrt(2.0 / (static_cast<double>(replications) - 1.0));
    rep.var_z_scores = {(st.var0 - rep.target[0][0]) / (rep.target[0][0] * se_factor),
                        (st.var1 - rep.target[1][1]) / (rep.target[1][1] * se_factor)};
    const std::vector<double>* comps[2] = {&comp0, &comp1};
    for (int i = 0; i < 2; ++i) {
        const double m2 = central_moment(*comps[i], 2);
        rep.skewness[i] = central_moment(*comps[i], 3) / std::pow(m2, 1.5);
        rep.excess_kurtosis[i] = central_moment(*comps[i], 4) / (m2 * m2) - 3.0;
        rep.ks_distance[i] = ks_against_normal(*comps[i], rep.target[i][i]);
    }
    return rep;
}

DegeneracyReport degeneracy_report(const Theta& theta, const SamplingScheme& scheme, long replications,
                                   std::uint64_t seed) {
    if (classify_regime(theta.hurst) != Regime::supercritical)
        throw std::domain_error("degeneracy_report: requires the supercritical regime");
    if (replications < 2) throw std::invalid_argument("degeneracy_report: needs at least 2 replications");

    const CovModel model(theta, scheme);
    const auto& tr = model.traces();
    const FgnSampler sampler(theta.hurst, scheme.n);

    std::vector<double> u0(replications), u1(replications), p0(replications), p1(replications);
    parallel_replications(replications, [&](long r) {
        const Eigen::VectorXd x =
            mfbm_increments_with(sampler, theta, scheme, seed, static_cast<std::uint64_t>(r));
        const ScoreEval se = scores(model, x);
        u0[r] = se.u[0];
        u1[r] = se.u[1];
        p0[r] = se.xi[0];
        p1[r] = se.xi[1];
    });

    DegeneracyReport out;
    out.replications = replications;
    out.seed = seed;
    out.sample_correlation = pair_stats(u0, u1).corr;
    out.projected_correlation = pair_stats(p0, p1).corr;
    out.deterministic_correlation = tr.tr_cd / std::sqrt(tr.tr_c2 * tr.tr_d2);
    return out;
}

ConvergenceTable trace_convergence(const Theta& theta, const std::vector<long>& n_list, double alpha) {
    ConvergenceTable table{theta, alpha, classify_regime(theta.hurst), {}};
    const auto& H = theta.hurst;
    const double p = H.memory_exponent();
    GradedIntegrator quad;

    double lead_c2_limit = 0.0;  // gamma-free limits for the sub/fbm regimes
    if (table.regime == Regime::subcritical) {
        lead_c2_limit = quad.zero_graded([&](double l) { const double f = spectral::density(H, l); return f * f; },
                                          M_PI) / M_PI;  // (1/2pi) int_{-pi}^{pi} f^2
    }

    InfoConstants jc;
    if (table.regime == Regime::supercritical) jc = constants::j_constants(theta);

    for (long n : n_list) {
        const SamplingScheme scheme(n, alpha);
        const CovModel model(theta, scheme);
        const auto& tr = model.traces();

        TraceRow row;
        row.n = n;
        row.delta = scheme.delta();
        row.gamma = model.gamma();
        const double g = row.gamma;

        auto gsym = [&](double l) { return spectral::density(H, l) / (1.0 + g * spectral::density(H, l)); };
        auto hsym = [&](double l) { return spectral::density_dh(H, l) / (1.0 + g * spectral::density(H, l)); };
        const double scale_n = static_cast<double>(n) / (2.0 * M_PI);
        row.pred_c2 = scale_n * 2.0 * quad.zero_graded([&](double l) { const double v = gsym(l); return v * v; }, M_PI);
        row.pred_cd = scale_n * 2.0 * quad.zero_graded([&](double l) { return gsym(l) * hsym(l); }, M_PI);
        row.pred_d2 = scale_n * 2.0 * quad.zero_graded([&](double l) { const double v = hsym(l); return v * v; }, M_PI);
        row.pred_dperp2 = row.pred_d2 - row.pred_cd * row.pred_cd / row.pred_c2;

        row.exact_c2 = tr.tr_c2;
        row.exact_cd = tr.tr_cd;
        row.exact_d2 = tr.tr_d2;
        row.exact_dperp2 = tr.tr_dperp2;
        row.gap_c2 = std::abs(row.exact_c2 - row.pred_c2) / std::abs(row.exact_c2);
        row.gap_cd = std::abs(row.exact_cd - row.pred_cd) / std::abs(row.exact_cd);
        row.gap_d2 = std::abs(row.exact_d2 - row.pred_d2) / std::abs(row.exact_d2);
        row.gap_dperp2 = std::abs(row.exact_dperp2 - row.pred_dperp2) / std::abs(row.exact_dperp2);

        row.a_n = tr.a_n;
        row.a_n_centered = tr.a_n - 2.0 * std::log(1.0 / row.delta);

        switch (table.regime) {
            case Regime::supercritical: {
                const double lead_scale = scale_n * std::pow(row.delta, 1.0 - 2.0 * p);
                row.a_n_pred = 2.0 * std::log(1.0 / row.delta) + jc.m;
                row.dperp2_leading_ratio = tr.tr_dperp2 / lead_scale;
                row.c2_leading_ratio = tr.tr_c2 / (lead_scale * jc.j0);
                break;
            }
            case Regime::subcritical:
                row.a_n_pred = row.pred_cd / row.pred_c2;
                row.c2_leading_ratio = tr.tr_c2 / (static_cast<double>(n) * lead_c2_limit);
                break;
            case Regime::fbm_dominated: {
                // in the eps-rescaled coordinates tr(Ct^2)/n -> 1/sigma^4
                const double eps = scheme.eps(H);
                const double s4 = std::pow(theta.sigma, 4.0);
                row.a_n_pred = row.pred_cd / row.pred_c2;
                row.c2_leading_ratio = tr.tr_c2 / (eps * eps * static_cast<double>(n) / s4);
                break;
            }
        }
        table.rows.push_back(row);
    }
    return table;
}

OpfTable opf_decay(const Theta& theta, const std::vector<long>& n_list, double alpha) {
    OpfTable table{theta, alpha, classify_regime(theta.hurst), "", {}};
    const double p = theta.hurst.memory_exponent();
    switch (table.regime) {
        case Regime::supercritical: table.rate_label = "1/sqrt(T_n)"; break;
        case Regime::subcritical: table.rate_label = "n^{p-1/2}"; break;
        case Regime::fbm_dominated: table.rate_label = "log(n)/sqrt(n)"; break;
    }
    for (long n : n_list) {
        const SamplingScheme scheme(n, alpha);
        const CovModel model(theta, scheme);
        const auto& tr = model.traces();
        OpfRow row;
        row.n = n;
        row.op_c = tr.op_c;
        row.frob_c = tr.frob_c;
        row.op_d = tr.op_d;
        row.frob_d = std::sqrt(tr.tr_d2);
        row.op_dperp = tr.op_dperp;
        row.frob_dperp = tr.frob_dperp;
        row.ratio_c = row.op_c / row.frob_c;
        row.ratio_d = row.op_d / row.frob_d;
        row.ratio_dperp = row.op_dperp / row.frob_dperp;
        const double nd = static_cast<double>(n);
        switch (table.regime) {
            case Regime::supercritical: row.dominating_rate = 1.0 / std::sqrt(scheme.horizon()); break;
            case Regime::subcritical: row.dominating_rate = std::pow(nd, p - 0.5); break;
            case Regime::fbm_dominated: row.dominating_rate = std::log(nd) / std::sqrt(nd); break;
        }
        table.rows.push_back(row);
    }
    return table;
}

double loglog_slope(const std::vector<long>& n, const std::vector<double>& y) {
    if (n.size() != y.size() || n.size() < 2) throw std::invalid_argument("loglog_slope: bad inputs");
    const double m = static_cast<double>(n.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double lx = std::log(static_cast<double>(n[i]));
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace mfbm
