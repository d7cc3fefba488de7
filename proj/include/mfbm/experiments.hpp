#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfbm/scores.hpp"

namespace mfbm {

/// Monte Carlo summary of the normalized score pair against its limiting
/// covariance. Reproducible bit-for-bit from (theta, scheme, R, seed).
struct MCReport {
    Theta theta;
    SamplingScheme scheme;
    long replications = 0;
    std::uint64_t seed = 0;
    Regime regime;
    std::string normalization;

    Matrix2 sample_cov{};
    Matrix2 target{};
    std::array<double, 2> var_z_scores{};   // (sample var - target) / SE(var)
    std::array<double, 2> skewness{};
    std::array<double, 2> excess_kurtosis{};
    std::array<double, 2> ks_distance{};    // against N(0, target_ii)
    double correlation = 0.0;               // of the accumulated pair
    double correlation_unprojected = 0.0;   // of the U pair
    bool normality_reliable = true;         // false for tiny R
    std::vector<std::array<double, 2>> samples;  // the accumulated pairs, one per replication
};

MCReport mc_clt(const Theta& theta, const SamplingScheme& scheme, long replications, std::uint64_t seed);

/// Same, reusing a prebuilt model (and its cached trace suite).
MCReport mc_clt_with(const CovModel& model, long replications, std::uint64_t seed);

struct DegeneracyReport {
    double sample_correlation = 0.0;         // of U over replications
    double deterministic_correlation = 0.0;  // tr(CD) / sqrt(tr(C^2) tr(D^2))
    double projected_correlation = 0.0;      // of (S_sigma, R_perp) pair
    long replications = 0;
    std::uint64_t seed = 0;
};

DegeneracyReport degeneracy_report(const Theta& theta, const SamplingScheme& scheme, long replications,
                                   std::uint64_t seed);

/// One row of the trace-asymptotics comparison: exact dense traces against
/// the Szego integral prediction (with the exact finite-n symbol) and against
/// the leading-order constants.
struct TraceRow {
    long n = 0;
    double delta = 0.0, gamma = 0.0;
    double exact_c2 = 0.0, pred_c2 = 0.0, gap_c2 = 0.0;
    double exact_cd = 0.0, pred_cd = 0.0, gap_cd = 0.0;
    double exact_d2 = 0.0, pred_d2 = 0.0, gap_d2 = 0.0;
    double exact_dperp2 = 0.0, pred_dperp2 = 0.0, gap_dperp2 = 0.0;
    double a_n = 0.0, a_n_pred = 0.0;
    double a_n_centered = 0.0;        // a_n - 2 ln(1/Delta)
    double dperp2_leading_ratio = 0.0; // tr(Dperp^2) / (n/2pi Delta^{1-2p}), supercritical
    double c2_leading_ratio = 0.0;     // regime-dependent leading-order ratio
};

struct ConvergenceTable {
    Theta theta;
    double alpha = 0.0;
    Regime regime;
    std::vector<TraceRow> rows;
};

ConvergenceTable trace_convergence(const Theta& theta, const std::vector<long>& n_list, double alpha);

struct OpfRow {
    long n = 0;
    double op_c = 0.0, frob_c = 0.0;
    double op_d = 0.0, frob_d = 0.0;
    double op_dperp = 0.0, frob_dperp = 0.0;
    double ratio_c = 0.0, ratio_d = 0.0, ratio_dperp = 0.0;
    double dominating_rate = 0.0;  // regime reference rate at this n
};

struct OpfTable {
    Theta theta;
    double alpha = 0.0;
    Regime regime;
    std::string rate_label;
    std::vector<OpfRow> rows;
};

OpfTable opf_decay(const Theta& theta, const std::vector<long>& n_list, double alpha);

/// Least-squares slope of ln(y) against ln(n).
double loglog_slope(const std::vector<long>& n, const std::vector<double>& y);

}  // namespace mfbm
