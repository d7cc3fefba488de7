#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <vector>

#include "mfbm/constants.hpp"
#include "mfbm/spectral.hpp"

namespace mfbm {

/// Global worker count for the dense kernels and replication loops.
int num_threads();
void set_num_threads(int n);

/// High-frequency sampling scheme: step Delta = n^{-alpha} on the growing
/// horizon T = n Delta = n^{1-alpha}.
struct SamplingScheme {
    long n;
    double alpha;

    SamplingScheme(long n_, double alpha_) : n(n_), alpha(alpha_) {
        if (n < 2) throw std::invalid_argument("SamplingScheme: n must be >= 2");
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("SamplingScheme: alpha must lie in (0,1)");
    }

    double delta() const { return std::pow(static_cast<double>(n), -alpha); }
    double horizon() const { return static_cast<double>(n) * delta(); }
    double gamma(const Theta& theta) const {
        return theta.sigma * theta.sigma * std::pow(delta(), theta.hurst.memory_exponent());
    }
    double eps(const HurstIndex& h) const { return std::pow(delta(), 1.0 - 2.0 * h.value()); }
};

enum class SymbolTag { fgn, fgn_dh };

/// Symmetric Toeplitz matrix stored by its first column.
struct SymToeplitz {
    long n = 0;
    std::vector<double> first_col;
    SymbolTag tag = SymbolTag::fgn;

    Eigen::MatrixXd dense() const;
};

/// first_col[k] = autocov(H,k), or autocov_dh(H,k) when derivative is set.
SymToeplitz build_fgn_cov(const HurstIndex& H, long n, bool derivative, long cap = 16384);

/// Exact trace and norm functionals of C = A^{-1/2} T A^{-1/2} and
/// D = A^{-1/2} Td A^{-1/2} (computed through the similar products A^{-1}T,
/// A^{-1}Td; all quantities here are similarity-invariant).
struct TraceSuite {
    double tr_c = 0.0, tr_d = 0.0;
    double tr_c2 = 0.0, tr_cd = 0.0, tr_d2 = 0.0;
    double a_n = 0.0;       // tr(CD) / tr(C^2)
    double tr_dperp2 = 0.0; // tr(D^2) - tr(CD)^2 / tr(C^2)
    double frob_c = 0.0, frob_dperp = 0.0;
    double op_c = 0.0, op_d = 0.0, op_dperp = 0.0;
};

/// The regularized increment-covariance model V = Delta (I + gamma T).
/// Immutable once constructed; concurrent readers are safe.
class CovModel {
public:
    CovModel(const Theta& theta, const SamplingScheme& scheme);

    const Theta& theta() const { return theta_; }
    const SamplingScheme& scheme() const { return scheme_; }
    double gamma() const { return gamma_; }
    double delta() const { return delta_; }
    double horizon() const { return scheme_.horizon(); }
    long n() const { return scheme_.n; }

    const SymToeplitz& t() const { return t_; }
    const SymToeplitz& t_dh() const { return t_dh_; }
    const Eigen::MatrixXd& t_dense() const { return t_dense_; }
    const Eigen::MatrixXd& t_dh_dense() const { return t_dh_dense_; }

    /// ln det A, from the Cholesky diagonal.
    double log_det_a() const { return log_det_a_; }

    Eigen::VectorXd solve_a(const Eigen::VectorXd& x) const;
    /// L^{-1} x / sqrt(Delta); identity covariance under theta up to an
    /// orthogonal map, which every quadratic-form statistic is blind to.
    Eigen::VectorXd whiten(const Eigen::VectorXd& x) const;

    /// Exact dense trace suite; computed on first use and cached.
    const TraceSuite& traces() const;

private:
    Theta theta_;
    SamplingScheme scheme_;
    double delta_, gamma_;
    SymToeplitz t_, t_dh_;
    Eigen::MatrixXd t_dense_, t_dh_dense_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_det_a_ = 0.0;

    mutable std::once_flag traces_once_;
    mutable std::unique_ptr<TraceSuite> traces_;
};

enum class QuadKernel { c, d, dperp };

/// x^T A^{-1} W A^{-1} x with W in {T, Td, Td - a_n T}; equals the
/// corresponding whitened-coordinate quadratic form z^T (L^{-1} W L^{-T}) z
/// for z = L^{-1} x.
double quad_form(const CovModel& model, QuadKernel which, const Eigen::VectorXd& x);

inline const TraceSuite& trace_suite(const CovModel& model) { return model.traces(); }

/// In-place column-parallel solve of L Y = B (B overwritten by Y).
/// Deterministic for any worker count.
void parallel_lower_solve(const Eigen::MatrixXd& l, Eigen::MatrixXd& b);

/// Largest-magnitude eigenvalue of a symmetric matrix by power iteration
/// with Rayleigh-quotient stopping; deterministic alternating start vector.
double sym_op_norm(const Eigen::MatrixXd& w, double rel_tol = 1e-8, int max_iter = 5000);

}  // namespace mfbm
