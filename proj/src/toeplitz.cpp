#include "mfbm/toeplitz.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace mfbm {

namespace {
std::atomic<int> g_threads{0};
}

int num_threads() {
    const int t = g_threads.load();
    if (t > 0) return t;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void set_num_threads(int n) { g_threads.store(n > 0 ? n : 0); }

Eigen::MatrixXd SymToeplitz::dense() const {
    Eigen::MatrixXd m(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) m(i, j) = first_col[static_cast<std::size_t>(std::labs(i - j))];
    return m;
}

SymToeplitz build_fgn_cov(const HurstIndex& H, long n, bool derivative, long cap) {
    if (n < 2) throw std::invalid_argument("build_fgn_cov: n must be >= 2");
    if (n > cap) throw std::invalid_argument("build_fgn_cov: n exceeds the dense size cap");
    SymToeplitz t;
    t.n = n;
    t.tag = derivative ? SymbolTag::fgn_dh : SymbolTag::fgn;
    t.first_col.resize(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k)
        t.first_col[static_cast<std::size_t>(k)] =
            derivative ? spectral::autocov_dh(H, k) : spectral::autocov(H, k);
    return t;
}

void parallel_lower_solve(const Eigen::MatrixXd& l, Eigen::MatrixXd& b) {
    const int workers = std::min<int>(num_threads(), static_cast<int>(b.cols()));
    if (workers <= 1) {
        l.triangularView<Eigen::Lower>().solveInPlace(b);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long cols = b.cols();
    for (int w = 0; w < workers; ++w) {
        const long c0 = cols * w / workers;
        const long c1 = cols * (w + 1) / workers;
        pool.emplace_back([&, c0, c1] {
            auto block = b.middleCols(c0, c1 - c0);
            l.triangularView<Eigen::Lower>().solveInPlace(block);
        });
    }
    for (auto& th : pool) th.join();
}

double sym_op_norm(const Eigen::MatrixXd& w, double rel_tol, int max_iter) {
    const long n = w.rows();
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) v(i) = (i % 2 == 0 ? 1.0 : -1.0);
    v /= std::sqrt(static_cast<double>(n));
    double lam = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd u = w.selfadjointView<Eigen::Lower>() * v;
        const double norm = u.norm();
        if (norm == 0.0) return 0.0;
        u /= norm;
        const double lam_next = u.dot(w.selfadjointView<Eigen::Lower>() * u);
        if (it > 0 && std::abs(std::abs(lam_next) - std::abs(lam)) <= rel_tol * std::abs(lam_next)) {
            return std::abs(lam_next);
        }
        lam = lam_next;
        v = std::move(u);
    }
    return std::abs(lam);
}

CovModel::CovModel(const Theta& theta, const SamplingScheme& scheme)
    : theta_(theta),
      scheme_(scheme),
      delta_(scheme.delta()),
      gamma_(scheme.gamma(theta)),
      t_(build_fgn_cov(theta.hurst, scheme.n, false)),
      t_dh_(build_fgn_cov(theta.hurst, scheme.n, true)) {
    t_dense_ = t_.dense();
    t_dh_dense_ = t_dh_.dense();

    Eigen::MatrixXd a = gamma_ * t_dense_;
    a.diagonal().array() += 1.0;
    llt_.compute(a);
    if (llt_.info() != Eigen::Success) {
        // locate the first failing leading minor for the error report
        long lo = 1, hi = scheme.n;
        while (lo < hi) {
            const long mid = (lo + hi) / 2;
            Eigen::LLT<Eigen::MatrixXd> probe(a.topLeftCorner(mid, mid));
            if (probe.info() == Eigen::Success)
                lo = mid + 1;
            else
                hi = mid;
        }
        throw std::runtime_error("CovModel: Cholesky factorization failed at leading minor " + std::to_string(lo));
    }
    log_det_a_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

Eigen::VectorXd CovModel::solve_a(const Eigen::VectorXd& x) const {
    if (x.size() != scheme_.n) throw std::invalid_argument("solve_a: dimension mismatch");
    return llt_.solve(x);
}

Eigen::VectorXd CovModel::whiten(const Eigen::VectorXd& x) const {
    if (x.size() != scheme_.n) throw std::invalid_argument("whiten: dimension mismatch");
    Eigen::VectorXd z = x / std::sqrt(delta_);
    llt_.matrixL().solveInPlace(z);
    return z;
}

const TraceSuite& CovModel::traces() const {
    std::call_once(traces_once_, [this] {
        auto suite = std::make_unique<TraceSuite>();
        const auto& l = llt_.matrixLLT();

        // W1 = L^{-1} T L^{-T}: two column-parallel triangular solves
        Eigen::MatrixXd y = t_dense_;
        parallel_lower_solve(l, y);
        Eigen::MatrixXd w1 = y.transpose();
        parallel_lower_solve(l, w1);
        y.resize(0, 0);

        Eigen::MatrixXd y2 = t_dh_dense_;
        parallel_lower_solve(l, y2);
        Eigen::MatrixXd w2 = y2.transpose();
        parallel_lower_solve(l, w2);
        y2.resize(0, 0);

        suite->tr_c = w1.trace();
        suite->tr_d = w2.trace();
        suite->tr_c2 = w1.squaredNorm();
        suite->tr_cd = w1.cwiseProduct(w2).sum();
        suite->tr_d2 = w2.squaredNorm();
        suite->a_n = suite->tr_cd / suite->tr_c2;
        suite->tr_dperp2 = suite->tr_d2 - suite->tr_cd * suite->tr_cd / suite->tr_c2;
        suite->frob_c = std::sqrt(suite->tr_c2);
        suite->frob_dperp = std::sqrt(std::max(0.0, suite->tr_dperp2));

        suite->op_c = sym_op_norm(w1);
        suite->op_d = sym_op_norm(w2);
        Eigen::MatrixXd wp = w2 - suite->a_n * w1;
        suite->op_dperp = sym_op_norm(wp);

        traces_ = std::move(suite);
    });
    return *traces_;
}

double quad_form(const CovModel& model, QuadKernel which, const Eigen::VectorXd& x) {
    if (x.size() != model.n()) throw std::invalid_argument("quad_form: dimension mismatch");
    const Eigen::VectorXd y = model.solve_a(x);
    switch (which) {
        case QuadKernel::c: return y.dot(model.t_dense().selfadjointView<Eigen::Lower>() * y);
        case QuadKernel::d: return y.dot(model.t_dh_dense().selfadjointView<Eigen::Lower>() * y);
        case QuadKernel::dperp: {
            const double a_n = model.traces().a_n;
            const Eigen::VectorXd ty = model.t_dense().selfadjointView<Eigen::Lower>() * y;
            const Eigen::VectorXd tdy = model.t_dh_dense().selfadjointView<Eigen::Lower>() * y;
            return y.dot(tdy) - a_n * y.dot(ty);
        }
    }
    throw std::logic_error("quad_form: unknown kernel");
}

}  // namespace mfbm
