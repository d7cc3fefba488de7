#include "mfbm/simulate.hpp"

#include <cmath>

#include "mfbm/fft.hpp"

namespace mfbm {

FgnSampler::FgnSampler(const HurstIndex& H, long n) : n_(n), m_(2 * n) {
    if (n < 2) throw std::invalid_argument("FgnSampler: n must be >= 2");
    std::vector<double> circ(static_cast<std::size_t>(m_));
    for (long j = 0; j < m_; ++j) {
        const long lag = std::min(j, m_ - j);
        circ[static_cast<std::size_t>(j)] = spectral::autocov(H, lag);
    }
    RealFft fft(static_cast<int>(m_));
    std::vector<std::complex<double>> spec;
    fft.forward(circ, spec);

    double max_ev = 0.0, min_ev = 0.0;
    for (const auto& z : spec) {
        max_ev = std::max(max_ev, z.real());
        min_ev = std::min(min_ev, z.real());
    }
    if (min_ev < -1e-8 * max_ev)
        throw std::runtime_error("FgnSampler: circulant embedding has a significantly negative eigenvalue");

    amp_.resize(spec.size());
    const double md = static_cast<double>(m_);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double ev = std::max(0.0, spec[k].real());
        const bool self_conjugate = (k == 0 || k == spec.size() - 1);
        amp_[k] = self_conjugate ? std::sqrt(ev / md) : std::sqrt(ev / (2.0 * md));
    }
}

Eigen::VectorXd FgnSampler::sample(Rng& rng) const {
    const std::size_t half = amp_.size();
    std::vector<std::complex<double>> spec(half);
    spec[0] = {amp_[0] * rng.normal(), 0.0};
    for (std::size_t k = 1; k + 1 < half; ++k) {
        const double u = rng.normal();
        const double v = rng.normal();
        spec[k] = {amp_[k] * u, amp_[k] * v};
    }
    spec[half - 1] = {amp_[half - 1] * rng.normal(), 0.0};

    thread_local std::unique_ptr<RealFft> fft;
    if (!fft || fft->size() != m_) fft = std::make_unique<RealFft>(static_cast<int>(m_));
    std::vector<double> out;
    fft->backward(spec, out);

    Eigen::VectorXd g(n_);
    for (long i = 0; i < n_; ++i) g(i) = out[static_cast<std::size_t>(i)];
    return g;
}

Eigen::VectorXd fgn_sample(const HurstIndex& H, long n, std::uint64_t seed) {
    FgnSampler sampler(H, n);
    Rng rng(substream_key(seed, static_cast<std::uint64_t>(Stream::fgn), 0));
    return sampler.sample(rng);
}

Eigen::VectorXd mfbm_increments_with(const FgnSampler& sampler, const Theta& theta, const SamplingScheme& scheme,
                                     std::uint64_t seed, std::uint64_t replication) {
    if (sampler.n() != scheme.n) throw std::invalid_argument("mfbm_increments: sampler size mismatch");
    Rng rng_fgn(substream_key(seed, static_cast<std::uint64_t>(Stream::fgn), replication));
    Rng rng_white(substream_key(seed, static_cast<std::uint64_t>(Stream::white), replication));

    const double delta = scheme.delta();
    const double sig_scale = theta.sigma * std::pow(delta, theta.hurst.value());
    const double noise_scale = std::sqrt(delta);

    Eigen::VectorXd x = sig_scale * sampler.sample(rng_fgn);
    for (long i = 0; i < scheme.n; ++i) x(i) += noise_scale * rng_white.normal();
    return x;
}

IncrementPath mfbm_increments(const Theta& theta, const SamplingScheme& scheme, std::uint64_t seed) {
    FgnSampler sampler(theta.hurst, scheme.n);
    return {mfbm_increments_with(sampler, theta, scheme, seed, 0), theta, scheme, seed};
}

Eigen::VectorXd whiten(const CovModel& model, const IncrementPath& path) {
    if (path.scheme.n != model.n()) throw std::invalid_argument("whiten: path/model dimension mismatch");
    return model.whiten(path.x);
}

}  // namespace mfbm
