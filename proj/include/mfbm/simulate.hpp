#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "mfbm/rng.hpp"
#include "mfbm/toeplitz.hpp"

namespace mfbm {

struct IncrementPath {
    Eigen::VectorXd x;
    Theta theta;
    SamplingScheme scheme;
    std::uint64_t seed = 0;
};

/// Exact stationary fGn sampler by circulant embedding of the autocovariance
/// (even embedding of size 2n, eigenvalues by FFT). The spectrum is computed
/// once; draws are deterministic functions of the generator key.
class FgnSampler {
public:
    FgnSampler(const HurstIndex& H, long n);

    long n() const { return n_; }

    /// One exact fGn vector; consumes a fixed number of normals from rng.
    Eigen::VectorXd sample(Rng& rng) const;

private:
    long n_;
    long m_;                          // embedding size 2n
    std::vector<double> amp_;         // sqrt(eigenvalue scaling) per frequency
};

/// Convenience one-shot draw: deterministic given (H, n, seed).
Eigen::VectorXd fgn_sample(const HurstIndex& H, long n, std::uint64_t seed);

/// Increments x = sigma Delta^H g + sqrt(Delta) w with independent fGn and
/// white-noise substreams derived from the seed.
IncrementPath mfbm_increments(const Theta& theta, const SamplingScheme& scheme, std::uint64_t seed);

/// Same, reusing a prebuilt sampler (the hot path of the replication loops);
/// `replication` selects the substream pair.
Eigen::VectorXd mfbm_increments_with(const FgnSampler& sampler, const Theta& theta, const SamplingScheme& scheme,
                                     std::uint64_t seed, std::uint64_t replication);

/// z = L^{-1} x / sqrt(Delta); requires matching dimensions.
Eigen::VectorXd whiten(const CovModel& model, const IncrementPath& path);

}  // namespace mfbm
