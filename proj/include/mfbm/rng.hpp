#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mfbm {

/// SplitMix64 finalizer, used to derive independent substream keys.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Key for substream `stream` at replication `index` under a master seed.
/// Distinct (stream, index) pairs give statistically independent generators,
/// so replications can run concurrently and in any order.
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return mix64(mix64(mix64(seed) ^ stream) ^ (0x517cc1b727220a95ULL * (index + 1)));
}

enum class Stream : std::uint64_t {
    fgn = 0x66676eULL,
    white = 0x776e6fULL,
    generic = 0x67656eULL,
};

/// Seeded generator with explicit Box–Muller normals so the draw sequence is
/// fixed by the key alone (no reliance on library-defined distributions).
class Rng {
public:
    explicit Rng(std::uint64_t key) : gen_(key) {}

    std::uint64_t raw() { return gen_(); }

    /// Uniform on (0,1].
    double uniform() { return static_cast<double>((raw() >> 11) + 1) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mfbm
