#pragma once

#include <cstdint>
#include <vector>

namespace handdigit {

/// splitmix64 stream. Used everywhere a reproducible value sequence is
/// needed; the algorithm is fixed so outputs are identical across
/// platforms and standard-library versions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n). n must be > 0.
    std::uint64_t bounded(std::uint64_t n) { return next() % n; }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi].
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    long uniform_int(long lo, long hi) {
        return lo + static_cast<long>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream for (seed, a, b); used to give each
/// generated image its own sub-seed so parallel generation cannot
/// change outputs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    SplitMix64 rng(seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL));
    rng.next();
    return rng.next();
}

/// Fisher-Yates with SplitMix64; deterministic across platforms
/// (std::shuffle is not, its distribution is implementation-defined).
template <typename T>
void deterministic_shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace handdigit
