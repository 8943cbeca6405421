#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mixcascade {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable counter-based derivation of a substream seed from a master seed and
// a tuple of indices. Independent of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t p : path)
        h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

// Thin wrapper over mt19937_64. The draw helpers are implemented here rather
// than via <random> distributions so that streams are identical across
// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n), n >= 1 (Lemire's nearly-divisionless method).
    std::uint64_t uniform_index(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(engine_()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1].
    double uniform_open0() { return 1.0 - uniform01(); }

    // Number of failures before the first success of a Bernoulli(p) sequence.
    // Returns UINT64_MAX when p == 0.
    std::uint64_t geometric_failures(double p) {
        if (p >= 1.0)
            return 0;
        if (p <= 0.0)
            return UINT64_MAX;
        const double f = std::floor(std::log(uniform_open0()) / std::log1p(-p));
        if (!(f < 1.8e19))
            return UINT64_MAX;
        return static_cast<std::uint64_t>(f);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace mixcascade
