// rng.hpp
// Deterministic seeded random streams. All randomness in the simulator flows
// through RngStream so that a (scenario, seed) pair replays byte-identically.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qsa {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Pure derivation of a child seed from (seed, stream index). Used for the
// per-trial counter construction and for per-tap streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL));
}

// mt19937_64 engine with hand-rolled output conversions. The engine sequence
// is pinned by the standard; std::uniform_*_distribution is not, so we avoid
// the distributions entirely.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed)
        : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, n), rejection sampled
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t bound = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= bound);
        return x % n;
    }

    bool bernoulli(double p) { return uniform_double() < p; }

    // Child stream derived from the construction seed, independent of how far
    // this stream has been consumed.
    RngStream child(std::uint64_t stream) const {
        return RngStream(derive_seed(seed_, stream));
    }

    // Fisher-Yates; std::shuffle's draw sequence is implementation-defined
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace qsa
