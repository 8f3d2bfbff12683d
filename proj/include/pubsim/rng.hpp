#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace pubsim {

// SplitMix64 finalizer (Steele, Lea, Flood). Advances the state by the
// golden-ratio increment and returns a mixed output word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic stream splitting. A child seed is obtained by folding one
// path component into the parent seed:
//
//   child = splitmix64( parent XOR (component + 1) * 0x9e3779b97f4a7c15 )
//
// Multi-component paths fold left to right, so
// derive_seed(master, a, b, c) == derive_seed(derive_seed(derive_seed(master, a), b), c).
// The experiment harness derives every stream from
// (master_seed, stream tag, grid index, network replicate, event index) this
// way; two runs with the same master seed agree draw for draw regardless of
// scheduling.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t component) {
    std::uint64_t s = parent ^ ((component + 1) * 0x9e3779b97f4a7c15ull);
    return splitmix64(s);
}

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t first, std::uint64_t second,
                          Rest... rest) {
    return derive_seed(derive_seed(parent, first), second, rest...);
}

// xoshiro256** 1.0 (Blackman & Vigna, public domain), seeded with four
// SplitMix64 outputs of the seed word. Every draw below is fully specified,
// so a given seed reproduces the exact stream on any platform; nothing is
// implementation-defined the way std::*_distribution is.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 random mantissa bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // Unbiased uniform integer in [0, bound), bound >= 1. Rejects the
    // sliver below 2^64 mod bound so every residue is equally likely.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

// Fisher-Yates shuffle driven by next_below, so the permutation is a pure
// function of the generator state.
template <typename T>
void shuffle(std::vector<T>& values, Xoshiro256& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[rng.next_below(i)]);
    }
}

}  // namespace pubsim
