#pragma once

#include <cstdint>
#include <limits>

namespace girg {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Combines a seed with a stream/cell/replicate tag into a fresh seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a) noexcept {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (a + 1));
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return mix_seed(mix_seed(seed, a), b);
}

// Maps the top 53 bits to [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Sequential generator. Satisfies UniformRandomBitGenerator so it can feed
// <random> distributions, but all library code draws via uniform() which is
// bit-reproducible across standard library implementations.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    constexpr double uniform() noexcept { return to_unit((*this)()); }

    // Uniform integer in [0, bound). Lemire's multiply-shift; bias is below 2^-32 for bound < 2^32.
    std::uint64_t below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

// Counter-based Bernoulli source for vertex pairs: the draw for {u, v} depends
// only on (seed, min(u,v), max(u,v)), never on enumeration order.
class PairRng {
public:
    explicit PairRng(std::uint64_t seed) noexcept : key_(mix64(seed ^ 0x5851f42d4c957f2dULL)) {}

    double uniform(std::uint32_t u, std::uint32_t v) const noexcept {
        if (u > v) {
            std::uint32_t t = u;
            u = v;
            v = t;
        }
        const std::uint64_t pair = (static_cast<std::uint64_t>(u) << 32) | v;
        return to_unit(mix64(key_ + pair * 0x9e3779b97f4a7c15ULL));
    }

    bool bernoulli(std::uint32_t u, std::uint32_t v, double p) const noexcept {
        return uniform(u, v) < p;
    }

private:
    std::uint64_t key_;
};

}  // namespace girg
