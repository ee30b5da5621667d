#pragma once
// Deterministic random source for the simulator: SplitMix64 expands seeds and
// derives independent substream seeds, xoshiro256++ generates the stream.
// This is a reproducible simulation device, not an entropy source.

#include <cstdint>
#include <cmath>

namespace pvq::qcore {

// SplitMix64 (Steele/Lea/Flood construction): golden-ratio increment plus a
// 64-bit finalizer. Equidistributed over its full 2^64 period, which makes it
// safe for seeding the main generator and for stream derivation.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// xoshiro256++ (Blackman/Vigna). State is seeded through SplitMix64, so an
// all-zero state cannot occur for any user seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    // Seed of substream `stream` under master seed `seed`. Computable without
    // touching any shared state: chunked simulations stay reproducible for any
    // worker count and any chunk evaluation order.
    static constexpr std::uint64_t derive_stream_seed(std::uint64_t seed,
                                                      std::uint64_t stream) noexcept {
        SplitMix64 sm(seed + stream * 0x9E3779B97F4A7C15ull);
        return sm.next();
    }

    static Rng child(std::uint64_t seed, std::uint64_t stream) noexcept {
        return Rng(derive_stream_seed(seed, stream));
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0,1), 53 significant bits.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    // Exponential inter-arrival time; rate > 0. 1-u is in (0,1], so the log
    // argument never reaches zero.
    double exponential(double rate) noexcept {
        return -std::log1p(-uniform01()) / rate;
    }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % bound;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace pvq::qcore
