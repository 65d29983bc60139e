#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gsde {

// 64-bit finalizer from splitmix64. Bijective and well mixed; the basis for
// both the counter stream below and substream key derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

/// Counter-based random stream: draw i is mix64(key + i * gamma), a pure
/// function of (key, counter). Streams are cheap values, can be split into
/// decorrelated substreams with child(), and produce the same draws no
/// matter which thread consumes them or in what order streams are created.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    static CounterRng from_seed(std::uint64_t seed) noexcept {
        return CounterRng(mix64(seed + kGolden));
    }

    /// Derives an independent substream. Distinct ids give distinct keys for
    /// a fixed parent; chains like root.child(a).child(b) stay decorrelated
    /// because every level passes through the full finalizer.
    CounterRng child(std::uint64_t id) const noexcept {
        return CounterRng(mix64(mix64(key_ + kGolden) ^ (id + kLeaf)));
    }

    std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * kGolden); }

    /// Uniform draw in (0, 1]; never 0, so log() is safe.
    double next_u01() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller. Consumes exactly two counter ticks.
    double normal() noexcept {
        const double u1 = next_u01();
        const double u2 = next_u01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kLeaf = 0x632be59bd9b4e019ULL;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace gsde
