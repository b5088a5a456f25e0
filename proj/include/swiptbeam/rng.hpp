#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace swiptbeam {

// Seeded random stream (xoshiro256++ core, splitmix64 seeding). Streams are
// small value types: copy freely, and fork independent substreams with
// derive() so parallel workers never touch shared state. Uniform and normal
// variates are generated directly from the raw 64-bit output, so a given
// (seed, key) pair replays the same sequence on every platform.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : root_(seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = split_mix(s);
    }

    // Independent stream keyed on (k1, k2, k3); equal keys give equal streams.
    RandomStream derive(std::uint64_t k1, std::uint64_t k2 = 0, std::uint64_t k3 = 0) const {
        std::uint64_t s = root_;
        s = hash_step(s, k1 + 0x01);
        s = hash_step(s, k2 + 0x02);
        s = hash_step(s, k3 + 0x03);
        return RandomStream(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform01_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller; pairs are generated and one is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform01_pos()));
        const double angle = 2.0 * std::numbers::pi * uniform01();
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Circularly symmetric with E|z|^2 = 1: each component carries half the
    // variance.
    std::complex<double> normal_complex() {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 * 0.5, im * std::numbers::sqrt2 * 0.5};
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t split_mix(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t hash_step(std::uint64_t h, std::uint64_t k) {
        std::uint64_t x = h ^ (k * 0xff51afd7ed558ccdULL);
        return split_mix(x);
    }

    std::uint64_t root_;
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace swiptbeam
