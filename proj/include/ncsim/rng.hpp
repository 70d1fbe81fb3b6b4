#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ncsim {

// splitmix64 finalizer. Used both as the seed-derivation mixer and to
// expand a single 64-bit seed into generator state.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based seed splitting. Stream k of a root seed is
//   derive_seed(root, k) = mix64(root + (k + 1) * 0x9e3779b97f4a7c15)
// so parallel shots get independent, schedule-invariant streams. Every
// seed in the project derives from the run's single root seed this way.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t k) {
    return mix64(root + (k + 1) * 0x9e3779b97f4a7c15ULL);
}

// xoshiro256++ with splitmix64 state expansion. Self-contained so that
// streams are bit-identical across platforms and standard libraries;
// <random> distributions are implementation-defined and would break the
// replay contract.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            word = mix64(s);
        }
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

    // Uniform on [0, 1) with 53 significant bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller. Draws two uniforms per call; no
    // cached second value, so the draw count per call is fixed.
    double normal();

    // Index sampled from a probability vector by cumulative inversion.
    std::size_t pick(std::span<const double> probs);

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4]{};
};

} // namespace ncsim
