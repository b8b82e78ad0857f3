#pragma once

#include <cmath>
#include <cstdint>

namespace solsched {

/// splitmix64 finalizer; used both as a standalone mixer and to expand seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Documented sub-seed derivation for independent per-run streams:
/// sub_seed(master, i) = splitmix64(master + (i+1) * 0x9E3779B97F4A7C15).
inline std::uint64_t derive_sub_seed(std::uint64_t master, std::uint64_t run_index) {
    std::uint64_t state = master + run_index * 0x9E3779B97F4A7C15ULL;
    return splitmix64_next(state);
}

/// xoshiro256** seeded via splitmix64 expansion. Deterministic across
/// platforms; all distribution sampling is done by inverse CDF in this
/// header so simulation output is bit-reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate (inverse CDF on (0, 1]).
    double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace solsched
