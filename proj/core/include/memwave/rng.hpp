#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace memwave {

// Deterministic, platform-independent random streams. Every stochastic
// operation takes an explicit 64-bit seed; substreams are derived from the
// seed plus a tag path (e.g. {kStreamProgram, row, col}), so per-cell,
// per-symbol and per-trial noise is independent of evaluation order.
//
// Generator: xoshiro256++ seeded through splitmix64. Uniform and normal
// variates are produced here rather than with std::uniform_real_distribution
// / std::normal_distribution, whose output is implementation-defined.

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// FNV-1a, for readable stream tags: derive_seed(seed, {stream_tag("awgn"), i}).
constexpr std::uint64_t stream_tag(const char* s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (; *s != '\0'; ++s) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*s));
    h *= 0x00000100000001B3ULL;
  }
  return h;
}

// Absorbs the tag path into the seed; each tag passes through splitmix64 so
// nearby tag values give unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> tags) {
  std::uint64_t state = seed ^ 0xA0761D6478BD642FULL;
  std::uint64_t mixed = splitmix64(state);
  for (std::uint64_t t : tags) {
    state ^= t;
    mixed ^= splitmix64(state);
  }
  return mixed;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    return Rng(derive_seed(seed, tags));
  }

  std::uint64_t next_u64() {
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

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; the spare variate is cached.
  double normal(double mean, double sd) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sd * spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return mean + sd * (r * std::cos(theta));
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4]{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace memwave
