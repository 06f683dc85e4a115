#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace gridsim {

// SplitMix64 step; used for seeding and for hashing stream keys.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Purpose tags for independent streams.
enum class StreamKind : std::uint64_t { Generator = 1, Router = 2, Monitor = 3 };

/// xoshiro256** generator. Each simulated entity owns a stream derived from
/// (seed, kind, node id), so adding or removing a node leaves every other
/// node's draws untouched.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static Rng stream(std::uint64_t seed, StreamKind kind, std::string_view node_id) {
    std::uint64_t key = fnv1a64(node_id) ^ (static_cast<std::uint64_t>(kind) * 0xd6e8feb86659fd93ULL);
    std::uint64_t mixed = seed;
    std::uint64_t a = splitmix64(mixed);
    std::uint64_t k = key;
    std::uint64_t b = splitmix64(k);
    return Rng(a ^ b);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
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

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

// Inverse CDF of the exponential distribution at u in [0, 1).
inline double exponential_from_uniform(double u, double mean) { return -mean * std::log1p(-u); }

inline double sample_exponential(Rng& rng, double mean) {
  return exponential_from_uniform(rng.uniform(), mean);
}

}  // namespace gridsim
