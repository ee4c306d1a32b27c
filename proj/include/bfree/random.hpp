#pragma once

#include <cstdint>
#include <random>

namespace bfree {

// Seeded generator with a portable bounded draw: std::mt19937_64's output
// sequence is fixed by the standard, the distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, n), n >= 1. Lemire's multiply-shift with rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    using u128 = unsigned __int128;
    std::uint64_t x = engine_();
    u128 m = static_cast<u128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = engine_();
        m = static_cast<u128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform on [lo, hi].
  std::uint64_t uniform_between(std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_below(hi - lo + 1);
  }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 of (master, stream): independent seeds for parallel chunks.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace bfree
