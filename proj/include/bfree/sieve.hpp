#pragma once

#include <cstdint>
#include <vector>

#include "bfree/bitvector.hpp"
#include "bfree/family.hpp"

namespace bfree {

// Values of eta (and, for rooted families, delta / pi / mu) over the half-open
// range [lo, hi). Index 0 corresponds to n = lo; n starts at 1.
struct SieveSegment {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  BitVector eta;
  std::vector<std::uint8_t> delta;  // filled by sieve_mu only
  std::vector<std::int8_t> pi;
  std::vector<std::int8_t> mu;

  std::size_t size() const { return static_cast<std::size_t>(hi - lo); }
  bool has_mu() const { return !mu.empty(); }
  bool eta_at(std::uint64_t n) const { return eta.test(n - lo); }
  int delta_at(std::uint64_t n) const { return delta[n - lo]; }
  int pi_at(std::uint64_t n) const { return pi[n - lo]; }
  int mu_at(std::uint64_t n) const { return mu[n - lo]; }
};

// Largest accepted hi; keeps n + b arithmetic inside 64 bits.
inline constexpr std::uint64_t kMaxSieveBound = std::uint64_t{1} << 62;

SieveSegment sieve_eta(const BFamily& family, std::uint64_t lo, std::uint64_t hi,
                       unsigned threads = 1);

// Requires a rooted family (b_k = a_k^2).
SieveSegment sieve_mu(const BFamily& family, std::uint64_t lo, std::uint64_t hi,
                      unsigned threads = 1);

// #{1 <= n <= N : eta_n = eta_{n+gap} = 1}.
std::uint64_t twin_count(const BFamily& family, std::uint64_t N, std::uint64_t gap,
                         unsigned threads = 1);

}  // namespace bfree
