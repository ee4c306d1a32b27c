#pragma once

#include <cstdint>
#include <span>

#include "bfree/family.hpp"
#include "bfree/interval.hpp"

namespace bfree {

// gamma(n) or gamma_K(n): the number of admissible binary words of length n.
struct WordCount {
  std::uint64_t n = 0;
  std::size_t K_effective = 0;  // moduli b_k <= n, the only ones that constrain
  BigInt count;
};

inline constexpr std::uint64_t kBruteForceCap = 20;
inline constexpr std::uint64_t kDefaultStateBudget = std::uint64_t{1} << 24;

// Enumerates all 2^n words; n <= cap.
WordCount count_words_bruteforce(std::uint64_t n, const BFamily& family,
                                 std::uint64_t cap = kBruteForceCap, unsigned threads = 1);

// Dynamic programme over positions whose state is, per modulus, the set of
// residues already hit by the support.
WordCount count_words_dp(std::uint64_t n, std::span<const std::uint64_t> moduli,
                         std::uint64_t state_budget = kDefaultStateBudget);
WordCount count_words_dp(std::uint64_t n, const BFamily& family,
                         std::uint64_t state_budget = kDefaultStateBudget);

struct GammaBracket {
  std::uint64_t n = 0;
  std::uint64_t exponent = 0;  // n * prod (1 - 1/b_k), an integer
  BigInt lower;                // 2^exponent
  BigInt count;                // gamma_K(n)
  BigInt upper;                // 2^exponent * prod b_k
  bool holds = false;
};

// Requires n to be a multiple of prod b_k over the given prefix.
GammaBracket gamma_bracket_check(std::uint64_t n, std::span<const std::uint64_t> moduli,
                                 std::uint64_t state_budget = kDefaultStateBudget);

// Topological entropy prod_k (1 - 1/b_k); exact for finite families.
Interval entropy_interval(const BFamily& family, std::optional<std::size_t> K = std::nullopt);

}  // namespace bfree
