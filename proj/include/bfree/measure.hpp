#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfree/bitvector.hpp"
#include "bfree/family.hpp"
#include "bfree/interval.hpp"

namespace bfree {

enum class Cell : std::uint8_t { kFree, kOne, kZero };

// A cylinder C_{A,B} in window coordinates: cell j (0-based) constrains
// position j + 1. Written as a string over {'1', '0', '*'}.
class Pattern {
 public:
  explicit Pattern(std::vector<Cell> cells);
  static Pattern parse(std::string_view text);

  std::size_t width() const { return cells_.size(); }
  Cell operator[](std::size_t j) const { return cells_[j]; }
  std::span<const Cell> cells() const { return cells_; }
  // A and B as 1-based positions.
  std::vector<std::uint64_t> ones() const;
  std::vector<std::uint64_t> zeros() const;
  std::string str() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::vector<Cell> cells_;
};

enum class SignedCell : std::uint8_t { kFree, kPlus, kMinus, kZero };

// A cylinder of {-1, 0, 1}-sequences, written over {'+', '-', '0', '*'}.
class SignedPattern {
 public:
  explicit SignedPattern(std::vector<SignedCell> cells);
  static SignedPattern parse(std::string_view text);

  std::size_t width() const { return cells_.size(); }
  SignedCell operator[](std::size_t j) const { return cells_[j]; }
  // Number of +-1 cells.
  std::size_t lambda() const;
  // +-1 -> one, 0 -> zero, free -> free.
  Pattern squared() const;
  std::string str() const;

 private:
  std::vector<SignedCell> cells_;
};

struct MeasureOptions {
  // Truncation depth for infinite families (number of moduli used exactly);
  // defaults to the family's materialized prefix. Ignored for finite families,
  // which are always evaluated exactly.
  std::optional<std::size_t> K;
  // Maximum number of inclusion-exclusion terms 2^|B|.
  std::uint64_t inclusion_exclusion_budget = std::uint64_t{1} << 20;
};

// t(A, b): number of residue classes mod b met by A.
std::size_t residue_count(std::span<const std::uint64_t> A, std::uint64_t b);

struct Admissibility {
  bool admissible = true;
  std::optional<std::uint64_t> violated_modulus;  // smallest b with t(A, b) = b
};

Admissibility check_admissible_set(std::span<const std::uint64_t> A, const BFamily& family);
bool is_admissible_set(std::span<const std::uint64_t> A, const BFamily& family);
// w[i] != 0 means position i + 1 is in the support.
bool is_admissible_word(std::span<const std::uint8_t> w, const BFamily& family);
// Admissibility with respect to an explicit list of moduli (a prefix B_K).
bool is_admissible_word(std::span<const std::uint8_t> w,
                        std::span<const std::uint64_t> moduli);

Interval nu_one_cylinder(std::span<const std::uint64_t> A, const BFamily& family,
                         const MeasureOptions& options = {});
Interval nu_cylinder(const Pattern& pattern, const BFamily& family,
                     const MeasureOptions& options = {});

// Counting oracle: frequency of the pattern over one full period prod b_k of eta.
Rational nu_exact_finite(const Pattern& pattern, const BFamily& family,
                         std::uint64_t period_budget = 100'000'000);

Interval nu_M_cylinder(const SignedPattern& pattern, const BFamily& family,
                       const MeasureOptions& options = {});

// nu_M-expectation of prod_j x_{1+s_j}^{i_j} with exponents in {1, 2}.
Interval nu_M_correlation(std::span<const std::uint64_t> shifts,
                          std::span<const unsigned> exponents, const BFamily& family,
                          const MeasureOptions& options = {});

// prod_k (1 - 2/a_k) over the roots.
Interval sign_product(const BFamily& family, std::optional<std::size_t> K = std::nullopt);

// Number of offsets i in [0, offsets) where bits[i + j] matches cell j of the
// pattern for every j. Requires bits.size() >= offsets + width - 1.
std::uint64_t count_pattern_matches(const BitVector& bits, const Pattern& pattern,
                                    std::size_t offsets);
bool pattern_matches_at(const BitVector& bits, const Pattern& pattern, std::size_t offset);

}  // namespace bfree
