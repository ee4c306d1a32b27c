#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfree/rational.hpp"

namespace bfree {

enum class FamilyKind { kExplicit, kRFree, kRootedExplicit, kRootedPrimes };

std::string_view kind_name(FamilyKind kind);

// User-facing description of a family, before validation.
struct FamilySpec {
  FamilyKind kind = FamilyKind::kExplicit;
  std::vector<std::uint64_t> moduli;  // explicit
  unsigned r = 2;                     // r-free
  std::uint64_t prime_limit = 0;      // r-free, infinite rooted-primes
  std::vector<std::uint64_t> roots;   // rooted-explicit
  std::uint64_t prime_min = 2;        // rooted-primes
  std::optional<std::uint64_t> prime_max;  // rooted-primes; absent = all primes
};

// Parses the JSON family file format. Errors name the offending field.
FamilySpec parse_family_spec(std::string_view json_text);

// A validated family of pairwise coprime moduli b_1 < b_2 < ... .
//
// Finite families hold every modulus. Infinite families ({p^r : p >= p_min
// prime}) materialize the moduli with p <= prime_limit; that prefix is the
// default truncation depth for enclosures, and anything beyond it is generated
// on demand. Immutable after construction.
class BFamily {
 public:
  FamilyKind kind() const { return kind_; }
  bool is_finite() const { return finite_; }
  bool is_rooted() const {
    return kind_ == FamilyKind::kRootedExplicit || kind_ == FamilyKind::kRootedPrimes;
  }

  // Materialized prefix (the whole family when finite).
  std::size_t size() const { return moduli_.size(); }
  std::span<const std::uint64_t> moduli() const { return moduli_; }
  std::span<const std::uint64_t> roots() const { return roots_; }
  std::uint64_t modulus(std::size_t index) const { return moduli_.at(index); }

  // Every modulus (resp. root) <= limit, generated beyond the materialized
  // prefix when the family is infinite.
  std::vector<std::uint64_t> moduli_up_to(std::uint64_t limit) const;
  std::vector<std::uint64_t> roots_up_to(std::uint64_t limit) const;
  // The first K moduli; for finite families K is capped at size().
  std::vector<std::uint64_t> moduli_prefix(std::size_t K) const;
  std::vector<std::uint64_t> roots_prefix(std::size_t K) const;
  // Number of moduli <= limit.
  std::size_t count_up_to(std::uint64_t limit) const;
  // Infinite families: number of moduli p^r with p < bound. Finite: size().
  std::size_t prime_depth(std::uint64_t bound) const;

  // Certified upper bound on sum_{k > K} 1/b_k (K counts moduli, 1-based).
  Rational tail_sum_bound(std::size_t K) const;
  // sum_{k > K} 1/a_k; nullopt when the series diverges.
  std::optional<Rational> root_tail_sum(std::size_t K) const;
  // Exact Sigma = sum 1/a_k for finite rooted families; nullopt if infinite.
  std::optional<Rational> sigma() const;

  // The unique modulus divisible by the prime p, if any.
  std::optional<std::uint64_t> modulus_divisible_by(std::uint64_t p) const;

  // Canonical JSON text and a stable 64-bit FNV-1a digest of it.
  std::string canonical_json() const;
  std::string digest() const;

  friend BFamily validate_family(const FamilySpec& spec);

 private:
  BFamily() = default;
  std::vector<std::uint64_t> generated_primes(std::uint64_t hi) const;
  std::uint64_t kth_prime(std::size_t K) const;

  FamilyKind kind_ = FamilyKind::kExplicit;
  bool finite_ = true;
  unsigned power_ = 1;             // infinite families: b = p^power
  std::uint64_t prime_min_ = 2;    // infinite families
  std::uint64_t prime_limit_ = 0;  // infinite families
  std::vector<std::uint64_t> moduli_;
  std::vector<std::uint64_t> roots_;
};

BFamily validate_family(const FamilySpec& spec);
Rational tail_sum_bound(const BFamily& family, std::size_t K);
std::vector<std::uint64_t> enumerate_moduli(const BFamily& family, std::uint64_t limit);

// Shorthands used by tools and tests.
BFamily explicit_family(std::vector<std::uint64_t> moduli);
BFamily r_free_family(unsigned r, std::uint64_t prime_limit);
BFamily rooted_family(std::vector<std::uint64_t> roots);
// Roots = primes in [prime_min, prime_max].
BFamily rooted_primes_family(std::uint64_t prime_min, std::uint64_t prime_max);
// Roots = all primes >= prime_min (Sigma = infinity), materialized to prime_limit.
BFamily mobius_family(std::uint64_t prime_limit, std::uint64_t prime_min = 2);

}  // namespace bfree
