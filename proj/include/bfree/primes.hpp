#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace bfree {

// All primes p with lo <= p <= hi, ascending (plain Eratosthenes up to hi).
std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi);

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t hi) {
  return primes_between(2, hi);
}

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::uint64_t n);

// floor(x^(1/r)) for r >= 1.
std::uint64_t integer_root(std::uint64_t x, unsigned r);

// base^exp, or nullopt on 64-bit overflow.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

// Exponent of p in n (n > 0).
unsigned valuation(std::uint64_t n, std::uint64_t p);

}  // namespace bfree
