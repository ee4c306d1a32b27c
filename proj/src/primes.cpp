#include "bfree/primes.hpp"

#include <numeric>

namespace bfree {

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  std::vector<bool> composite(hi + 1, false);
  for (std::uint64_t p = 2; p * p <= hi; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t q = p * p; q <= hi; q += p) composite[q] = true;
  }
  for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n) {
    if (!composite[n]) out.push_back(n);
  }
  return out;
}

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                          29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are sufficient for every n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                          29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return std::nullopt;
    r *= base;
  }
  return r;
}

std::uint64_t integer_root(std::uint64_t x, unsigned r) {
  if (r <= 1 || x <= 1) return x;
  std::uint64_t lo = 1;
  std::uint64_t hi = std::uint64_t{1} << (64 / r + 1);
  // Largest y with y^r <= x.
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    auto p = checked_pow(mid, r);
    if (p && *p <= x) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace bfree
