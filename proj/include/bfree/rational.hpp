#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bfree {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt to_big(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(std::uint64_t num, std::uint64_t den) {
  return make_rational(to_big(num), to_big(den));
}

// Always "p/q", including integers ("1/1", "0/1").
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);
Rational parse_rational(const std::string& text);
double to_double(const Rational& q);

// Balanced product tree; the empty product is 1.
BigInt product(std::span<const BigInt> factors);

// floor(q * 2^bits) / 2^bits and the matching ceiling.
Rational floor_dyadic(const Rational& q, unsigned bits);
Rational ceil_dyadic(const Rational& q, unsigned bits);
Rational floor_dyadic(const BigInt& num, const BigInt& den, unsigned bits);
Rational ceil_dyadic(const BigInt& num, const BigInt& den, unsigned bits);

}  // namespace bfree
