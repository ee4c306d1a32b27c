#include "bfree/interval.hpp"

#include <algorithm>
#include <cmath>

#include "bfree/error.hpp"

namespace bfree {

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "not a rational: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

namespace {

BigInt product_range(std::span<const BigInt> f) {
  if (f.empty()) return 1;
  if (f.size() == 1) return f[0];
  if (f.size() == 2) return f[0] * f[1];
  const std::size_t mid = f.size() / 2;
  BigInt left = product_range(f.subspan(0, mid));
  BigInt right = product_range(f.subspan(mid));
  return left * right;
}

}  // namespace

BigInt product(std::span<const BigInt> factors) { return product_range(factors); }

Rational floor_dyadic(const BigInt& num, const BigInt& den, unsigned bits) {
  BigInt scaled = num;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), bits);
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  BigInt one = 1;
  mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), bits);
  return make_rational(q, one);
}

Rational ceil_dyadic(const BigInt& num, const BigInt& den, unsigned bits) {
  BigInt scaled = num;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), bits);
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  BigInt one = 1;
  mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), bits);
  return make_rational(q, one);
}

Rational floor_dyadic(const Rational& q, unsigned bits) {
  return floor_dyadic(q.get_num(), q.get_den(), bits);
}

Rational ceil_dyadic(const Rational& q, unsigned bits) {
  return ceil_dyadic(q.get_num(), q.get_den(), bits);
}

Interval Interval::between(const Rational& lo, const Rational& hi) {
  if (hi < lo) {
    throw Error(ErrorCode::kInvalidArgument, "interval with hi < lo");
  }
  return {lo, hi, lo == hi};
}

Rational Interval::distance_to(const Rational& x) const {
  if (x < lo) return lo - x;
  if (x > hi) return x - hi;
  return 0;
}

bool operator==(const Interval& a, const Interval& b) {
  return a.lo == b.lo && a.hi == b.hi && a.exact == b.exact;
}

Interval operator+(const Interval& a, const Interval& b) {
  return {a.lo + b.lo, a.hi + b.hi, a.exact && b.exact};
}

Interval operator-(const Interval& a) { return {-a.hi, -a.lo, a.exact}; }

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
  if (a.exact && b.exact) return Interval::point(a.lo * b.lo);
  const Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Rational lo = p[0];
  Rational hi = p[0];
  for (const auto& v : p) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return {lo, hi, false};
}

Interval operator*(const Interval& a, const Rational& c) {
  if (c >= 0) return {a.lo * c, a.hi * c, a.exact};
  return {a.hi * c, a.lo * c, a.exact};
}

Interval abs(const Interval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  const Rational top = std::max(Rational(-a.lo), a.hi);
  return {0, top, false};
}

Interval clamp_unit(const Interval& a) {
  Interval r = a;
  if (r.lo < 0) r.lo = 0;
  if (r.hi > 1) r.hi = 1;
  if (r.hi < r.lo) {
    throw Error(ErrorCode::kInvalidArgument,
                "enclosure does not meet [0, 1]: " + to_string(a.lo) + ".." +
                    to_string(a.hi));
  }
  return r;
}

Interval round_outward(const Interval& a, unsigned bits) {
  if (a.exact) return a;
  return {floor_dyadic(a.lo, bits), ceil_dyadic(a.hi, bits), false};
}

namespace {

// Bounds for e^z with 0 <= z <= 1/2 from a Taylor polynomial of degree < terms.
// The remainder is at most z^terms / terms! * e^z < 2 z^terms / terms!.
Interval exp_small(const Rational& z_lo, const Rational& z_hi, unsigned bits) {
  constexpr int kTerms = 40;
  auto taylor = [](const Rational& z, Rational* last_term) {
    Rational sum = 0;
    Rational term = 1;
    for (int i = 0; i < kTerms; ++i) {
      sum += term;
      term = term * z / (i + 1);
    }
    *last_term = term;
    return sum;
  };
  Rational unused;
  Rational lo = taylor(z_lo, &unused);
  Rational tail;
  Rational hi = taylor(z_hi, &tail);
  hi += 2 * tail;
  return {floor_dyadic(lo, bits), ceil_dyadic(hi, bits), false};
}

}  // namespace

Interval exp_enclosure(const Rational& x, unsigned bits) {
  if (x == 0) return Interval::point(1);
  const Rational y = x < 0 ? Rational(-x) : x;
  unsigned halvings = 0;
  Rational z = y;
  while (z > Rational(1, 2)) {
    z /= 2;
    ++halvings;
  }
  // Work with extra guard bits so the repeated squaring stays tight.
  const unsigned work = bits + 2 * halvings + 64;
  Interval e = exp_small(floor_dyadic(z, work), ceil_dyadic(z, work), work);
  for (unsigned i = 0; i < halvings; ++i) {
    e = {floor_dyadic(e.lo * e.lo, work), ceil_dyadic(e.hi * e.hi, work), false};
  }
  if (x < 0) {
    e = {floor_dyadic(Rational(1) / e.hi, work), ceil_dyadic(Rational(1) / e.lo, work),
         false};
  }
  return round_outward(e, bits);
}

}  // namespace bfree
