#pragma once

#include "bfree/rational.hpp"

namespace bfree {

// Precision of outward rounding applied to enclosures of infinite products.
inline constexpr unsigned kEnclosureBits = 256;

// A certified enclosure [lo, hi] of a real quantity with rational endpoints.
// `exact` means lo == hi and the value is known exactly.
struct Interval {
  Rational lo{0};
  Rational hi{0};
  bool exact = true;

  static Interval point(const Rational& v) { return {v, v, true}; }
  static Interval between(const Rational& lo, const Rational& hi);

  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  Rational width() const { return hi - lo; }
  // Distance from x to the nearest point of the enclosure (0 when inside).
  Rational distance_to(const Rational& x) const;
  Rational midpoint() const { return (lo + hi) / 2; }
};

bool operator==(const Interval& a, const Interval& b);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Rational& c);
Interval abs(const Interval& a);

// Intersects with [0, 1]; used for quantities known to be probabilities.
Interval clamp_unit(const Interval& a);

// Rounds lo down and hi up to multiples of 2^-bits; exact values are kept.
Interval round_outward(const Interval& a, unsigned bits = kEnclosureBits);

// Enclosure of e^x.
Interval exp_enclosure(const Rational& x, unsigned bits = kEnclosureBits);

}  // namespace bfree
