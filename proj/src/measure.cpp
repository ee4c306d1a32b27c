#include "bfree/measure.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "bfree/error.hpp"
#include "bfree/sieve.hpp"

namespace bfree {

Pattern::Pattern(std::vector<Cell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw Error(ErrorCode::kInvalidArgument, "pattern of width 0");
  if (std::all_of(cells_.begin(), cells_.end(), [](Cell c) { return c == Cell::kFree; })) {
    throw Error(ErrorCode::kInvalidArgument, "pattern needs a non-free cell");
  }
}

Pattern Pattern::parse(std::string_view text) {
  std::vector<Cell> cells;
  for (char c : text) {
    switch (c) {
      case '1': cells.push_back(Cell::kOne); break;
      case '0': cells.push_back(Cell::kZero); break;
      case '*': case '.': cells.push_back(Cell::kFree); break;
      default:
        throw Error(ErrorCode::kInvalidArgument,
                    std::string("bad pattern character '") + c + "'", "pattern");
    }
  }
  return Pattern(std::move(cells));
}

std::vector<std::uint64_t> Pattern::ones() const {
  std::vector<std::uint64_t> out;
  for (std::size_t j = 0; j < cells_.size(); ++j) {
    if (cells_[j] == Cell::kOne) out.push_back(j + 1);
  }
  return out;
}

std::vector<std::uint64_t> Pattern::zeros() const {
  std::vector<std::uint64_t> out;
  for (std::size_t j = 0; j < cells_.size(); ++j) {
    if (cells_[j] == Cell::kZero) out.push_back(j + 1);
  }
  return out;
}

std::string Pattern::str() const {
  std::string s;
  for (Cell c : cells_) s.push_back(c == Cell::kOne ? '1' : c == Cell::kZero ? '0' : '*');
  return s;
}

SignedPattern::SignedPattern(std::vector<SignedCell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw Error(ErrorCode::kInvalidArgument, "pattern of width 0");
  if (std::all_of(cells_.begin(), cells_.end(),
                  [](SignedCell c) { return c == SignedCell::kFree; })) {
    throw Error(ErrorCode::kInvalidArgument, "pattern needs a non-free cell");
  }
}

SignedPattern SignedPattern::parse(std::string_view text) {
  std::vector<SignedCell> cells;
  for (char c : text) {
    switch (c) {
      case '+': cells.push_back(SignedCell::kPlus); break;
      case '-': cells.push_back(SignedCell::kMinus); break;
      case '0': cells.push_back(SignedCell::kZero); break;
      case '*': case '.': cells.push_back(SignedCell::kFree); break;
      default:
        throw Error(ErrorCode::kInvalidArgument,
                    std::string("bad signed pattern character '") + c + "'", "pattern");
    }
  }
  return SignedPattern(std::move(cells));
}

std::size_t SignedPattern::lambda() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](SignedCell c) {
    return c == SignedCell::kPlus || c == SignedCell::kMinus;
  }));
}

Pattern SignedPattern::squared() const {
  std::vector<Cell> out;
  for (SignedCell c : cells_) {
    switch (c) {
      case SignedCell::kPlus:
      case SignedCell::kMinus: out.push_back(Cell::kOne); break;
      case SignedCell::kZero: out.push_back(Cell::kZero); break;
      case SignedCell::kFree: out.push_back(Cell::kFree); break;
    }
  }
  return Pattern(std::move(out));
}

std::string SignedPattern::str() const {
  std::string s;
  for (SignedCell c : cells_) {
    s.push_back(c == SignedCell::kPlus    ? '+'
                : c == SignedCell::kMinus ? '-'
                : c == SignedCell::kZero  ? '0'
                                          : '*');
  }
  return s;
}

std::size_t residue_count(std::span<const std::uint64_t> A, std::uint64_t b) {
  if (A.empty()) return 0;
  std::vector<std::uint64_t> r;
  r.reserve(A.size());
  for (std::uint64_t n : A) r.push_back(n % b);
  std::sort(r.begin(), r.end());
  return static_cast<std::size_t>(std::unique(r.begin(), r.end()) - r.begin());
}

Admissibility check_admissible_set(std::span<const std::uint64_t> A, const BFamily& family) {
  // Moduli above |A| cannot be exhausted by A.
  for (std::uint64_t b : family.moduli_up_to(A.size())) {
    if (residue_count(A, b) == b) return {false, b};
  }
  return {};
}

bool is_admissible_set(std::span<const std::uint64_t> A, const BFamily& family) {
  return check_admissible_set(A, family).admissible;
}

namespace {

std::vector<std::uint64_t> support(std::span<const std::uint8_t> w) {
  std::vector<std::uint64_t> A;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i]) A.push_back(i + 1);
  }
  return A;
}

}  // namespace

bool is_admissible_word(std::span<const std::uint8_t> w, const BFamily& family) {
  return is_admissible_set(support(w), family);
}

bool is_admissible_word(std::span<const std::uint8_t> w,
                        std::span<const std::uint64_t> moduli) {
  const auto A = support(w);
  for (std::uint64_t b : moduli) {
    if (b <= A.size() && residue_count(A, b) == b) return false;
  }
  return true;
}

namespace {

BigInt product_of(std::span<const std::uint64_t> values, std::uint64_t minus) {
  std::vector<BigInt> f;
  f.reserve(values.size());
  for (std::uint64_t b : values) f.push_back(to_big(b - minus));
  return product(f);
}

// Evaluates nu_B(C^1_D) for subsets D of {1..width}. Moduli >= width see
// |D| distinct residues, so their contribution depends on |D| only and is
// cached per size.
class CylinderEvaluator {
 public:
  CylinderEvaluator(const BFamily& family, const MeasureOptions& options, std::uint64_t width)
      : exact_(family.is_finite()) {
    std::vector<std::uint64_t> moduli;
    if (exact_) {
      moduli.assign(family.moduli().begin(), family.moduli().end());
    } else {
      std::size_t K = options.K.value_or(family.size());
      K = std::max(K, family.count_up_to(width));
      moduli = family.moduli_prefix(K);
      tail_ = family.tail_sum_bound(K);
    }
    for (std::uint64_t b : moduli) (b < width ? small_ : large_).push_back(b);
    large_den_ = product_of(large_, 0);
  }

  Interval one(std::span<const std::uint64_t> D) {
    if (D.empty()) return Interval::point(1);
    BigInt num = 1;
    BigInt den = 1;
    for (std::uint64_t b : small_) {
      const std::size_t t = residue_count(D, b);
      if (t == b) return Interval::point(0);
      num *= to_big(b - t);
      den *= to_big(b);
    }
    const std::size_t j = D.size();
    auto it = large_num_.find(j);
    if (it == large_num_.end()) {
      it = large_num_.emplace(j, product_of(large_, j)).first;
    }
    num *= it->second;
    den *= large_den_;
    if (num == 0) return Interval::point(0);
    if (exact_) return Interval::point(make_rational(num, den));
    // prod_{k>K} (1 - t/b_k) >= 1 - |D| * tail, clamped at 0.
    Rational keep = 1 - tail_ * static_cast<unsigned long>(j);
    if (keep < 0) keep = 0;
    const Rational lo =
        floor_dyadic(BigInt(num * keep.get_num()), BigInt(den * keep.get_den()), kEnclosureBits);
    const Rational hi = ceil_dyadic(num, den, kEnclosureBits);
    return {lo, hi, false};
  }

 private:
  bool exact_;
  Rational tail_{0};
  std::vector<std::uint64_t> small_;
  std::vector<std::uint64_t> large_;
  BigInt large_den_;
  std::map<std::size_t, BigInt> large_num_;
};

std::uint64_t max_position(std::span<const std::uint64_t> A) {
  return A.empty() ? 0 : *std::max_element(A.begin(), A.end());
}

}  // namespace

Interval nu_one_cylinder(std::span<const std::uint64_t> A, const BFamily& family,
                         const MeasureOptions& options) {
  if (A.empty()) return Interval::point(1);
  std::vector<std::uint64_t> sorted(A.begin(), A.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!is_admissible_set(sorted, family)) return Interval::point(0);
  // Shift so that positions start at 1; t(A, b) is translation invariant.
  const std::uint64_t base = sorted.front() - 1;
  for (auto& n : sorted) n -= base;
  CylinderEvaluator eval(family, options, max_position(sorted));
  return clamp_unit(eval.one(sorted));
}

Interval nu_cylinder(const Pattern& pattern, const BFamily& family,
                     const MeasureOptions& options) {
  const auto A = pattern.ones();
  const auto B = pattern.zeros();
  if (!is_admissible_set(A, family)) return Interval::point(0);
  if (B.size() >= 63 || (std::uint64_t{1} << B.size()) > options.inclusion_exclusion_budget) {
    throw Error(ErrorCode::kPatternTooWide,
                "2^" + std::to_string(B.size()) + " inclusion-exclusion terms exceed budget");
  }
  CylinderEvaluator eval(family, options, pattern.width());
  Interval sum = Interval::point(0);
  std::vector<std::uint64_t> D;
  const std::uint64_t terms = std::uint64_t{1} << B.size();
  for (std::uint64_t mask = 0; mask < terms; ++mask) {
    D = A;
    for (std::size_t i = 0; i < B.size(); ++i) {
      if (mask >> i & 1) D.push_back(B[i]);
    }
    std::sort(D.begin(), D.end());
    const Interval term = eval.one(D);
    if (std::popcount(mask) % 2 == 0) {
      sum = sum + term;
    } else {
      sum = sum - term;
    }
  }
  return clamp_unit(round_outward(sum));
}

bool pattern_matches_at(const BitVector& bits, const Pattern& pattern, std::size_t offset) {
  for (std::size_t j = 0; j < pattern.width(); ++j) {
    const Cell c = pattern[j];
    if (c == Cell::kFree) continue;
    if (bits.test(offset + j) != (c == Cell::kOne)) return false;
  }
  return true;
}

std::uint64_t count_pattern_matches(const BitVector& bits, const Pattern& pattern,
                                    std::size_t offsets) {
  if (offsets == 0) return 0;
  if (bits.size() + 1 < offsets + pattern.width()) {
    throw Error(ErrorCode::kWindowTooShort, "bit window shorter than the scanned range");
  }
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < offsets; i += 64) {
    std::uint64_t acc = ~std::uint64_t{0};
    for (std::size_t j = 0; j < pattern.width(); ++j) {
      const Cell c = pattern[j];
      if (c == Cell::kFree) continue;
      const std::uint64_t w = bits.window64(i + j);
      acc &= c == Cell::kOne ? w : ~w;
    }
    if (offsets - i < 64) acc &= (std::uint64_t{1} << (offsets - i)) - 1;
    count += static_cast<std::uint64_t>(std::popcount(acc));
  }
  return count;
}

Rational nu_exact_finite(const Pattern& pattern, const BFamily& family,
                         std::uint64_t period_budget) {
  if (!family.is_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "period counting needs a finite family");
  }
  std::uint64_t period = 1;
  for (std::uint64_t b : family.moduli()) {
    if (period > period_budget / b) {
      throw Error(ErrorCode::kPeriodTooLarge, "period exceeds budget");
    }
    period *= b;
  }
  const SieveSegment seg = sieve_eta(family, 1, period + pattern.width());
  return make_rational(count_pattern_matches(seg.eta, pattern, period), period);
}

Interval nu_M_cylinder(const SignedPattern& pattern, const BFamily& family,
                       const MeasureOptions& options) {
  if (!family.is_rooted()) {
    throw Error(ErrorCode::kNotRootedFamily, "nu_M needs a rooted family");
  }
  BigInt pow2 = 1;
  mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), pattern.lambda());
  return nu_cylinder(pattern.squared(), family, options) * make_rational(BigInt(1), pow2);
}

Interval nu_M_correlation(std::span<const std::uint64_t> shifts,
                          std::span<const unsigned> exponents, const BFamily& family,
                          const MeasureOptions& options) {
  if (shifts.empty() || shifts.size() != exponents.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need r >= 1 shifts with matching exponents");
  }
  for (std::size_t i = 1; i < shifts.size(); ++i) {
    if (shifts[i] <= shifts[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "shifts must be strictly increasing", "shifts");
    }
  }
  bool odd = false;
  for (unsigned e : exponents) {
    if (e != 1 && e != 2) {
      throw Error(ErrorCode::kInvalidArgument, "exponents must be 1 or 2", "exponents");
    }
    odd = odd || e == 1;
  }
  // Signs on nonzero cells are independent fair coins under nu_M.
  if (odd) return Interval::point(0);
  std::vector<std::uint64_t> A;
  for (std::uint64_t s : shifts) A.push_back(s + 1);
  return nu_one_cylinder(A, family, options);
}

Interval sign_product(const BFamily& family, std::optional<std::size_t> K) {
  if (!family.is_rooted()) {
    throw Error(ErrorCode::kNotRootedFamily, "sign product needs a rooted family");
  }
  const auto roots = family.is_finite() ? std::vector<std::uint64_t>(family.roots().begin(),
                                                                      family.roots().end())
                                        : family.roots_prefix(K.value_or(family.size()));
  std::vector<BigInt> num;
  std::vector<BigInt> den;
  for (std::uint64_t a : roots) {
    if (a == 2) return Interval::point(0);
    num.push_back(to_big(a - 2));
    den.push_back(to_big(a));
  }
  const BigInt n = product(num);
  const BigInt d = product(den);
  if (family.is_finite()) return Interval::point(make_rational(n, d));
  // Every omitted factor lies in [0, 1), so the partial product is an upper
  // bound and 0 a lower one (the infinite product diverges to 0 here).
  return {0, ceil_dyadic(n, d, kEnclosureBits), false};
}

}  // namespace bfree
