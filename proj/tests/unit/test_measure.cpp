#include <doctest.h>

#include <random>

#include "bfree/error.hpp"
#include "bfree/measure.hpp"
#include "bfree/sieve.hpp"
#include "common/oracles.hpp"

using namespace bfree;

namespace {

std::vector<std::string> all_words(std::size_t width, const std::string& alphabet) {
  std::vector<std::string> out = {""};
  for (std::size_t i = 0; i < width; ++i) {
    std::vector<std::string> next;
    for (const auto& w : out) {
      for (char c : alphabet) next.push_back(w + c);
    }
    out = std::move(next);
  }
  return out;
}


}  // namespace

TEST_CASE("worked example") {
  const BFamily f = explicit_family({4, 9});
  const Interval v = nu_cylinder(Pattern::parse("10"), f);
  CHECK(v.exact);
  CHECK(v.lo == Rational(5, 18));
  CHECK(nu_exact_finite(Pattern::parse("10"), f) == Rational(5, 18));
}

TEST_CASE("cylinders match the Omega oracle") {
  for (const std::vector<std::uint64_t>& m :
       {std::vector<std::uint64_t>{4, 9}, {2}, {3, 4, 5}, {4, 9, 25}}) {
    const BFamily f = explicit_family(m);
    for (std::size_t w = 1; w <= 4; ++w) {
      for (const auto& p : all_words(w, "10*")) {
        if (p.find_first_not_of('*') == std::string::npos) continue;
        const mpq_class want = oracle::nu(p, m);
        const Interval got = nu_cylinder(Pattern::parse(p), f);
        CHECK_MESSAGE(got.exact, p);
        CHECK_MESSAGE(got.lo == want, p);
      }
    }
  }
}

TEST_CASE("partition of unity and marginals") {
  const BFamily f = explicit_family({4, 9, 25});
  for (std::size_t w = 1; w <= 4; ++w) {
    Rational sum = 0;
    for (const auto& p : all_words(w, "10")) sum += nu_cylinder(Pattern::parse(p), f).lo;
    CHECK(sum == 1);
  }
  // Summing out the last cell recovers the shorter cylinder.
  for (const auto& p : all_words(3, "10")) {
    const Rational parent = nu_cylinder(Pattern::parse(p), f).lo;
    const Rational kids =
        nu_cylinder(Pattern::parse(p + "1"), f).lo + nu_cylinder(Pattern::parse(p + "0"), f).lo;
    CHECK(parent == kids);
  }
}

TEST_CASE("positivity iff admissible") {
  const BFamily f = explicit_family({2, 9});
  for (const auto& p : all_words(5, "1*")) {
    if (p.find('1') == std::string::npos) continue;
    const Pattern pat = Pattern::parse(p);
    const auto A = pat.ones();
    CHECK_MESSAGE((nu_cylinder(pat, f).lo > 0) == is_admissible_set(A, f), p);
  }
  // With zeros present admissibility is not enough: 3 and 5 need two classes mod 9.
  CHECK(is_admissible_set(std::vector<std::uint64_t>{1}, f));
  CHECK(nu_cylinder(Pattern::parse("10000"), f).lo == 0);
  const std::uint64_t A[] = {1, 2, 3, 4};
  const auto adm = check_admissible_set(A, explicit_family({4, 9}));
  CHECK_FALSE(adm.admissible);
  CHECK(*adm.violated_modulus == 4);
  CHECK(residue_count(A, 3) == 3);
  const std::uint8_t w[] = {1, 0, 1, 1};
  CHECK(is_admissible_word(w, explicit_family({4})));
}

TEST_CASE("shift invariance on a finite family") {
  const BFamily f = explicit_family({4, 9});
  for (const auto& p : all_words(3, "10*")) {
    if (p.find_first_not_of('*') == std::string::npos) continue;
    CHECK(nu_cylinder(Pattern::parse("*" + p), f).lo == nu_cylinder(Pattern::parse(p), f).lo);
  }
}

TEST_CASE("infinite family enclosure") {
  const BFamily f = r_free_family(2, 200);
  const Interval one = nu_cylinder(Pattern::parse("1"), f);
  CHECK_FALSE(one.exact);
  CHECK(one.lo < one.hi);
  CHECK(one.lo < Rational(60792710, 100000000));
  CHECK(one.hi > Rational(60792711, 100000000));
  CHECK(one.width() < Rational(1, 100));
  // Deeper truncation narrows the enclosure and stays nested.
  MeasureOptions deep;
  deep.K = 5000;
  const Interval narrow = nu_cylinder(Pattern::parse("1"), f, deep);
  CHECK(narrow.width() < one.width());
  CHECK(one.lo <= narrow.hi);
  CHECK(narrow.lo <= one.hi);
  // A long-range pattern pulls in moduli past the prefix.
  const Interval twin = nu_cylinder(Pattern::parse("1*1"), f);
  CHECK(twin.lo < Rational(32264, 100000));
  CHECK(twin.hi > Rational(32263, 100000));
}

TEST_CASE("random wide patterns against the period oracle") {
  std::mt19937_64 gen(20240917);
  const BFamily f = explicit_family({3, 4, 5});
  for (int t = 0; t < 50; ++t) {
    std::string p;
    const int width = 1 + static_cast<int>(gen() % 8);
    for (int j = 0; j < width; ++j) p += "10*"[gen() % 3];
    if (p.find_first_not_of('*') == std::string::npos) p[0] = '1';
    const Pattern pat = Pattern::parse(p);
    CHECK_MESSAGE(nu_cylinder(pat, f).lo == nu_exact_finite(pat, f), p);
  }
}

TEST_CASE("signed cylinders") {
  const BFamily f = rooted_family({2, 3});
  const SignedPattern sp = SignedPattern::parse("+-0*");
  CHECK(sp.lambda() == 2);
  CHECK(sp.squared().str() == "110*");
  const Interval v = nu_M_cylinder(sp, f);
  CHECK(v.lo == nu_cylinder(Pattern::parse("110*"), f).lo / 4);
  const std::uint64_t shifts[] = {0, 2};
  const unsigned odd[] = {1, 2};
  const unsigned even[] = {2, 2};
  CHECK(nu_M_correlation(shifts, odd, f).lo == 0);
  CHECK(nu_M_correlation(shifts, odd, f).exact);
  CHECK(nu_M_correlation(shifts, even, f).lo == nu_cylinder(Pattern::parse("1*1"), f).lo);
  CHECK(nu_M_correlation(shifts, odd, mobius_family(100)).lo == 0);
}

TEST_CASE("sign product") {
  CHECK(sign_product(rooted_family({3, 5})).lo == Rational(1, 5));
  CHECK(sign_product(rooted_family({2, 3})).lo == 0);
  const Interval inf = sign_product(mobius_family(100, 3));
  CHECK(inf.lo == 0);
  CHECK(inf.hi > 0);
}

TEST_CASE("pattern matching against a bit window") {
  const BFamily f = r_free_family(2, 50);
  const SieveSegment s = sieve_eta(f, 1, 3000);
  for (const char* p : {"1", "10", "1*1", "0110", "1111*0*1", "10000000000000000000000000000000000000000000000000000000000000000001"}) {
    const Pattern pat = Pattern::parse(p);
    const std::size_t offsets = 3000 - pat.width();
    std::uint64_t naive = 0;
    for (std::size_t i = 0; i < offsets; ++i) naive += pattern_matches_at(s.eta, pat, i);
    CHECK(count_pattern_matches(s.eta, pat, offsets) == naive);
  }
}

TEST_CASE("measure errors") {
  CHECK_THROWS_AS(Pattern::parse("1x"), Error);
  CHECK_THROWS_AS(Pattern::parse("**"), Error);
  MeasureOptions tight;
  tight.inclusion_exclusion_budget = 8;
  try {
    nu_cylinder(Pattern::parse("10000"), explicit_family({4, 9}), tight);
    FAIL("expected PatternTooWide");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPatternTooWide);
  }
  try {
    nu_exact_finite(Pattern::parse("1"), explicit_family({101, 103, 107}), 1000);
    FAIL("expected PeriodTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPeriodTooLarge);
  }
}
