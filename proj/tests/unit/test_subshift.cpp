#include <doctest.h>

#include "bfree/error.hpp"
#include "bfree/subshift.hpp"
#include "common/oracles.hpp"

using namespace bfree;

TEST_CASE("word counts agree with the oracle") {
  for (const std::vector<std::uint64_t>& m :
       {std::vector<std::uint64_t>{2}, {4}, {4, 9}, {3, 5}, {3, 4, 5}}) {
    const BFamily f = explicit_family(m);
    for (unsigned n = 0; n <= 12; ++n) {
      const auto want = oracle::gamma(n, m);
      CHECK(count_words_bruteforce(n, f).count == want);
      CHECK(count_words_dp(n, f).count == want);
    }
  }
  // {2}: the support sits inside one parity class.
  const BFamily two = explicit_family({2});
  for (unsigned n = 1; n < 60; ++n) {
    const BigInt want = (BigInt(1) << ((n + 1) / 2)) + (BigInt(1) << (n / 2)) - 1;
    CHECK(count_words_dp(n, two).count == want);
  }
}

TEST_CASE("only moduli up to n constrain words of length n") {
  const BFamily f = explicit_family({4, 9, 25});
  CHECK(count_words_dp(8, f).K_effective == 1);
  CHECK(count_words_dp(8, f).count == oracle::gamma(8, {4}));
  CHECK(count_words_bruteforce(10, f).K_effective == 2);
}

TEST_CASE("submultiplicativity") {
  const BFamily f = explicit_family({4, 9});
  for (unsigned a = 1; a < 15; ++a) {
    for (unsigned b = 1; b < 15; ++b) {
      CHECK(count_words_dp(a + b, f).count <=
            count_words_dp(a, f).count * count_words_dp(b, f).count);
    }
  }
}

TEST_CASE("gamma bracket") {
  const std::uint64_t m49[] = {4, 9};
  const GammaBracket g = gamma_bracket_check(36, m49);
  CHECK(g.exponent == 24);
  CHECK(g.holds);
  CHECK(g.lower <= g.count);
  CHECK(g.count <= g.upper);
  const std::uint64_t m4[] = {4};
  CHECK(gamma_bracket_check(4, m4).holds);
  CHECK(gamma_bracket_check(8, m4).count == oracle::gamma(8, {4}));
  CHECK_THROWS_AS(gamma_bracket_check(10, m49), Error);
}

TEST_CASE("entropy") {
  CHECK(entropy_interval(explicit_family({4, 9})).lo == Rational(2, 3));
  CHECK(entropy_interval(explicit_family({4, 9})).exact);
  const Interval sq = entropy_interval(r_free_family(2, 1000));
  CHECK(sq.lo < Rational(6079271, 10000000));
  CHECK(sq.hi > Rational(6079272, 10000000));
}

TEST_CASE("subshift errors") {
  try {
    count_words_bruteforce(21, explicit_family({4}));
    FAIL("expected LengthOverCap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kLengthOverCap);
  }
  try {
    count_words_dp(40, explicit_family({4, 9, 25}), 1 << 20);
    FAIL("expected StateBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStateBudgetExceeded);
  }
}
