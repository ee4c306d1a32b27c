// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "bfree/chowla.hpp"
#include "bfree/dynamics.hpp"
#include "bfree/measure.hpp"
#include "bfree/primes.hpp"
#include "bfree/sieve.hpp"
#include "bfree/subshift.hpp"
#include "common/oracles.hpp"

using namespace bfree;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// pi is in [3.14159265358979323846, 3.14159265358979323847].
Interval six_over_pi_squared() {
  const Rational pi_lo(BigInt("314159265358979323846"), BigInt("100000000000000000000"));
  const Rational pi_hi(BigInt("314159265358979323847"), BigInt("100000000000000000000"));
  return Interval::between(6 / (pi_hi * pi_hi), 6 / (pi_lo * pi_lo));
}

// Largest distance from x to a point of the interval.
Rational far_distance(const Interval& v, const Rational& x) {
  return std::max(abs(Rational(x - v.lo)), abs(Rational(x - v.hi)));
}

const BFamily& squarefree() {
  static const BFamily f = r_free_family(2, 999999);
  return f;
}

std::vector<std::string> words(std::size_t width, const std::string& alphabet) {
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

Outcome ac1() {
  Outcome o;
  const BFamily& f = squarefree();
  const Interval e = entropy_interval(f, f.prime_depth(1000000));
  o.require(e.width() <= Rational(2, 1000000), "width " + std::to_string(to_double(e.width())));
  o.require(e.contains(six_over_pi_squared()), "6/pi^2 outside the enclosure");
  if (o.ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%.12f, %.12f], width %.2e", to_double(e.lo), to_double(e.hi),
                  to_double(e.width()));
    o.detail = buf;
  }
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto r = empirical_frequency(squarefree(), Pattern::parse("1"), 10'000'000);
  const Rational d = far_distance(six_over_pi_squared(), r.empirical);
  o.require(d <= Rational(1, 1000), "distance " + std::to_string(to_double(d)));
  if (o.ok) o.detail = "frequency " + std::to_string(to_double(r.empirical));
  return o;
}

Outcome ac3() {
  Outcome o;
  std::mt19937_64 gen(3);
  std::size_t checked = 0;
  for (const std::vector<std::uint64_t>& m :
       {std::vector<std::uint64_t>{4, 9}, {4, 9, 25}, {2}, {3, 4, 5}}) {
    const BFamily f = explicit_family(m);
    for (std::size_t w = 1; w <= 6; ++w) {
      for (const auto& p : words(w, "10")) {
        const Pattern pat = Pattern::parse(p);
        const Interval v = nu_cylinder(pat, f);
        o.require(v.exact && v.lo == nu_exact_finite(pat, f), "pattern " + p);
        o.require(v.lo == oracle::nu(p, m), "Omega oracle, pattern " + p);
        ++checked;
      }
    }
    for (int t = 0; t < 200; ++t) {
      std::string p;
      const std::size_t width = 1 + gen() % 8;
      for (std::size_t j = 0; j < width; ++j) p += "10*"[gen() % 3];
      if (p.find('*') == std::string::npos) p[gen() % width] = '*';
      if (p.find_first_not_of('*') == std::string::npos) p[0] = '0';
      const Pattern pat = Pattern::parse(p);
      const Interval v = nu_cylinder(pat, f);
      o.require(v.exact && v.lo == nu_exact_finite(pat, f), "random pattern " + p);
      ++checked;
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " patterns";
  return o;
}

Outcome ac4() {
  Outcome o;
  for (const std::vector<std::uint64_t>& m :
       {std::vector<std::uint64_t>{2}, {4}, {4, 9}, {3, 5}}) {
    const BFamily f = explicit_family(m);
    for (unsigned n = 0; n <= 15; ++n) {
      const auto dp = count_words_dp(n, f).count;
      o.require(dp == count_words_bruteforce(n, f).count, "n=" + std::to_string(n));
      o.require(dp == oracle::gamma(n, m), "oracle n=" + std::to_string(n));
    }
  }
  const std::uint64_t m49[] = {4, 9};
  const std::uint64_t m4[] = {4};
  const GammaBracket a = gamma_bracket_check(36, m49);
  const GammaBracket b = gamma_bracket_check(4, m4);
  o.require(a.holds, "bracket {4,9} n=36");
  o.require(b.holds, "bracket {4} n=4");
  if (o.ok) {
    o.detail = "gamma_{4,9}(36)=" + to_string(a.count) + " in [2^24, 2^24*36]";
  }
  return o;
}

Outcome ac5() {
  Outcome o;
  const std::uint64_t N = 10'000'000;
  const std::uint64_t count = twin_count(squarefree(), N, 2);
  const std::uint64_t A[] = {1, 3};
  const Interval ref = nu_one_cylinder(A, squarefree());
  const Rational freq = make_rational(count, N);
  const Rational d = far_distance(ref, freq);
  o.require(d <= Rational(1, 1000), "distance " + std::to_string(to_double(d)));
  if (o.ok) {
    o.detail = "frequency " + std::to_string(to_double(freq)) + ", reference [" +
               std::to_string(to_double(ref.lo)) + ", " + std::to_string(to_double(ref.hi)) + "]";
  }
  return o;
}

Outcome ac6() {
  Outcome o;
  const auto r = short_interval_mean(squarefree(), Pattern::parse("1"), 1000, 1'000'000,
                                     10'000'000, 20240601);
  const Rational d = far_distance(six_over_pi_squared(), r.empirical);
  o.require(d <= Rational(5, 1000), "distance " + std::to_string(to_double(d)));
  const std::uint64_t h = short_interval_hypothesis_check(squarefree(), 1000, 1'000'000);
  o.require(h <= 1, "hypothesis max " + std::to_string(h));
  if (o.ok) {
    o.detail = "mean " + std::to_string(to_double(r.empirical)) + ", hypothesis max " +
               std::to_string(h);
  }
  return o;
}

Outcome ac7() {
  Outcome o;
  const auto a = arithmetic_average(squarefree(), Pattern::parse("1"), 2, 3, 1'000'000);
  o.require(a.m == 2, "m = " + std::to_string(a.m));
  const Rational d = far_distance(six_over_pi_squared(), a.report.empirical);
  o.require(d <= Rational(1, 1000), "distance " + std::to_string(to_double(d)));
  if (o.ok) o.detail = "m=2, average " + std::to_string(to_double(a.report.empirical));
  return o;
}

Outcome ac8() {
  Outcome o;
  const auto trials = recovery_experiment(explicit_family({4, 9, 25, 49}), 4, 10000, 100, 8);
  int singles = 0;
  int contained = 0;
  for (const auto& t : trials) {
    singles += t.all_singletons;
    contained += t.contains_truth;
  }
  o.require(trials.size() == 100, "trial count");
  o.require(singles >= 99, "singletons " + std::to_string(singles));
  o.require(contained == 100, "contained " + std::to_string(contained));
  if (o.ok) o.detail = std::to_string(singles) + "/100 recovered, " + std::to_string(contained) + "/100 contain truth";
  return o;
}

Outcome ac9() {
  Outcome o;
  const Interval b23 = bias(RootedContext::make(rooted_family({2, 3})));
  const Interval b35 = bias(RootedContext::make(rooted_family({3, 5})));
  o.require(b23.exact && b23.lo == Rational(1, 2), "roots {2,3}");
  o.require(b35.exact && b35.lo == Rational(3, 5), "roots {3,5}");
  o.require(b35.lo == oracle::bias({3, 5}), "roots {3,5} oracle");
  const RootedContext ctx = RootedContext::make(rooted_primes_family(3, 1000));
  Rational sigma = 0;
  for (auto p : oracle::primes(3, 1000)) sigma += Rational(1, p);
  o.require(ctx.sigma && *ctx.sigma == sigma, "Sigma");
  const Interval dev = abs(bias(ctx) * Rational(2) - Interval::point(1));
  const Interval bound = exp_enclosure(-2 * sigma);
  o.require(dev.hi <= bound.lo, "deviation not below exp(-2 Sigma)");
  if (o.ok) {
    o.detail = "|2b-1| <= " + std::to_string(to_double(dev.hi)) + " <= exp(-2S) >= " +
               std::to_string(to_double(bound.lo));
  }
  return o;
}

Outcome ac10() {
  Outcome o;
  const std::uint64_t xs[] = {10, 100, 1000, 10000};
  std::vector<RootedContext> ctx;
  for (auto X : xs) ctx.push_back(RootedContext::make(rooted_primes_family(3, X)));
  const auto one = bernoulli_convergence(ctx, 1, 1, 0);
  for (std::size_t i = 0; i < one.size(); ++i) {
    Rational prod = 1;
    for (auto p : oracle::primes(3, xs[i])) prod *= Rational(p - 2, p);
    o.require(one[i].deviation == abs(prod) / 2, "m=1 exact, X=" + std::to_string(xs[i]));
    if (i > 0) o.require(one[i].deviation < one[i - 1].deviation, "m=1 not decreasing");
  }
  const auto two = bernoulli_convergence(ctx, 2, 1'000'000, 1234);
  std::string devs;
  for (std::size_t i = 0; i < two.size(); ++i) {
    devs += (i ? ", " : "") + std::to_string(to_double(two[i].deviation));
    if (i == 0) continue;
    const double slack =
        3 * std::hypot(two[i].standard_error, two[i - 1].standard_error);
    o.require(to_double(two[i].deviation) <= to_double(two[i - 1].deviation) + slack,
              "m=2 increase at X=" + std::to_string(xs[i]));
  }
  if (o.ok) o.detail = "m=2 deviations " + devs;
  return o;
}

Outcome ac11() {
  Outcome o;
  const std::vector<std::vector<std::uint64_t>> shift_sets = {{0, 1}, {0, 2}, {0, 1, 3}, {0, 5}};
  struct Case {
    BFamily family;
    std::uint64_t period;
  };
  const std::vector<Case> cases = {{rooted_family({2, 3}), 36},
                                   {rooted_family({3, 5}), 225},
                                   {explicit_family({4, 9, 25}), 900}};
  for (const auto& c : cases) {
    for (const auto& shifts : shift_sets) {
      const std::uint64_t N = 2 * c.period;
      const std::uint64_t hi = N + shifts.back() + 1;
      const SieveSegment seg = c.family.is_rooted() ? sieve_mu(c.family, 1, hi)
                                                    : sieve_eta(c.family, 1, hi);
      const std::vector<unsigned> even(shifts.size(), 2);
      std::vector<std::uint64_t> A;
      for (auto s : shifts) A.push_back(s + 1);
      const Interval ref = nu_one_cylinder(A, c.family);
      o.require(ref.exact && chowla_correlation(seg, shifts, even, N) == ref.lo,
                "even correlation");
      for (std::size_t j = 0; j < shifts.size(); ++j) {
        std::vector<unsigned> odd = even;
        odd[j] = 1;
        const Interval z = nu_M_correlation(shifts, odd, c.family);
        o.require(z.exact && z.lo == 0, "odd nu_M correlation");
      }
    }
  }
  const std::uint64_t s[] = {0, 1};
  const unsigned e[] = {1, 1};
  const Interval z = nu_M_correlation(s, e, mobius_family(1000));
  o.require(z.exact && z.lo == 0, "odd nu_M correlation, Moebius");
  if (o.ok) o.detail = "even = reference, odd = 0";
  return o;
}

Outcome ac12() {
  Outcome o;
  std::mt19937_64 gen(12);
  const BFamily sq = r_free_family(2, 1000);
  const SieveSegment whole = sieve_eta(sq, 1, 2'000'000);
  for (int t = 0; t < 20; ++t) {
    const std::uint64_t cut = 2 + gen() % 1'999'990;
    BitVector joined = sieve_eta(sq, 1, cut).eta;
    joined.append(sieve_eta(sq, cut, 2'000'000).eta);
    o.require(joined.words() == whole.eta.words(), "split at " + std::to_string(cut));
  }

  Rng rng(12);
  for (int t = 0; t < 1000; ++t) {
    const GroupPoint w = GroupPoint::random(sq, 20, rng);
    const std::uint64_t s = rng.uniform_below(100000);
    const BitVector a = phi_window(advance(w, s), 256);
    const BitVector b = phi_window(w, 256 + s);
    for (std::size_t i = 0; i < 256; ++i) {
      if (a.test(i) != b.test(i + s)) {
        o.require(false, "equivariance");
        break;
      }
    }
  }

  for (const std::vector<std::uint64_t>& m :
       {std::vector<std::uint64_t>{4, 9}, {4, 9, 25}, {2}, {3, 4, 5}}) {
    const BFamily f = explicit_family(m);
    for (std::size_t w = 1; w <= 4; ++w) {
      Rational sum = 0;
      for (const auto& p : words(w, "10")) sum += nu_cylinder(Pattern::parse(p), f).lo;
      o.require(sum == 1, "partition of unity");
    }
  }
  if (o.ok) o.detail = "splitting, equivariance, partition of unity";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    const char* what;
    double limit_seconds;  // 0: no limit
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"AC1", "entropy enclosure of 6/pi^2", 2, ac1},
      {"AC2", "density genericity N=10^7", 15, ac2},
      {"AC3", "nu_cylinder = nu_exact_finite", 0, ac3},
      {"AC4", "word counts and gamma bracket", 0, ac4},
      {"AC5", "twin square-free N=10^7", 20, ac5},
      {"AC6", "short intervals", 60, ac6},
      {"AC7", "arithmetic subsequences", 10, ac7},
      {"AC8", "coordinate recovery", 5, ac8},
      {"AC9", "sign bias", 0, ac9},
      {"AC10", "Bernoulli convergence", 120, ac10},
      {"AC11", "Chowla substitute", 0, ac11},
      {"AC12", "invariant suites", 10, ac12},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.ok = false;
      o.detail += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit)";
    }
    failures += !o.ok;
    std::printf("%s %s: %s; %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", c.name, c.what,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures;
}
