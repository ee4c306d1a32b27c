#include "bfree/chowla.hpp"

#include <algorithm>
#include <cmath>

#include "bfree/error.hpp"
#include "bfree/measure.hpp"
#include "bfree/parallel.hpp"
#include "bfree/random.hpp"

namespace bfree {

RootedContext RootedContext::make(const BFamily& family, std::optional<std::size_t> K) {
  if (!family.is_rooted()) {
    throw Error(ErrorCode::kNotRootedFamily, "a rooted family is required");
  }
  RootedContext ctx{family, {}, family.sigma(), std::nullopt};
  const std::size_t depth = K.value_or(family.is_finite() ? family.roots().size() : family.size());
  ctx.roots = family.roots_prefix(depth);
  ctx.root_tail = family.root_tail_sum(ctx.roots.size());
  return ctx;
}

std::vector<int> parse_signs(std::string_view text) {
  std::vector<int> out;
  for (char c : text) {
    if (c == '+') {
      out.push_back(1);
    } else if (c == '-') {
      out.push_back(-1);
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("sign patterns use '+' and '-', got '") + c + "'", "pattern");
    }
  }
  return out;
}

namespace {

void check_shifts(std::span<const std::uint64_t> shifts, std::span<const unsigned> exponents) {
  if (shifts.empty() || shifts.size() != exponents.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need r >= 1 shifts with matching exponents");
  }
  for (std::size_t i = 1; i < shifts.size(); ++i) {
    if (shifts[i] <= shifts[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "shifts must be strictly increasing", "shifts");
    }
  }
  for (unsigned e : exponents) {
    if (e != 1 && e != 2) {
      throw Error(ErrorCode::kInvalidArgument, "exponents must be 1 or 2", "exponents");
    }
  }
}

void require_finite_sigma(const RootedContext& ctx) {
  if (!ctx.sigma_finite()) {
    throw Error(ErrorCode::kSigmaInfinite,
                "sum of 1/a_k diverges; Delta is almost surely infinite");
  }
}

}  // namespace

Rational chowla_correlation(const SieveSegment& mu_window, std::span<const std::uint64_t> shifts,
                            std::span<const unsigned> exponents, std::uint64_t N) {
  check_shifts(shifts, exponents);
  const bool even = std::all_of(exponents.begin(), exponents.end(), [](unsigned e) { return e == 2; });
  // mu^2 = eta, so an eta-only window suffices for even exponents.
  if (!mu_window.has_mu() && !even) {
    throw Error(ErrorCode::kInvalidArgument, "window carries no mu values");
  }
  if (N < 1) throw Error(ErrorCode::kInvalidArgument, "N must be >= 1", "N");
  if (mu_window.lo > 1 || mu_window.hi <= N + shifts.back()) {
    throw Error(ErrorCode::kWindowTooShort, "mu window must cover [1, N + s_r]");
  }
  std::int64_t sum = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    int prod = 1;
    for (std::size_t j = 0; j < shifts.size() && prod != 0; ++j) {
      if (!mu_window.has_mu()) {
        prod = mu_window.eta_at(n + shifts[j]) ? 1 : 0;
        continue;
      }
      const int v = mu_window.mu_at(n + shifts[j]);
      prod *= exponents[j] == 2 ? v * v : v;
    }
    sum += prod;
  }
  Rational r(sum);
  r /= to_big(N);
  return r;
}

Rational nu_prime_empirical(const RootedContext& context, std::span<const int> alpha,
                            std::uint64_t N, unsigned threads) {
  if (alpha.empty()) return 1;
  if (N < 1) throw Error(ErrorCode::kInvalidArgument, "N must be >= 1", "N");
  const SieveSegment seg = sieve_mu(context.family, 1, N + alpha.size() + 1, threads);
  std::uint64_t hits = 0;
  for (std::uint64_t n = 0; n < N; ++n) {
    bool ok = true;
    for (std::size_t j = 0; j < alpha.size() && ok; ++j) {
      ok = seg.pi_at(n + j + 1) == alpha[j];
    }
    if (ok) ++hits;
  }
  return make_rational(hits, N);
}

Rational nu_prime_exact(const RootedContext& context, std::span<const int> alpha) {
  require_finite_sigma(context);
  const std::size_t m = alpha.size();
  if (m == 0) return 1;
  if (m > 20) throw Error(ErrorCode::kPatternTooWide, "sign pattern wider than 20");
  std::vector<std::uint64_t> residues;
  std::vector<BigInt> num;
  std::vector<BigInt> den;
  Rational total = 0;
  for (std::uint64_t J = 0; J < (std::uint64_t{1} << m); ++J) {
    // E[prod_{j in J} psi_j] factorizes over roots; for root a it is
    // (a - 2 * #{z : z + j = 0 mod a for an odd number of j in J}) / a.
    num.clear();
    den.clear();
    bool zero = false;
    for (std::uint64_t a : context.family.roots()) {
      residues.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (J >> j & 1) residues.push_back((a - (j + 1) % a) % a);
      }
      std::sort(residues.begin(), residues.end());
      std::uint64_t odd = 0;
      for (std::size_t i = 0; i < residues.size();) {
        std::size_t e = i;
        while (e < residues.size() && residues[e] == residues[i]) ++e;
        if ((e - i) % 2 == 1) ++odd;
        i = e;
      }
      const BigInt f = to_big(a) - 2 * to_big(odd);
      if (f == 0) {
        zero = true;
        break;
      }
      num.push_back(f);
      den.push_back(to_big(a));
    }
    if (zero) continue;
    int sign = 1;
    for (std::size_t j = 0; j < m; ++j) {
      if (J >> j & 1) sign *= alpha[j];
    }
    Rational term = make_rational(product(num), product(den));
    total += sign > 0 ? term : Rational(-term);
  }
  BigInt pow2 = 1;
  mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), m);
  total /= pow2;
  return total;
}

std::vector<std::uint64_t> sample_sign_patterns(const RootedContext& context, unsigned m,
                                                std::uint64_t samples, std::uint64_t seed,
                                                unsigned threads) {
  require_finite_sigma(context);
  if (samples == 0) throw Error(ErrorCode::kNoSamples, "need at least one sample", "samples");
  if (m < 1 || m > 20) throw Error(ErrorCode::kInvalidArgument, "pattern width must be 1..20");
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  const std::size_t patterns = std::size_t{1} << m;
  std::vector<std::vector<std::uint64_t>> per_chunk(chunks, std::vector<std::uint64_t>(patterns));
  const auto& roots = context.roots;
  parallel_tasks(chunks, threads, [&](std::size_t c) {
    Rng rng(derive_seed(seed, c));
    auto& counts = per_chunk[c];
    const std::uint64_t n = std::min(kChunk, samples - c * kChunk);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint32_t parity = 0;
      for (std::uint64_t a : roots) {
        const std::uint64_t u = rng.uniform_below(a);
        // Positions j >= 1 with u + j = 0 mod a.
        std::uint64_t j = a - u;
        for (; j <= m; j += a) parity ^= std::uint32_t{1} << (j - 1);
      }
      ++counts[parity];
    }
  });
  std::vector<std::uint64_t> total(patterns, 0);
  for (const auto& counts : per_chunk) {
    for (std::size_t p = 0; p < patterns; ++p) total[p] += counts[p];
  }
  return total;
}

namespace {

std::size_t pattern_index(std::span<const int> alpha) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] == -1) {
      idx |= std::size_t{1} << j;
    } else if (alpha[j] != 1) {
      throw Error(ErrorCode::kInvalidArgument, "signs must be +1 or -1", "pattern");
    }
  }
  return idx;
}

double binomial_se(std::uint64_t hits, std::uint64_t samples) {
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return std::sqrt(p * (1 - p) / static_cast<double>(samples));
}

}  // namespace

MonteCarloEstimate nu_prime_montecarlo(const RootedContext& context, std::span<const int> alpha,
                                       std::uint64_t samples, std::uint64_t seed,
                                       unsigned threads) {
  require_finite_sigma(context);
  if (samples == 0) throw Error(ErrorCode::kNoSamples, "need at least one sample", "samples");
  MonteCarloEstimate est;
  est.samples = samples;
  if (alpha.empty()) {
    est.hits = samples;
    est.estimate = 1;
    return est;
  }
  const auto counts = sample_sign_patterns(context, static_cast<unsigned>(alpha.size()),
                                           samples, seed, threads);
  est.hits = counts[pattern_index(alpha)];
  est.estimate = make_rational(est.hits, samples);
  est.standard_error = binomial_se(est.hits, samples);
  est.tail = *context.root_tail * static_cast<unsigned long>(alpha.size());
  est.error = est.standard_error + est.tail.get_d();
  return est;
}

Interval bias(const RootedContext& context) {
  require_finite_sigma(context);
  const Interval sp = sign_product(context.family);
  return (sp + Interval::point(1)) * Rational(1, 2);
}

std::vector<BernoulliRow> bernoulli_convergence(std::span<const RootedContext> contexts,
                                                unsigned m, std::uint64_t samples,
                                                std::uint64_t seed, unsigned threads) {
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "m must be >= 1", "m");
  std::vector<BernoulliRow> rows;
  const std::size_t patterns = std::size_t{1} << m;
  const Rational uniform = make_rational(1, patterns);
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    const RootedContext& ctx = contexts[i];
    require_finite_sigma(ctx);
    BernoulliRow row;
    row.root_max = ctx.family.roots().back();
    row.sigma = *ctx.sigma;
    row.m = m;
    std::vector<int> alpha(m);
    for (std::size_t p = 0; p < patterns; ++p) {
      for (unsigned j = 0; j < m; ++j) alpha[j] = (p >> j & 1) ? -1 : 1;
      const Rational dev = abs(nu_prime_exact(ctx, alpha) - uniform);
      if (dev > row.exact_deviation) row.exact_deviation = dev;
    }
    if (m == 1) {
      const Interval sp = sign_product(ctx.family);
      row.deviation = abs(sp.lo) / 2;
      row.exact = true;
    } else {
      const auto counts = sample_sign_patterns(ctx, m, samples, derive_seed(seed, i), threads);
      for (std::size_t p = 0; p < patterns; ++p) {
        const Rational dev = abs(make_rational(counts[p], samples) - uniform);
        if (dev > row.deviation) row.deviation = dev;
        row.standard_error = std::max(row.standard_error, binomial_se(counts[p], samples));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bfree
