#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bfree/family.hpp"
#include "bfree/interval.hpp"
#include "bfree/sieve.hpp"

namespace bfree {

// A rooted family (b_k = a_k^2) viewed through prod Z/a_k Z, truncated at
// depth K for sampling.
struct RootedContext {
  BFamily family;
  std::vector<std::uint64_t> roots;    // first K roots
  std::optional<Rational> sigma;       // sum 1/a_k; nullopt when infinite
  std::optional<Rational> root_tail;   // sum_{k>K} 1/a_k; nullopt when infinite

  static RootedContext make(const BFamily& family, std::optional<std::size_t> K = std::nullopt);
  bool sigma_finite() const { return sigma.has_value(); }
};

// Sign patterns over {-1, +1}, written as "+-+".
std::vector<int> parse_signs(std::string_view text);

// (1/N) sum_{1<=n<=N} prod_j mu_{n+s_j}^{i_j}, exact. The window must cover
// [1, N + s_r] and come from sieve_mu; an eta window is enough when every
// exponent is 2.
Rational chowla_correlation(const SieveSegment& mu_window, std::span<const std::uint64_t> shifts,
                            std::span<const unsigned> exponents, std::uint64_t N);

// Frequency of offsets 0 <= n < N with pi_{n+j} = alpha_j for j = 1..m.
Rational nu_prime_empirical(const RootedContext& context, std::span<const int> alpha,
                            std::uint64_t N, unsigned threads = 1);

// nu'(alpha) computed exactly from the independence of the coordinates
// (finite families only): a Fourier expansion over subsets of positions.
Rational nu_prime_exact(const RootedContext& context, std::span<const int> alpha);

struct MonteCarloEstimate {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  Rational estimate{0};
  double standard_error = 0;  // binomial
  Rational tail{0};           // m * sum_{k>K} 1/a_k
  double error = 0;           // standard_error + tail
};

// Counts of all 2^m sign patterns of (psi_1..psi_m) over S truncated Haar
// samples; index bit j set means psi_{j+1} = -1. Chunked with derived seeds,
// so the result does not depend on the thread count.
std::vector<std::uint64_t> sample_sign_patterns(const RootedContext& context, unsigned m,
                                                std::uint64_t samples, std::uint64_t seed,
                                                unsigned threads = 1);

MonteCarloEstimate nu_prime_montecarlo(const RootedContext& context, std::span<const int> alpha,
                                       std::uint64_t samples, std::uint64_t seed,
                                       unsigned threads = 1);

// P'((-1)^Delta = 1) = (1 + prod (1 - 2/a_k)) / 2.
Interval bias(const RootedContext& context);

struct BernoulliRow {
  std::uint64_t root_max = 0;
  Rational sigma{0};
  unsigned m = 0;
  Rational deviation{0};     // max over patterns |nu'(alpha) - 2^-m|
  double standard_error = 0; // 0 when exact
  bool exact = false;
  Rational exact_deviation{0};  // from nu_prime_exact
};

// One row per context (typically roots = primes in [3, X] for growing X).
// m = 1 is evaluated exactly through the sign product; m >= 2 by Monte Carlo.
std::vector<BernoulliRow> bernoulli_convergence(std::span<const RootedContext> contexts,
                                                unsigned m, std::uint64_t samples,
                                                std::uint64_t seed, unsigned threads = 1);

}  // namespace bfree
