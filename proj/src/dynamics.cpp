#include "bfree/dynamics.hpp"

#include <algorithm>

#include "bfree/error.hpp"
#include "bfree/primes.hpp"
#include "bfree/sieve.hpp"

namespace bfree {

GroupPoint::GroupPoint(std::vector<std::uint64_t> moduli, std::vector<std::uint64_t> coords)
    : moduli_(std::move(moduli)), coords_(std::move(coords)) {
  if (moduli_.size() != coords_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one coordinate per modulus");
  }
  for (std::size_t k = 0; k < moduli_.size(); ++k) {
    if (coords_[k] >= moduli_[k]) {
      throw Error(ErrorCode::kInvalidArgument, "coordinate out of range");
    }
  }
}

GroupPoint GroupPoint::base(const BFamily& family, std::size_t K) {
  auto moduli = family.moduli_prefix(K);
  std::vector<std::uint64_t> zeros(moduli.size(), 0);
  return GroupPoint(std::move(moduli), std::move(zeros));
}

GroupPoint GroupPoint::random(const BFamily& family, std::size_t K, Rng& rng) {
  auto moduli = family.moduli_prefix(K);
  std::vector<std::uint64_t> coords;
  coords.reserve(moduli.size());
  for (std::uint64_t b : moduli) coords.push_back(rng.uniform_below(b));
  return GroupPoint(std::move(moduli), std::move(coords));
}

GroupPoint advance(const GroupPoint& point, std::uint64_t steps) {
  std::vector<std::uint64_t> coords(point.coords().begin(), point.coords().end());
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const std::uint64_t b = point.moduli()[k];
    coords[k] = (coords[k] + steps % b) % b;
  }
  return GroupPoint({point.moduli().begin(), point.moduli().end()}, std::move(coords));
}

BitVector phi_window(const GroupPoint& point, std::size_t length) {
  BitVector x(length, true);
  for (std::size_t k = 0; k < point.depth(); ++k) {
    const std::uint64_t b = point.moduli()[k];
    // Smallest n >= 1 with omega_k + n = 0 mod b.
    std::uint64_t n = (b - point.coords()[k]) % b;
    if (n == 0) n = b;
    for (; n <= length; n += b) x.reset(static_cast<std::size_t>(n - 1));
  }
  return x;
}

namespace {

std::uint64_t isqrt(std::uint64_t x) { return integer_root(x, 2); }

std::uint64_t short_interval_matches(const BFamily& family, const Pattern& pattern,
                                     std::uint64_t N, unsigned threads) {
  const std::uint64_t w = isqrt(N);
  // Offset n reads eta_{n+1}.., so the window starts at N + 1.
  const SieveSegment seg = sieve_eta(family, N + 1, N + w + pattern.width(), threads);
  return count_pattern_matches(seg.eta, pattern, w);
}

FrequencyReport make_report(const BFamily& family, const Pattern& pattern,
                            const MeasureOptions& measure, std::string range,
                            std::uint64_t matches, std::uint64_t denominator) {
  FrequencyReport r;
  r.pattern = pattern.str();
  r.range = std::move(range);
  r.matches = matches;
  r.denominator = denominator;
  r.empirical = make_rational(matches, denominator);
  r.reference = nu_cylinder(pattern, family, measure);
  r.gap = r.reference.distance_to(r.empirical);
  return r;
}

}  // namespace

FrequencyReport empirical_frequency(const BFamily& family, const Pattern& pattern,
                                    std::uint64_t N, const FrequencyOptions& options) {
  if (N < pattern.width()) {
    throw Error(ErrorCode::kInvalidArgument, "N must be at least the pattern width", "N");
  }
  if (N > kMaxSieveBound - pattern.width() - 1) throw Error(ErrorCode::kOverflow, "N too large");
  const SieveSegment seg = sieve_eta(family, 1, N + pattern.width(), options.threads);
  const std::uint64_t matches = count_pattern_matches(seg.eta, pattern, N);
  return make_report(family, pattern, options.measure, "[0," + std::to_string(N) + ")",
                     matches, N);
}

FrequencyReport short_interval_frequency(const BFamily& family, const Pattern& pattern,
                                         std::uint64_t N, const FrequencyOptions& options) {
  if (N < 4) throw Error(ErrorCode::kInvalidArgument, "N must be >= 4", "N");
  const std::uint64_t w = isqrt(N);
  if (N > kMaxSieveBound - w - pattern.width() - 1) {
    throw Error(ErrorCode::kOverflow, "N too large");
  }
  const std::uint64_t matches = short_interval_matches(family, pattern, N, options.threads);
  return make_report(family, pattern, options.measure,
                     "[" + std::to_string(N) + "," + std::to_string(N + w) + ")", matches, w);
}

FrequencyReport short_interval_mean(const BFamily& family, const Pattern& pattern,
                                    std::uint64_t trials, std::uint64_t N_lo,
                                    std::uint64_t N_hi, std::uint64_t seed,
                                    const FrequencyOptions& options) {
  if (trials == 0) throw Error(ErrorCode::kNoSamples, "need at least one trial", "trials");
  if (N_lo < 4 || N_hi < N_lo) throw Error(ErrorCode::kInvalidArgument, "need 4 <= N_lo <= N_hi");
  if (N_hi > kMaxSieveBound / 2) throw Error(ErrorCode::kOverflow, "N_hi too large");
  Rng rng(seed);
  Rational sum = 0;
  std::uint64_t matches = 0;
  std::uint64_t width = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t N = rng.uniform_between(N_lo, N_hi);
    const std::uint64_t c = short_interval_matches(family, pattern, N, options.threads);
    const std::uint64_t w = isqrt(N);
    sum += make_rational(c, w);
    matches += c;
    width += w;
  }
  FrequencyReport r = make_report(family, pattern, options.measure,
                                  "mean over " + std::to_string(trials) + " N in [" +
                                      std::to_string(N_lo) + "," + std::to_string(N_hi) + "]",
                                  matches, width);
  r.empirical = sum / to_big(trials);
  r.gap = r.reference.distance_to(r.empirical);
  return r;
}

std::uint64_t short_interval_hypothesis_check(const BFamily& family, std::uint64_t x_lo,
                                              std::uint64_t x_hi) {
  if (x_lo < 1 || x_hi < x_lo) {
    throw Error(ErrorCode::kInvalidArgument, "need 1 <= x_lo <= x_hi");
  }
  const auto moduli = family.moduli_up_to(x_hi + isqrt(x_hi));
  auto count_at = [&](std::uint64_t x) {
    const auto first = std::lower_bound(moduli.begin(), moduli.end(), x);
    const auto last = std::upper_bound(moduli.begin(), moduli.end(), x + isqrt(x));
    return static_cast<std::uint64_t>(last - first);
  };
  std::uint64_t best = std::max(count_at(x_lo), count_at(x_hi));
  for (std::uint64_t b : moduli) {
    if (b >= x_lo && b <= x_hi) best = std::max(best, count_at(b));
  }
  constexpr std::uint64_t kGrid = 1024;
  for (std::uint64_t i = 0; i <= kGrid; ++i) {
    const auto x = x_lo + static_cast<std::uint64_t>(
                              static_cast<unsigned __int128>(x_hi - x_lo) * i / kGrid);
    best = std::max(best, count_at(x));
  }
  return best;
}

ArithmeticAverage arithmetic_average(const BFamily& family, const Pattern& pattern,
                                     std::uint64_t p, unsigned s, std::uint64_t N,
                                     const FrequencyOptions& options) {
  if (!is_prime(p)) throw Error(ErrorCode::kNotPrime, std::to_string(p) + " is not prime", "p");
  if (s < 1) throw Error(ErrorCode::kInvalidArgument, "s must be >= 1", "s");
  if (N < 1) throw Error(ErrorCode::kInvalidArgument, "N must be >= 1", "N");
  ArithmeticAverage out;
  out.p = p;
  out.s = s;
  if (auto b = family.modulus_divisible_by(p)) out.m = valuation(*b, p);
  const auto step = checked_pow(p, s);
  const auto period = checked_pow(p, out.m);
  if (!step || !period) throw Error(ErrorCode::kOverflow, "p^s overflows");
  const unsigned __int128 last =
      static_cast<unsigned __int128>(N - 1) * *step + *period + pattern.width();
  if (last >= kMaxSieveBound) throw Error(ErrorCode::kOverflow, "offsets exceed sieve bound");
  const SieveSegment seg =
      sieve_eta(family, 1, static_cast<std::uint64_t>(last) + 1, options.threads);
  std::uint64_t matches = 0;
  for (std::uint64_t r = 0; r < *period; ++r) {
    for (std::uint64_t n = 0; n < N; ++n) {
      if (pattern_matches_at(seg.eta, pattern, static_cast<std::size_t>(n * *step + r))) {
        ++matches;
      }
    }
  }
  out.report = make_report(family, pattern, options.measure,
                           "n*" + std::to_string(p) + "^" + std::to_string(s) + "+r, n<" +
                               std::to_string(N) + ", r<" + std::to_string(*period),
                           matches, *period * N);
  return out;
}

std::vector<std::vector<std::uint64_t>> recover_coordinates(const BitVector& window,
                                                            const BFamily& family,
                                                            std::size_t K) {
  const auto moduli = family.moduli_prefix(K);
  const std::uint64_t largest = moduli.empty() ? 0 : moduli.back();
  if (window.size() < 2 * largest) {
    throw Error(ErrorCode::kWindowTooShort,
                "window of " + std::to_string(window.size()) + " needs at least " +
                    std::to_string(2 * largest));
  }
  std::vector<std::vector<std::uint64_t>> out;
  out.reserve(moduli.size());
  for (std::uint64_t b : moduli) {
    std::vector<bool> seen_one(b, false);
    for (std::size_t i = 0; i < window.size(); ++i) {
      if (window.test(i)) seen_one[(i + 1) % b] = true;
    }
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t c = 0; c < b; ++c) {
      if (!seen_one[c]) candidates.push_back((b - c) % b);
    }
    std::sort(candidates.begin(), candidates.end());
    out.push_back(std::move(candidates));
  }
  return out;
}

std::vector<RecoveryTrial> recovery_experiment(const BFamily& family, std::size_t K,
                                               std::size_t W, std::uint64_t trials,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RecoveryTrial> out;
  out.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    GroupPoint point = GroupPoint::random(family, K, rng);
    auto candidates = recover_coordinates(phi_window(point, W), family, point.depth());
    RecoveryTrial trial{std::move(point), std::move(candidates)};
    for (std::size_t k = 0; k < trial.candidates.size(); ++k) {
      const auto& c = trial.candidates[k];
      const std::uint64_t truth = trial.point.coords()[k];
      if (!std::binary_search(c.begin(), c.end(), truth)) trial.contains_truth = false;
      if (c.size() != 1 || c[0] != truth) trial.all_singletons = false;
    }
    out.push_back(std::move(trial));
  }
  return out;
}

}  // namespace bfree
