#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bfree/bitvector.hpp"
#include "bfree/family.hpp"
#include "bfree/interval.hpp"
#include "bfree/measure.hpp"
#include "bfree/random.hpp"

namespace bfree {

// Truncation (omega_1, ..., omega_K) of a point of prod Z/b_k Z.
class GroupPoint {
 public:
  GroupPoint(std::vector<std::uint64_t> moduli, std::vector<std::uint64_t> coords);

  // The base point (0, 0, ...) over the first K moduli.
  static GroupPoint base(const BFamily& family, std::size_t K);
  // Coordinatewise uniform draw (truncated Haar measure).
  static GroupPoint random(const BFamily& family, std::size_t K, Rng& rng);

  std::size_t depth() const { return moduli_.size(); }
  std::span<const std::uint64_t> moduli() const { return moduli_; }
  std::span<const std::uint64_t> coords() const { return coords_; }

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;

 private:
  std::vector<std::uint64_t> moduli_;
  std::vector<std::uint64_t> coords_;
};

// T^steps: every coordinate advanced by steps mod b_k.
GroupPoint advance(const GroupPoint& point, std::uint64_t steps);

// (x_1, ..., x_L) with x_n = 0 iff omega_k + n = 0 mod b_k for some k;
// bit i of the result holds x_{i+1}.
BitVector phi_window(const GroupPoint& point, std::size_t length);

struct FrequencyReport {
  std::string pattern;
  std::string range;
  std::uint64_t matches = 0;
  std::uint64_t denominator = 1;
  Rational empirical{0};
  Interval reference;
  Rational gap{0};  // distance from empirical to the reference enclosure
};

struct FrequencyOptions {
  MeasureOptions measure;
  unsigned threads = 1;
};

// Matches of the pattern at offsets 0..N-1 of eta (offset n reads
// eta_{n+1}..eta_{n+width}), over N.
FrequencyReport empirical_frequency(const BFamily& family, const Pattern& pattern,
                                    std::uint64_t N, const FrequencyOptions& options = {});

// Offsets in [N, N + floor(sqrt N)), over floor(sqrt N).
FrequencyReport short_interval_frequency(const BFamily& family, const Pattern& pattern,
                                         std::uint64_t N,
                                         const FrequencyOptions& options = {});

// Mean of the short-interval frequency over `trials` starting points drawn
// uniformly from [N_lo, N_hi]. `matches` / `denominator` hold the pooled
// totals; `empirical` is the mean of the per-trial frequencies.
FrequencyReport short_interval_mean(const BFamily& family, const Pattern& pattern,
                                    std::uint64_t trials, std::uint64_t N_lo,
                                    std::uint64_t N_hi, std::uint64_t seed,
                                    const FrequencyOptions& options = {});

// max |B ∩ [x, x + sqrt x]| over x in [x_lo, x_hi]. Candidate points are x_lo,
// x_hi, every modulus in range and a fixed grid; moving x up to the next
// modulus never lowers the count, so this is the exact maximum over integers.
std::uint64_t short_interval_hypothesis_check(const BFamily& family, std::uint64_t x_lo,
                                              std::uint64_t x_hi);

struct ArithmeticAverage {
  FrequencyReport report;
  std::uint64_t p = 0;
  unsigned s = 0;
  unsigned m = 0;  // p-adic valuation of the modulus divisible by p (or 0)
};

// (1/p^m) sum_{r < p^m} (1/N) sum_{n < N} [pattern at offset n p^s + r].
ArithmeticAverage arithmetic_average(const BFamily& family, const Pattern& pattern,
                                     std::uint64_t p, unsigned s, std::uint64_t N,
                                     const FrequencyOptions& options = {});

// For each of the first K moduli, the residues z for which the window vanishes
// along {n : z + n = 0 mod b_k}. Window bit i holds x_{i+1}.
std::vector<std::vector<std::uint64_t>> recover_coordinates(const BitVector& window,
                                                            const BFamily& family,
                                                            std::size_t K);

struct RecoveryTrial {
  GroupPoint point;
  std::vector<std::vector<std::uint64_t>> candidates;
  bool contains_truth = true;  // omega_k is a candidate for every k
  bool all_singletons = true;  // every candidate set is {omega_k}
};

// Draws `trials` random truncated points, builds phi windows of length W and
// recovers the coordinates from each window.
std::vector<RecoveryTrial> recovery_experiment(const BFamily& family, std::size_t K,
                                               std::size_t W, std::uint64_t trials,
                                               std::uint64_t seed);

}  // namespace bfree
