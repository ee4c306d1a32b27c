#include "bfree/subshift.hpp"

#include <unordered_map>
#include <vector>

#include "bfree/error.hpp"
#include "bfree/measure.hpp"
#include "bfree/parallel.hpp"

namespace bfree {

WordCount count_words_bruteforce(std::uint64_t n, const BFamily& family, std::uint64_t cap,
                                 unsigned threads) {
  if (n > cap || n > 40) {
    throw Error(ErrorCode::kLengthOverCap,
                "n = " + std::to_string(n) + " exceeds brute-force cap " + std::to_string(cap));
  }
  const auto moduli = family.moduli_up_to(n);
  // Parallel over the top bits of the word; each task owns one prefix.
  const unsigned prefix_bits = n >= 6 ? 6 : static_cast<unsigned>(n);
  const std::uint64_t tasks = std::uint64_t{1} << prefix_bits;
  const std::uint64_t per_task = std::uint64_t{1} << (n - prefix_bits);
  std::vector<std::uint64_t> counts(tasks, 0);
  parallel_tasks(tasks, threads, [&](std::size_t t) {
    std::vector<std::uint8_t> w(n);
    std::uint64_t c = 0;
    for (std::uint64_t low = 0; low < per_task; ++low) {
      const std::uint64_t word = (static_cast<std::uint64_t>(t) << (n - prefix_bits)) | low;
      for (std::uint64_t i = 0; i < n; ++i) w[i] = (word >> i) & 1;
      if (is_admissible_word(w, moduli)) ++c;
    }
    counts[t] = c;
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return {n, moduli.size(), to_big(total)};
}

WordCount count_words_dp(std::uint64_t n, std::span<const std::uint64_t> moduli,
                         std::uint64_t state_budget) {
  std::vector<std::uint64_t> active;
  for (std::uint64_t b : moduli) {
    if (b <= n) active.push_back(b);
  }
  std::uint64_t bits = 0;
  for (std::uint64_t b : active) bits += b;
  if (bits >= 63 || (std::uint64_t{1} << bits) > state_budget) {
    throw Error(ErrorCode::kStateBudgetExceeded,
                "DP needs 2^" + std::to_string(bits) + " states, over budget");
  }
  std::vector<unsigned> offset(active.size());
  std::vector<std::uint64_t> full(active.size());
  unsigned acc = 0;
  for (std::size_t k = 0; k < active.size(); ++k) {
    offset[k] = acc;
    full[k] = ((std::uint64_t{1} << active[k]) - 1) << acc;
    acc += static_cast<unsigned>(active[k]);
  }

  std::unordered_map<std::uint64_t, BigInt> current{{0, BigInt(1)}};
  std::unordered_map<std::uint64_t, BigInt> next;
  for (std::uint64_t j = 1; j <= n; ++j) {
    next.clear();
    next.reserve(current.size() * 2);
    for (const auto& [state, count] : current) {
      next[state] += count;  // x_j = 0
      std::uint64_t s = state;
      bool ok = true;
      for (std::size_t k = 0; k < active.size(); ++k) {
        s |= std::uint64_t{1} << (offset[k] + j % active[k]);
        if ((s & full[k]) == full[k]) {
          ok = false;
          break;
        }
      }
      if (ok) next[s] += count;  // x_j = 1
    }
    std::swap(current, next);
  }
  BigInt total = 0;
  for (const auto& [state, count] : current) total += count;
  return {n, active.size(), total};
}

WordCount count_words_dp(std::uint64_t n, const BFamily& family, std::uint64_t state_budget) {
  return count_words_dp(n, family.moduli_up_to(n), state_budget);
}

GammaBracket gamma_bracket_check(std::uint64_t n, std::span<const std::uint64_t> moduli,
                                 std::uint64_t state_budget) {
  if (moduli.empty()) throw Error(ErrorCode::kEmptyFamily, "no moduli");
  BigInt period = 1;
  BigInt kept = 1;
  for (std::uint64_t b : moduli) {
    period *= to_big(b);
    kept *= to_big(b - 1);
  }
  const BigInt nn = to_big(n);
  if (n == 0 || nn % period != 0) {
    throw Error(ErrorCode::kNotMultipleOfPeriod,
                "n must be a positive multiple of " + period.get_str());
  }
  // By CRT, n * prod (1 - 1/b_k) = (n / prod b_k) * prod (b_k - 1) is an integer.
  const BigInt exponent = nn / period * kept;
  GammaBracket r;
  r.n = n;
  r.exponent = exponent.get_ui();
  mpz_ui_pow_ui(r.lower.get_mpz_t(), 2, r.exponent);
  r.upper = r.lower * period;
  r.count = count_words_dp(n, moduli, state_budget).count;
  r.holds = r.lower <= r.count && r.count <= r.upper;
  return r;
}

Interval entropy_interval(const BFamily& family, std::optional<std::size_t> K) {
  // prod (1 - 1/b_k) is nu_B of the one-point cylinder, since t({1}, b) = 1.
  const std::uint64_t one[] = {1};
  MeasureOptions opts;
  opts.K = K;
  return nu_one_cylinder(one, family, opts);
}

}  // namespace bfree
