#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bfree::cli {

enum class OutputFormat { kNdjson, kCsv };

// Everything one invocation of the tool needs.
struct RunConfig {
  std::string subcommand;
  std::string family_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  OutputFormat format = OutputFormat::kNdjson;
  std::uint64_t budget_period = 100'000'000;
  std::uint64_t budget_states = std::uint64_t{1} << 24;
  std::uint64_t budget_terms = std::uint64_t{1} << 20;

  std::optional<std::uint64_t> lo, hi, N, n, gap, p, s, m, W, samples, trials;
  std::optional<std::uint64_t> N_lo, N_hi, x_lo, x_hi, root_min;
  std::string K;  // integer or "primes<X"
  std::string pattern;
  std::string method;
  std::vector<std::uint64_t> shifts;
  std::vector<unsigned> exponents;
  std::vector<std::uint64_t> roots_sweep;
  bool with_mu = false;
  bool bracket = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitUnsupported = 4;

// Parses argv-style arguments (without the program name). On failure writes a
// diagnostic record to `err` and returns nullopt with *exit_code set.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out,
                                    std::ostream& err, int* exit_code);

// Executes a parsed configuration; records go to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args followed by run.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bfree::cli
