#include "bfree/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "bfree/chowla.hpp"
#include "bfree/dynamics.hpp"
#include "bfree/error.hpp"
#include "bfree/measure.hpp"
#include "bfree/primes.hpp"
#include "bfree/sieve.hpp"
#include "bfree/subshift.hpp"

namespace bfree::cli {

namespace {

using Record = nlohmann::ordered_json;

// Accepts "1000000", "10^6" and "1e6".
std::uint64_t parse_count(const std::string& text) {
  auto digits = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "not a non-negative integer: '" + text + "'");
    }
    return std::stoull(s);
  };
  for (const char* sep : {"^", "e", "E"}) {
    const auto pos = text.find(sep);
    if (pos == std::string::npos) continue;
    const std::uint64_t base = std::string(sep) == "^" ? digits(text.substr(0, pos)) : 10;
    const std::uint64_t mant = std::string(sep) == "^" ? 1 : digits(text.substr(0, pos));
    const auto e = digits(text.substr(pos + 1));
    auto p = checked_pow(base, static_cast<unsigned>(e));
    if (!p || (mant != 0 && *p > UINT64_MAX / mant)) {
      throw Error(ErrorCode::kOverflow, "value too large: '" + text + "'");
    }
    return mant * *p;
  }
  return digits(text);
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* field) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(static_cast<T>(parse_count(item)));
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), field);
    }
  }
  return out;
}

Record error_record(std::string_view name, const std::string& message, const std::string& field) {
  Record r;
  r["error"] = name;
  r["message"] = message;
  r["field"] = field.empty() ? Record() : Record(field);
  return r;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kPatternTooWide:
    case ErrorCode::kPeriodTooLarge:
    case ErrorCode::kStateBudgetExceeded:
    case ErrorCode::kLengthOverCap:
      return kExitBudget;
    case ErrorCode::kSigmaInfinite:
    case ErrorCode::kNoTailBoundAvailable:
      return kExitUnsupported;
    default:
      return kExitBadInput;
  }
}

std::string csv_cell(const Record& v) {
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return s;
}

class Emitter {
 public:
  Emitter(std::ostream& out, OutputFormat format) : out_(out), format_(format) {}

  void emit(const Record& record) {
    if (format_ == OutputFormat::kNdjson) {
      out_ << record.dump() << '\n';
      return;
    }
    std::vector<std::string> keys;
    for (const auto& item : record.items()) keys.push_back(item.key());
    if (keys != header_) {
      header_ = keys;
      for (std::size_t i = 0; i < keys.size(); ++i) out_ << (i ? "," : "") << keys[i];
      out_ << '\n';
    }
    std::size_t i = 0;
    for (const auto& item : record.items()) out_ << (i++ ? "," : "") << csv_cell(item.value());
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  OutputFormat format_;
  std::vector<std::string> header_;
};

Record enclosure(const Interval& v) {
  Record r;
  r["lo"] = to_string(v.lo);
  r["hi"] = to_string(v.hi);
  r["exact"] = v.exact ? Record(to_string(v.lo)) : Record();
  return r;
}

struct Context {
  const RunConfig& config;
  Emitter& emitter;
  std::optional<BFamily> family;
  std::size_t sequence = 0;

  const BFamily& require_family() const {
    if (!family) {
      throw Error(ErrorCode::kInvalidArgument, "--family is required", "family");
    }
    return *family;
  }

  std::uint64_t require(const std::optional<std::uint64_t>& v, const char* name) const {
    if (!v) throw Error(ErrorCode::kInvalidArgument, std::string("--") + name + " is required", name);
    return *v;
  }

  std::uint64_t require_seed() const {
    if (!config.seed) {
      throw Error(ErrorCode::kInvalidArgument, "--seed is required for randomized runs", "seed");
    }
    return *config.seed;
  }

  const std::string& require_pattern() const {
    if (config.pattern.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--pattern is required", "pattern");
    }
    return config.pattern;
  }

  std::optional<std::size_t> K() const {
    const std::string& t = config.K;
    if (t.empty()) return std::nullopt;
    try {
      if (t.rfind("primes<=", 0) == 0) {
        return require_family().prime_depth(parse_count(t.substr(8)) + 1);
      }
      if (t.rfind("primes<", 0) == 0) {
        return require_family().prime_depth(parse_count(t.substr(7)));
      }
      return static_cast<std::size_t>(parse_count(t));
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), "K");
    }
  }

  MeasureOptions measure() const {
    MeasureOptions m;
    m.K = K();
    m.inclusion_exclusion_budget = config.budget_terms;
    return m;
  }

  FrequencyOptions frequency() const { return {measure(), config.threads}; }

  // Adds the canonical sort key and provenance, then writes the record.
  void emit(Record body, const std::string& method, bool seeded = false) {
    Record r;
    char key[64];
    std::snprintf(key, sizeof key, "%s/%06zu", config.subcommand.c_str(), sequence++);
    r["key"] = key;
    for (auto& item : body.items()) r[item.key()] = item.value();
    r["method"] = method;
    r["family"] = family ? Record(family->digest()) : Record();
    r["seed"] = seeded && config.seed ? Record(*config.seed) : Record();
    emitter.emit(r);
  }
};

Record frequency_record(const FrequencyReport& f) {
  Record r;
  r["pattern"] = f.pattern;
  r["range"] = f.range;
  r["matches"] = f.matches;
  r["denominator"] = f.denominator;
  r["empirical"] = to_string(f.empirical);
  r["empirical_approx"] = to_double(f.empirical);
  r["reference"] = enclosure(f.reference);
  r["gap"] = to_string(f.gap);
  r["gap_approx"] = to_double(f.gap);
  return r;
}

void cmd_sieve(Context& ctx) {
  const auto& cfg = ctx.config;
  const BFamily& family = ctx.require_family();
  const std::uint64_t lo = cfg.lo.value_or(1);
  const std::uint64_t hi = ctx.require(cfg.hi, "hi");
  if (!cfg.with_mu) {
    const SieveSegment seg = sieve_eta(family, lo, hi, cfg.threads);
    Record r;
    r["lo"] = lo;
    r["hi"] = hi;
    r["ones"] = seg.eta.count();
    r["eta_hex"] = seg.eta.to_hex();
    ctx.emit(std::move(r), "sieve_eta");
    return;
  }
  const SieveSegment seg = sieve_mu(family, lo, hi, cfg.threads);
  for (std::uint64_t n = lo; n < hi; ++n) {
    Record r;
    r["n"] = n;
    r["eta"] = seg.eta_at(n) ? 1 : 0;
    r["delta"] = seg.delta_at(n);
    r["pi"] = seg.pi_at(n);
    r["mu"] = seg.mu_at(n);
    ctx.emit(std::move(r), "sieve_mu");
  }
}

void cmd_twins(Context& ctx) {
  const auto& cfg = ctx.config;
  const BFamily& family = ctx.require_family();
  const std::uint64_t N = ctx.require(cfg.N, "N");
  const std::uint64_t gap = cfg.gap.value_or(2);
  const std::uint64_t count = twin_count(family, N, gap, cfg.threads);
  const std::uint64_t A[] = {1, 1 + gap};
  const Interval ref = nu_one_cylinder(A, family, ctx.measure());
  const Rational freq = make_rational(count, N);
  Record r;
  r["N"] = N;
  r["gap"] = gap;
  r["count"] = count;
  r["frequency"] = to_string(freq);
  r["frequency_approx"] = to_double(freq);
  r["reference"] = enclosure(ref);
  r["distance"] = to_string(ref.distance_to(freq));
  ctx.emit(std::move(r), "twin_count");
}

void cmd_measure(Context& ctx) {
  const BFamily& family = ctx.require_family();
  const std::string& text = ctx.require_pattern();
  const bool is_signed = text.find_first_of("+-") != std::string::npos;
  if (ctx.config.method == "period") {
    if (is_signed) {
      throw Error(ErrorCode::kInvalidArgument, "period counting takes 0/1 patterns", "method");
    }
    const Rational q = nu_exact_finite(Pattern::parse(text), family, ctx.config.budget_period);
    Record r;
    r["pattern"] = text;
    r["lo"] = to_string(q);
    r["hi"] = to_string(q);
    r["exact"] = to_string(q);
    r["lo_approx"] = to_double(q);
    r["hi_approx"] = to_double(q);
    ctx.emit(std::move(r), "nu_exact_finite");
    return;
  }
  if (!ctx.config.method.empty() && ctx.config.method != "formula") {
    throw Error(ErrorCode::kInvalidArgument, "--method must be formula or period", "method");
  }
  const Interval v = is_signed ? nu_M_cylinder(SignedPattern::parse(text), family, ctx.measure())
                               : nu_cylinder(Pattern::parse(text), family, ctx.measure());
  Record r;
  r["pattern"] = text;
  r["lo"] = to_string(v.lo);
  r["hi"] = to_string(v.hi);
  r["exact"] = v.exact ? Record(to_string(v.lo)) : Record();
  r["lo_approx"] = to_double(v.lo);
  r["hi_approx"] = to_double(v.hi);
  ctx.emit(std::move(r), is_signed ? "nu_M_cylinder" : "nu_cylinder");
}

void cmd_admissible(Context& ctx) {
  const BFamily& family = ctx.require_family();
  const std::string& text = ctx.require_pattern();
  std::vector<std::uint64_t> A;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      A.push_back(i + 1);
    } else if (text[i] != '0' && text[i] != '*') {
      throw Error(ErrorCode::kInvalidArgument, "admissible takes a word over 0/1", "pattern");
    }
  }
  const Admissibility a = check_admissible_set(A, family);
  Record r;
  r["pattern"] = text;
  r["admissible"] = a.admissible;
  r["violated_modulus"] = a.violated_modulus ? Record(*a.violated_modulus) : Record();
  ctx.emit(std::move(r), "is_admissible_set");
}

void cmd_gamma(Context& ctx) {
  const auto& cfg = ctx.config;
  const BFamily& family = ctx.require_family();
  const std::uint64_t n = ctx.require(cfg.n, "n");
  if (cfg.bracket) {
    const auto moduli = family.moduli_prefix(ctx.K().value_or(family.size()));
    const GammaBracket g = gamma_bracket_check(n, moduli, cfg.budget_states);
    Record r;
    r["n"] = n;
    r["moduli"] = moduli;
    r["exponent"] = g.exponent;
    r["lower"] = to_string(g.lower);
    r["count"] = to_string(g.count);
    r["upper"] = to_string(g.upper);
    r["holds"] = g.holds;
    ctx.emit(std::move(r), "gamma_bracket_check");
    return;
  }
  const std::string method = cfg.method.empty() ? "dp" : cfg.method;
  WordCount w;
  if (method == "brute") {
    w = count_words_bruteforce(n, family, kBruteForceCap, cfg.threads);
  } else if (method == "dp") {
    w = count_words_dp(n, family, cfg.budget_states);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--method must be brute or dp", "method");
  }
  Record r;
  r["n"] = n;
  r["count"] = to_string(w.count);
  r["K_effective"] = w.K_effective;
  // floor/ceil of log2(count), divided by n.
  const std::uint64_t bits = w.count == 0 ? 0 : mpz_sizeinbase(w.count.get_mpz_t(), 2);
  const bool power_of_two = w.count > 0 && mpz_popcount(w.count.get_mpz_t()) == 1;
  const std::uint64_t floor_log = bits == 0 ? 0 : bits - 1;
  const std::uint64_t ceil_log = power_of_two || bits == 0 ? floor_log : bits;
  if (n > 0) {
    r["log2_per_symbol_lo"] = to_string(make_rational(floor_log, n));
    r["log2_per_symbol_hi"] = to_string(make_rational(ceil_log, n));
    r["log2_per_symbol_approx"] = std::log2(w.count.get_d()) / static_cast<double>(n);
  }
  ctx.emit(std::move(r), method == "dp" ? "count_words_dp" : "count_words_bruteforce");
}

void cmd_entropy(Context& ctx) {
  const BFamily& family = ctx.require_family();
  const Interval v = entropy_interval(family, ctx.K());
  Record r;
  r["lo"] = to_string(v.lo);
  r["hi"] = to_string(v.hi);
  r["exact"] = v.exact ? Record(to_string(v.lo)) : Record();
  r["lo_approx"] = to_double(v.lo);
  r["hi_approx"] = to_double(v.hi);
  r["width_approx"] = to_double(v.width());
  ctx.emit(std::move(r), "entropy_interval");
}

void cmd_generic(Context& ctx) {
  const BFamily& family = ctx.require_family();
  const Pattern pattern = Pattern::parse(ctx.require_pattern());
  const auto f = empirical_frequency(family, pattern, ctx.require(ctx.config.N, "N"),
                                     ctx.frequency());
  ctx.emit(frequency_record(f), "empirical_frequency");
}

void cmd_short(Context& ctx) {
  const auto& cfg = ctx.config;
  const BFamily& family = ctx.require_family();
  const Pattern pattern = Pattern::parse(ctx.require_pattern());
  FrequencyReport f;
  bool seeded = false;
  std::uint64_t x_lo;
  std::uint64_t x_hi;
  if (cfg.trials) {
    const std::uint64_t N_lo = ctx.require(cfg.N_lo, "N-lo");
    const std::uint64_t N_hi = ctx.require(cfg.N_hi, "N-hi");
    f = short_interval_mean(family, pattern, *cfg.trials, N_lo, N_hi, ctx.require_seed(),
                            ctx.frequency());
    seeded = true;
    x_lo = cfg.x_lo.value_or(N_lo);
    x_hi = cfg.x_hi.value_or(N_hi);
  } else {
    const std::uint64_t N = ctx.require(cfg.N, "N");
    f = short_interval_frequency(family, pattern, N, ctx.frequency());
    x_lo = cfg.x_lo.value_or(N);
    x_hi = cfg.x_hi.value_or(2 * N);
  }
  const std::uint64_t hyp = short_interval_hypothesis_check(family, x_lo, x_hi);
  const std::uint64_t M = cfg.m.value_or(1);
  Record r = frequency_record(f);
  r["hypothesis_x"] = {x_lo, x_hi};
  r["hypothesis_max"] = hyp;
  // Finite families satisfy the bounded-count hypothesis for large x.
  const bool supported = family.is_finite() || hyp <= M;
  r["reference_supported"] = supported;
  if (!supported) r["label"] = "short-interval hypothesis fails on the sampled range";
  ctx.emit(std::move(r), cfg.trials ? "short_interval_mean" : "short_interval_frequency", seeded);
}

void cmd_arith(Context& ctx) {
  const auto& cfg = ctx.config;
  const BFamily& family = ctx.require_family();
  const Pattern pattern = Pattern::parse(ctx.require_pattern());
  const auto a = arithmetic_average(family, pattern, ctx.require(cfg.p, "p"),
                                    static_cast<unsigned>(ctx.require(cfg.s, "s")),
                                    ctx.require(cfg.N, "N"), ctx.frequency());
  Record r = frequency_record(a.report);
  r["p"] = a.p;
  r["s"] = a.s;
  r["m"] = a.m;
  ctx.emit(std::move(r), "arithmetic_average");
}

void cmd_recover(Context& ctx) {
  const auto& cfg = ctx.config;
  const BFamily& family = ctx.require_family();
  const std::size_t K = ctx.K().value_or(family.size());
  const std::uint64_t W = ctx.require(cfg.W, "W");
  const auto trials = recovery_experiment(family, K, W, cfg.trials.value_or(100),
                                          ctx.require_seed());
  std::uint64_t singletons = 0;
  std::uint64_t contained = 0;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& tr = trials[t];
    Record r;
    r["trial"] = t;
    r["omega"] = std::vector<std::uint64_t>(tr.point.coords().begin(), tr.point.coords().end());
    std::vector<std::size_t> sizes;
    for (const auto& c : tr.candidates) sizes.push_back(c.size());
    r["candidate_sizes"] = sizes;
    r["contains_truth"] = tr.contains_truth;
    r["recovered"] = tr.all_singletons;
    ctx.emit(std::move(r), "recover_coordinates", true);
    singletons += tr.all_singletons;
    contained += tr.contains_truth;
  }
  Record s;
  s["trials"] = trials.size();
  s["W"] = W;
  s["K"] = K;
  s["recovered"] = singletons;
  s["contains_truth"] = contained;
  ctx.emit(std::move(s), "recovery_summary", true);
}

void cmd_chowla(Context& ctx) {
  const auto& cfg = ctx.config;
  const BFamily& family = ctx.require_family();
  const std::uint64_t N = ctx.require(cfg.N, "N");
  if (cfg.shifts.empty()) throw Error(ErrorCode::kInvalidArgument, "--shifts is required", "shifts");
  std::vector<unsigned> exps = cfg.exponents;
  if (exps.empty()) exps.assign(cfg.shifts.size(), 1);
  const bool all_even = std::all_of(exps.begin(), exps.end(), [](unsigned e) { return e == 2; });
  const std::uint64_t hi = N + cfg.shifts.back() + 1;
  const SieveSegment seg = all_even && !family.is_rooted() ? sieve_eta(family, 1, hi, cfg.threads)
                                                           : sieve_mu(family, 1, hi, cfg.threads);
  const Rational v = chowla_correlation(seg, cfg.shifts, exps, N);
  Record r;
  r["shifts"] = cfg.shifts;
  r["exponents"] = exps;
  r["N"] = N;
  r["value"] = to_string(v);
  r["value_approx"] = to_double(v);
  if (all_even) {
    std::vector<std::uint64_t> A;
    for (auto s : cfg.shifts) A.push_back(s + 1);
    r["reference"] = enclosure(nu_one_cylinder(A, family, ctx.measure()));
  } else {
    r["reference"] = Record();
    r["label"] = family.sigma() ? "no reference measure for odd exponents"
                                : "conjectural — no reference measure";
  }
  ctx.emit(std::move(r), "chowla_correlation");
}

void cmd_nuprime(Context& ctx) {
  const auto& cfg = ctx.config;
  const BFamily& family = ctx.require_family();
  const RootedContext rc = RootedContext::make(family, ctx.K());
  const auto alpha = parse_signs(ctx.require_pattern());
  const std::string method = cfg.method.empty() ? "orbit" : cfg.method;
  Record r;
  r["pattern"] = cfg.pattern;
  bool seeded = false;
  if (method == "orbit") {
    const std::uint64_t N = ctx.require(cfg.N, "N");
    const Rational v = nu_prime_empirical(rc, alpha, N, cfg.threads);
    r["N"] = N;
    r["estimate"] = to_string(v);
    r["estimate_approx"] = to_double(v);
    r["error"] = Record();
  } else if (method == "mc") {
    const auto est = nu_prime_montecarlo(rc, alpha, ctx.require(cfg.samples, "samples"),
                                         ctx.require_seed(), cfg.threads);
    seeded = true;
    r["samples"] = est.samples;
    r["estimate"] = to_string(est.estimate);
    r["estimate_approx"] = to_double(est.estimate);
    r["standard_error"] = est.standard_error;
    r["tail"] = to_string(est.tail);
    r["error"] = est.error;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--method must be orbit or mc", "method");
  }
  if (rc.sigma_finite()) {
    const Rational ref = nu_prime_exact(rc, alpha);
    r["reference"] = to_string(ref);
    r["reference_approx"] = to_double(ref);
  } else {
    r["reference"] = Record();
    r["label"] = "conjectural — no reference measure";
  }
  ctx.emit(std::move(r), method == "orbit" ? "nu_prime_empirical" : "nu_prime_montecarlo",
           seeded);
}

void cmd_bias(Context& ctx) {
  const BFamily& family = ctx.require_family();
  const RootedContext rc = RootedContext::make(family, ctx.K());
  const Interval b = bias(rc);
  const Interval bound = exp_enclosure(-2 * *rc.sigma);
  const Interval dev = abs(b * Rational(2) - Interval::point(1));
  Record r = enclosure(b);
  r["sigma"] = to_string(*rc.sigma);
  r["sigma_approx"] = to_double(*rc.sigma);
  r["deviation"] = enclosure(dev);
  r["exp_minus_2sigma"] = enclosure(bound);
  r["bound_holds"] = dev.hi <= bound.lo;
  ctx.emit(std::move(r), "bias");
}

void cmd_bernoulli(Context& ctx) {
  const auto& cfg = ctx.config;
  if (cfg.roots_sweep.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--roots-sweep is required", "roots-sweep");
  }
  const unsigned m = static_cast<unsigned>(cfg.m.value_or(2));
  const std::uint64_t root_min = cfg.root_min.value_or(3);
  std::vector<RootedContext> contexts;
  for (std::uint64_t X : cfg.roots_sweep) {
    contexts.push_back(RootedContext::make(rooted_primes_family(root_min, X)));
  }
  const std::uint64_t samples = m == 1 ? 1 : ctx.require(cfg.samples, "samples");
  const std::uint64_t seed = m == 1 ? 0 : ctx.require_seed();
  const auto rows = bernoulli_convergence(contexts, m, samples, seed, cfg.threads);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    Record r;
    r["X"] = cfg.roots_sweep[i];
    r["root_min"] = root_min;
    r["m"] = row.m;
    r["sigma"] = to_string(row.sigma);
    r["sigma_approx"] = to_double(row.sigma);
    r["deviation"] = to_string(row.deviation);
    r["deviation_approx"] = to_double(row.deviation);
    r["standard_error"] = row.standard_error;
    r["exact"] = row.exact;
    r["exact_deviation"] = to_string(row.exact_deviation);
    r["exact_deviation_approx"] = to_double(row.exact_deviation);
    ctx.emit(std::move(r), m == 1 ? "sign_product" : "monte_carlo", m != 1);
  }
}

void dispatch(Context& ctx) {
  const std::string& sub = ctx.config.subcommand;
  if (sub == "sieve") return cmd_sieve(ctx);
  if (sub == "twins") return cmd_twins(ctx);
  if (sub == "measure") return cmd_measure(ctx);
  if (sub == "admissible") return cmd_admissible(ctx);
  if (sub == "gamma") return cmd_gamma(ctx);
  if (sub == "entropy") return cmd_entropy(ctx);
  if (sub == "generic") return cmd_generic(ctx);
  if (sub == "short") return cmd_short(ctx);
  if (sub == "arith") return cmd_arith(ctx);
  if (sub == "recover") return cmd_recover(ctx);
  if (sub == "chowla") return cmd_chowla(ctx);
  if (sub == "nuprime") return cmd_nuprime(ctx);
  if (sub == "bias") return cmd_bias(ctx);
  if (sub == "bernoulli") return cmd_bernoulli(ctx);
  throw Error(ErrorCode::kInvalidArgument, "unknown subcommand '" + sub + "'", "subcommand");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read " + path, "family");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out,
                                    std::ostream& err, int* exit_code) {
  RunConfig cfg;
  if (const char* env = std::getenv("BFREE_THREADS")) {
    try {
      cfg.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, parse_count(env)));
    } catch (const Error&) {
      // An unusable environment default falls back to one thread.
    }
  }
  CLI::App app{"Sieves, measures and statistics of B-free integers", "bfree"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "ndjson";
  app.add_option("--family", cfg.family_path, "Family spec JSON file");
  app.add_option("--seed", cfg.seed, "64-bit seed for randomized subcommands");
  app.add_option("--threads", cfg.threads, "Worker threads (default $BFREE_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "ndjson or csv")->check(CLI::IsMember({"ndjson", "csv"}));

  auto count_option = [](CLI::App* a, const std::string& name, std::optional<std::uint64_t>& dst,
                         const std::string& help) {
    a->add_option_function<std::string>(
        name,
        [&dst, name](const std::string& s) {
          try {
            dst = parse_count(s);
          } catch (const Error& e) {
            throw CLI::ValidationError(name, e.what());
          }
        },
        help);
  };
  std::optional<std::uint64_t> budget_period, budget_states, budget_terms;
  count_option(&app, "--budget-period", budget_period, "Largest period for counting oracles");
  count_option(&app, "--budget-states", budget_states, "Largest DP state space");
  count_option(&app, "--budget-terms", budget_terms, "Largest inclusion-exclusion term count");

  std::string shifts, exponents, sweep;
  auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

  auto* sieve = sub("sieve", "eta (and with --mu: delta, pi, mu) over [lo, hi)");
  count_option(sieve, "--lo", cfg.lo, "First n (default 1)");
  count_option(sieve, "--hi", cfg.hi, "One past the last n");
  sieve->add_flag("--mu", cfg.with_mu, "Emit per-n records with delta, pi, mu");

  auto* twins = sub("twins", "Count n <= N with eta_n = eta_{n+gap} = 1");
  count_option(twins, "--N", cfg.N, "Upper limit");
  count_option(twins, "--gap", cfg.gap, "Gap (default 2)");
  twins->add_option("--K", cfg.K, "Truncation depth for the reference");

  auto* measure = sub("measure", "Measure of a cylinder ('1','0','*'; '+','-' for nu_M)");
  measure->add_option("--pattern", cfg.pattern)->required();
  measure->add_option("--K", cfg.K, "Truncation depth (integer or primes<X)");
  measure->add_option("--method", cfg.method, "formula (default) or period (finite families)");

  auto* admissible = sub("admissible", "Admissibility of a binary word");
  admissible->add_option("--pattern", cfg.pattern)->required();

  auto* gamma = sub("gamma", "Number of admissible words of length n");
  count_option(gamma, "--n", cfg.n, "Word length");
  gamma->add_option("--method", cfg.method, "brute or dp");
  gamma->add_option("--K", cfg.K, "Prefix length for --bracket");
  gamma->add_flag("--bracket", cfg.bracket, "Check the gamma_K sandwich bound");

  auto* entropy = sub("entropy", "Enclosure of the topological entropy");
  entropy->add_option("--K", cfg.K, "Truncation depth (integer or primes<X)");

  auto* generic = sub("generic", "Pattern frequency over offsets [0, N)");
  generic->add_option("--pattern", cfg.pattern)->required();
  count_option(generic, "--N", cfg.N, "Number of offsets");
  generic->add_option("--K", cfg.K, "Truncation depth for the reference");

  auto* shrt = sub("short", "Pattern frequency over [N, N + sqrt N)");
  shrt->add_option("--pattern", cfg.pattern)->required();
  count_option(shrt, "--N", cfg.N, "Start of the interval");
  count_option(shrt, "--trials", cfg.trials, "Average over random N in [N-lo, N-hi]");
  count_option(shrt, "--N-lo", cfg.N_lo, "Smallest random N");
  count_option(shrt, "--N-hi", cfg.N_hi, "Largest random N");
  count_option(shrt, "--x-lo", cfg.x_lo, "Hypothesis check range start");
  count_option(shrt, "--x-hi", cfg.x_hi, "Hypothesis check range end");
  count_option(shrt, "--M", cfg.m, "Bound on |B ∩ [x, x + sqrt x]| (default 1)");
  shrt->add_option("--K", cfg.K, "Truncation depth for the reference");

  auto* arith = sub("arith", "Pattern frequency along n p^s + r");
  arith->add_option("--pattern", cfg.pattern)->required();
  count_option(arith, "--p", cfg.p, "Prime");
  count_option(arith, "--s", cfg.s, "Exponent s >= 1");
  count_option(arith, "--N", cfg.N, "Terms per residue");
  arith->add_option("--K", cfg.K, "Truncation depth for the reference");

  auto* recover = sub("recover", "Recover coordinates of random points from phi windows");
  count_option(recover, "--W", cfg.W, "Window length");
  count_option(recover, "--trials", cfg.trials, "Number of random points (default 100)");
  recover->add_option("--K", cfg.K, "Number of coordinates");

  auto* chowla = sub("chowla", "Correlation of mu with shifts and exponents");
  chowla->add_option("--shifts", shifts, "Comma-separated shifts")->required();
  chowla->add_option("--exponents", exponents, "Comma-separated exponents in {1,2}");
  count_option(chowla, "--N", cfg.N, "Averaging length");
  chowla->add_option("--K", cfg.K, "Truncation depth for the reference");

  auto* nuprime = sub("nuprime", "Estimate nu' of a sign pattern");
  nuprime->add_option("--pattern", cfg.pattern)->required();
  nuprime->add_option("--method", cfg.method, "orbit or mc");
  count_option(nuprime, "--N", cfg.N, "Orbit length");
  count_option(nuprime, "--samples", cfg.samples, "Monte Carlo samples");
  nuprime->add_option("--K", cfg.K, "Sampling depth");

  auto* bernoulli = sub("bernoulli", "Deviation of nu' from the Bernoulli measure");
  bernoulli->add_option("--roots-sweep", sweep, "Comma-separated X: roots = primes in [root-min, X]")
      ->required();
  count_option(bernoulli, "--m", cfg.m, "Cylinder width");
  count_option(bernoulli, "--samples", cfg.samples, "Monte Carlo samples (m >= 2)");
  count_option(bernoulli, "--root-min", cfg.root_min, "Smallest root (default 3)");

  auto* bias_cmd = sub("bias", "P'((-1)^Delta = 1) and its exp(-2 Sigma) bound");
  bias_cmd->add_option("--K", cfg.K, "Truncation depth");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.format = format == "csv" ? OutputFormat::kCsv : OutputFormat::kNdjson;
    if (budget_period) cfg.budget_period = *budget_period;
    if (budget_states) cfg.budget_states = *budget_states;
    if (budget_terms) cfg.budget_terms = *budget_terms;
    if (!shifts.empty()) cfg.shifts = parse_list<std::uint64_t>(shifts, "shifts");
    if (!exponents.empty()) cfg.exponents = parse_list<unsigned>(exponents, "exponents");
    if (!sweep.empty()) cfg.roots_sweep = parse_list<std::uint64_t>(sweep, "roots-sweep");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    *exit_code = kExitOk;
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    err << error_record("UsageError", e.what(), "").dump() << '\n';
    *exit_code = kExitBadInput;
    return std::nullopt;
  } catch (const Error& e) {
    err << error_record(error_name(e.code()), e.what(), e.field()).dump() << '\n';
    *exit_code = exit_code_for(e.code());
    return std::nullopt;
  }
  *exit_code = kExitOk;
  return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Emitter emitter(out, config.format);
  Context ctx{config, emitter, std::nullopt};
  try {
    if (!config.family_path.empty()) {
      ctx.family = validate_family(parse_family_spec(read_file(config.family_path)));
    }
    dispatch(ctx);
  } catch (const Error& e) {
    err << error_record(error_name(e.code()), e.what(), e.field()).dump() << '\n';
    return exit_code_for(e.code());
  }
  return kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto cfg = parse_args(args, out, err, &code);
  if (!cfg) return code;
  return run(*cfg, out, err);
}

}  // namespace bfree::cli
