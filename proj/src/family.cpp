#include "bfree/family.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

#include "bfree/error.hpp"
#include "bfree/primes.hpp"

namespace bfree {

std::string_view kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kExplicit: return "explicit";
    case FamilyKind::kRFree: return "r-free";
    case FamilyKind::kRootedExplicit: return "rooted-explicit";
    case FamilyKind::kRootedPrimes: return "rooted-primes";
  }
  return "?";
}

namespace {

using nlohmann::json;

std::uint64_t read_uint(const json& obj, const char* field) {
  const json& v = obj.at(field);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("field '") + field + "' must be an integer", field);
  }
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto s = v.get<std::int64_t>();
  if (s < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("field '") + field + "' must be non-negative", field);
  }
  return static_cast<std::uint64_t>(s);
}

std::vector<std::uint64_t> read_uint_list(const json& obj, const char* field) {
  if (!obj.contains(field) || !obj.at(field).is_array()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("field '") + field + "' must be an array of integers", field);
  }
  std::vector<std::uint64_t> out;
  for (const json& v : obj.at(field)) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("field '") + field + "' must hold non-negative integers",
                  field);
    }
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

std::uint64_t require_uint(const json& obj, const char* field) {
  if (!obj.contains(field)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("missing field '") + field + "'", field);
  }
  return read_uint(obj, field);
}

void check_moduli(std::vector<std::uint64_t>& values, const char* what) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptyFamily, std::string("no ") + what + " given", what);
  }
  std::sort(values.begin(), values.end());
  for (std::uint64_t v : values) {
    if (v < 2) {
      throw Error(ErrorCode::kModulusTooSmall,
                  std::string(what) + " must be >= 2, got " + std::to_string(v), what);
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (gcd(values[i], values[j]) > 1) {
        throw Error(ErrorCode::kNotCoprime,
                    "not coprime: (" + std::to_string(values[i]) + ", " +
                        std::to_string(values[j]) + ")",
                    what);
      }
    }
  }
}

std::uint64_t checked_square(std::uint64_t a) {
  auto sq = checked_pow(a, 2);
  if (!sq) throw Error(ErrorCode::kOverflow, "root squared overflows 64 bits");
  return *sq;
}

Rational reciprocal_sum(std::span<const std::uint64_t> values) {
  // Common denominator via product tree keeps this fast for long lists.
  if (values.empty()) return 0;
  if (values.size() == 1) return make_rational(1, values[0]);
  const std::size_t mid = values.size() / 2;
  Rational r = reciprocal_sum(values.subspan(0, mid)) + reciprocal_sum(values.subspan(mid));
  return r;
}

// sum_{n > x} n^-r <= x^(1-r)/(r-1) for integer x >= 1.
Rational power_tail(std::uint64_t x, unsigned r) {
  BigInt den = to_big(x);
  mpz_pow_ui(den.get_mpz_t(), den.get_mpz_t(), r - 1);
  den *= (r - 1);
  return make_rational(BigInt(1), den);
}

}  // namespace

FamilySpec parse_family_spec(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("family file: ") + e.what(), "json");
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "family file must hold a JSON object", "json");
  }
  if (!obj.contains("kind") || !obj.at("kind").is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "missing string field 'kind'", "kind");
  }
  FamilySpec spec;
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "explicit") {
    spec.kind = FamilyKind::kExplicit;
    spec.moduli = read_uint_list(obj, "moduli");
  } else if (kind == "r-free") {
    spec.kind = FamilyKind::kRFree;
    spec.r = static_cast<unsigned>(require_uint(obj, "r"));
    spec.prime_limit = require_uint(obj, "prime_limit");
  } else if (kind == "rooted-explicit") {
    spec.kind = FamilyKind::kRootedExplicit;
    spec.roots = read_uint_list(obj, "roots");
  } else if (kind == "rooted-primes") {
    spec.kind = FamilyKind::kRootedPrimes;
    if (obj.contains("prime_min")) spec.prime_min = read_uint(obj, "prime_min");
    if (obj.contains("prime_max")) {
      spec.prime_max = read_uint(obj, "prime_max");
    } else {
      spec.prime_limit = require_uint(obj, "prime_limit");
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown kind '" + kind + "'", "kind");
  }
  return spec;
}

BFamily validate_family(const FamilySpec& spec) {
  BFamily f;
  f.kind_ = spec.kind;
  switch (spec.kind) {
    case FamilyKind::kExplicit: {
      f.moduli_ = spec.moduli;
      check_moduli(f.moduli_, "moduli");
      break;
    }
    case FamilyKind::kRootedExplicit: {
      f.roots_ = spec.roots;
      check_moduli(f.roots_, "roots");
      for (std::uint64_t a : f.roots_) f.moduli_.push_back(checked_square(a));
      break;
    }
    case FamilyKind::kRFree: {
      if (spec.r < 2) throw Error(ErrorCode::kInvalidArgument, "r must be >= 2", "r");
      f.finite_ = false;
      f.power_ = spec.r;
      f.prime_min_ = 2;
      f.prime_limit_ = spec.prime_limit;
      for (std::uint64_t p : primes_up_to(spec.prime_limit)) {
        auto b = checked_pow(p, spec.r);
        if (!b) throw Error(ErrorCode::kOverflow, "p^r overflows 64 bits", "prime_limit");
        f.moduli_.push_back(*b);
      }
      if (f.moduli_.empty()) {
        throw Error(ErrorCode::kEmptyFamily, "prime_limit admits no primes", "prime_limit");
      }
      break;
    }
    case FamilyKind::kRootedPrimes: {
      const std::uint64_t hi = spec.prime_max ? *spec.prime_max : spec.prime_limit;
      f.roots_ = primes_between(spec.prime_min, hi);
      if (f.roots_.empty()) {
        throw Error(ErrorCode::kEmptyFamily, "no primes in the requested range",
                    spec.prime_max ? "prime_max" : "prime_limit");
      }
      for (std::uint64_t a : f.roots_) f.moduli_.push_back(checked_square(a));
      if (!spec.prime_max) {
        f.finite_ = false;
        f.power_ = 2;
        f.prime_min_ = std::max<std::uint64_t>(spec.prime_min, 2);
        f.prime_limit_ = spec.prime_limit;
      }
      break;
    }
  }
  return f;
}

std::vector<std::uint64_t> BFamily::generated_primes(std::uint64_t hi) const {
  return primes_between(prime_min_, hi);
}

std::vector<std::uint64_t> BFamily::moduli_up_to(std::uint64_t limit) const {
  std::vector<std::uint64_t> out;
  if (finite_ || (!moduli_.empty() && limit <= moduli_.back())) {
    for (std::uint64_t b : moduli_) {
      if (b > limit) break;
      out.push_back(b);
    }
    return out;
  }
  for (std::uint64_t p : generated_primes(integer_root(limit, power_))) {
    out.push_back(*checked_pow(p, power_));
  }
  return out;
}

std::vector<std::uint64_t> BFamily::roots_up_to(std::uint64_t limit) const {
  if (!is_rooted()) throw Error(ErrorCode::kNotRootedFamily, "family has no roots");
  std::vector<std::uint64_t> out;
  if (finite_ || (!roots_.empty() && limit <= roots_.back())) {
    for (std::uint64_t a : roots_) {
      if (a > limit) break;
      out.push_back(a);
    }
    return out;
  }
  return generated_primes(limit);
}

std::uint64_t BFamily::kth_prime(std::size_t K) const {
  std::uint64_t hi = std::max<std::uint64_t>(prime_limit_, 64);
  for (;;) {
    auto ps = generated_primes(hi);
    if (ps.size() >= K) return ps[K - 1];
    hi *= 2;
  }
}

std::vector<std::uint64_t> BFamily::moduli_prefix(std::size_t K) const {
  if (K <= moduli_.size()) return {moduli_.begin(), moduli_.begin() + K};
  if (finite_) return moduli_;
  const std::uint64_t pk = kth_prime(K);
  auto ps = generated_primes(pk);
  std::vector<std::uint64_t> out;
  out.reserve(K);
  for (std::size_t i = 0; i < K; ++i) {
    auto b = checked_pow(ps[i], power_);
    if (!b) throw Error(ErrorCode::kOverflow, "modulus overflows 64 bits");
    out.push_back(*b);
  }
  return out;
}

std::vector<std::uint64_t> BFamily::roots_prefix(std::size_t K) const {
  if (!is_rooted()) throw Error(ErrorCode::kNotRootedFamily, "family has no roots");
  if (K <= roots_.size()) return {roots_.begin(), roots_.begin() + K};
  if (finite_) return roots_;
  auto ps = generated_primes(kth_prime(K));
  ps.resize(K);
  return ps;
}

std::size_t BFamily::count_up_to(std::uint64_t limit) const {
  if (finite_ || (!moduli_.empty() && limit <= moduli_.back())) {
    return static_cast<std::size_t>(
        std::upper_bound(moduli_.begin(), moduli_.end(), limit) - moduli_.begin());
  }
  return moduli_up_to(limit).size();
}

std::size_t BFamily::prime_depth(std::uint64_t bound) const {
  if (finite_) return moduli_.size();
  if (bound <= prime_min_) return 0;
  return generated_primes(bound - 1).size();
}

Rational BFamily::tail_sum_bound(std::size_t K) const {
  if (K < moduli_.size()) {
    Rational exact = reciprocal_sum(std::span(moduli_).subspan(K));
    if (finite_) return exact;
    return exact + power_tail(std::max<std::uint64_t>(prime_limit_, prime_min_ - 1), power_);
  }
  if (finite_) return 0;
  if (K == moduli_.size()) {
    return power_tail(std::max<std::uint64_t>(prime_limit_, prime_min_ - 1), power_);
  }
  // Primes beyond the K-th one are all > p_K.
  return power_tail(kth_prime(K), power_);
}

std::optional<Rational> BFamily::root_tail_sum(std::size_t K) const {
  if (!is_rooted()) throw Error(ErrorCode::kNotRootedFamily, "family has no roots");
  if (!finite_) return std::nullopt;
  if (K >= roots_.size()) return Rational(0);
  return reciprocal_sum(std::span(roots_).subspan(K));
}

std::optional<Rational> BFamily::sigma() const { return root_tail_sum(0); }

std::optional<std::uint64_t> BFamily::modulus_divisible_by(std::uint64_t p) const {
  if (!finite_) {
    if (p >= prime_min_ && is_prime(p)) {
      auto b = checked_pow(p, power_);
      if (!b) throw Error(ErrorCode::kOverflow, "p^r overflows 64 bits");
      return *b;
    }
    return std::nullopt;
  }
  for (std::uint64_t b : moduli_) {
    if (b % p == 0) return b;
  }
  return std::nullopt;
}

std::string BFamily::canonical_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(kind_);
  switch (kind_) {
    case FamilyKind::kExplicit: j["moduli"] = moduli_; break;
    case FamilyKind::kRootedExplicit: j["roots"] = roots_; break;
    case FamilyKind::kRFree:
      j["r"] = power_;
      j["prime_limit"] = prime_limit_;
      break;
    case FamilyKind::kRootedPrimes:
      if (finite_) {
        j["roots"] = roots_;
      } else {
        j["prime_min"] = prime_min_;
        j["prime_limit"] = prime_limit_;
      }
      break;
  }
  return j.dump();
}

std::string BFamily::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Rational tail_sum_bound(const BFamily& family, std::size_t K) {
  return family.tail_sum_bound(K);
}

std::vector<std::uint64_t> enumerate_moduli(const BFamily& family, std::uint64_t limit) {
  return family.moduli_up_to(limit);
}

BFamily explicit_family(std::vector<std::uint64_t> moduli) {
  FamilySpec s;
  s.kind = FamilyKind::kExplicit;
  s.moduli = std::move(moduli);
  return validate_family(s);
}

BFamily r_free_family(unsigned r, std::uint64_t prime_limit) {
  FamilySpec s;
  s.kind = FamilyKind::kRFree;
  s.r = r;
  s.prime_limit = prime_limit;
  return validate_family(s);
}

BFamily rooted_family(std::vector<std::uint64_t> roots) {
  FamilySpec s;
  s.kind = FamilyKind::kRootedExplicit;
  s.roots = std::move(roots);
  return validate_family(s);
}

BFamily rooted_primes_family(std::uint64_t prime_min, std::uint64_t prime_max) {
  FamilySpec s;
  s.kind = FamilyKind::kRootedPrimes;
  s.prime_min = prime_min;
  s.prime_max = prime_max;
  return validate_family(s);
}

BFamily mobius_family(std::uint64_t prime_limit, std::uint64_t prime_min) {
  FamilySpec s;
  s.kind = FamilyKind::kRootedPrimes;
  s.prime_min = prime_min;
  s.prime_limit = prime_limit;
  return validate_family(s);
}

}  // namespace bfree
