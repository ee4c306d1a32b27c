#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bfree/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = bfree::cli::main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_family(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("bfree_test_" + name + ".json");
  std::ofstream(p) << text;
  return p.string();
}

std::vector<json> records(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("measure example") {
  const auto f49 = write_family("f49", R"({"kind":"explicit","moduli":[4,9]})");
  const Result r = run({"measure", "--family", f49, "--pattern", "10"});
  REQUIRE(r.code == 0);
  const auto rec = records(r.out);
  REQUIRE(rec.size() == 1);
  CHECK(rec[0]["exact"] == "5/18");
  CHECK(rec[0]["method"] == "nu_cylinder");
  CHECK(rec[0]["family"].is_string());
  CHECK(rec[0]["seed"].is_null());
  // Global flags may follow the subcommand.
  CHECK(run({"--family", f49, "measure", "--pattern", "10"}).out == r.out);
  const Result p = run({"measure", "--family", f49, "--pattern", "10", "--method", "period"});
  CHECK(records(p.out)[0]["exact"] == "5/18");
}

TEST_CASE("entropy example") {
  const auto sq = write_family("sq", R"({"kind":"r-free","r":2,"prime_limit":1000})");
  const Result r = run({"entropy", "--family", sq, "--K", "primes<10^6"});
  REQUIRE(r.code == 0);
  const auto rec = records(r.out)[0];
  const double lo = rec["lo_approx"], hi = rec["hi_approx"];
  CHECK(lo <= 0.607927);
  CHECK(hi >= 0.6079271);
}

TEST_CASE("bad input exits 2 with a diagnostic naming the field") {
  const auto bad = write_family("bad", R"({"kind":"explicit","moduli":[4,"nine"]})");
  const Result r = run({"entropy", "--family", bad});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  const auto d = json::parse(r.err);
  CHECK(d["field"] == "moduli");
  CHECK(d["error"].is_string());

  CHECK(run({"entropy", "--family", "/nonexistent/x.json"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--threads", "0", "entropy"}).code == 2);
  const auto coprime = write_family("nc", R"({"kind":"explicit","moduli":[4,6]})");
  CHECK(run({"entropy", "--family", coprime}).code == 2);
}

TEST_CASE("randomized subcommands need a seed") {
  const auto r35 = write_family("r35", R"({"kind":"rooted-explicit","roots":[3,5]})");
  const Result r = run({"nuprime", "--family", r35, "--pattern", "+-", "--method", "mc",
                        "--samples", "1000"});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err)["field"] == "seed");
}

TEST_CASE("budget and unsupported exit codes") {
  const auto f49 = write_family("f49", R"({"kind":"explicit","moduli":[4,9]})");
  CHECK(run({"measure", "--family", f49, "--pattern", "100000", "--budget-terms", "4"}).code == 3);
  const auto big = write_family("big", R"({"kind":"explicit","moduli":[101,103,107]})");
  CHECK(run({"measure", "--family", big, "--pattern", "1", "--method", "period", "--budget-period",
             "1000"})
            .code == 3);
  CHECK(run({"gamma", "--family", f49, "--n", "30", "--method", "brute"}).code == 3);
  const auto mob = write_family("mob", R"({"kind":"rooted-primes","prime_limit":100})");
  CHECK(run({"nuprime", "--family", mob, "--pattern", "+", "--method", "mc", "--samples", "10",
             "--seed", "1"})
            .code == 4);
}

TEST_CASE("output is deterministic and thread independent") {
  const auto r = write_family("rp", R"({"kind":"rooted-primes","prime_min":3,"prime_max":100})");
  const std::vector<std::string> base = {"nuprime", "--family", r, "--pattern", "+-", "--method",
                                         "mc", "--samples", "10^5", "--seed", "17"};
  auto with_threads = base;
  with_threads.insert(with_threads.end(), {"--threads", "3"});
  const Result a = run(base);
  REQUIRE(a.code == 0);
  CHECK(run(base).out == a.out);
  CHECK(run(with_threads).out == a.out);
  CHECK(records(a.out)[0]["seed"] == 17);
}

TEST_CASE("csv output") {
  const auto f49 = write_family("f49", R"({"kind":"explicit","moduli":[4,9]})");
  const Result r = run({"--format", "csv", "sieve", "--family", f49, "--hi", "4", "--mu"});
  CHECK(r.code != 0);  // {4, 9} is not rooted
  const auto rooted = write_family("r23", R"({"kind":"rooted-explicit","roots":[2,3]})");
  const Result c = run({"--format", "csv", "sieve", "--family", rooted, "--hi", "4", "--mu"});
  REQUIRE(c.code == 0);
  std::istringstream in(c.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "key,n,eta,delta,pi,mu,method,family,seed");
  std::string row;
  std::getline(in, row);
  CHECK(row.rfind("sieve/000000,1,1,0,1,1,sieve_mu,", 0) == 0);
}

TEST_CASE("subcommands smoke") {
  const auto f49 = write_family("f49", R"({"kind":"explicit","moduli":[4,9]})");
  const auto rooted = write_family("r23", R"({"kind":"rooted-explicit","roots":[2,3]})");
  const std::vector<std::vector<std::string>> cases = {
      {"sieve", "--family", f49, "--lo", "1", "--hi", "100"},
      {"twins", "--family", f49, "--N", "360"},
      {"admissible", "--family", f49, "--pattern", "1101"},
      {"gamma", "--family", f49, "--n", "12", "--method", "brute"},
      {"gamma", "--family", f49, "--n", "36", "--bracket"},
      {"generic", "--family", f49, "--pattern", "1*1", "--N", "360"},
      {"short", "--family", f49, "--pattern", "1", "--N", "1296"},
      {"arith", "--family", f49, "--pattern", "1", "--p", "2", "--s", "3", "--N", "100"},
      {"recover", "--family", f49, "--W", "18", "--trials", "5", "--seed", "1"},
      {"chowla", "--family", rooted, "--shifts", "0,2", "--exponents", "2,2", "--N", "36"},
      {"nuprime", "--family", rooted, "--pattern", "+-", "--N", "36"},
      {"bias", "--family", rooted},
      {"bernoulli", "--roots-sweep", "10,100", "--m", "1"},
  };
  for (const auto& args : cases) {
    const Result r = run(args);
    CHECK_MESSAGE(r.code == 0, std::string(args[0] + ": " + r.err));
    CHECK_FALSE(r.out.empty());
  }
  const auto chowla = records(run(cases[9]).out)[0];
  CHECK(chowla["value"] == chowla["reference"]["exact"]);
  const auto twins = records(run(cases[1]).out)[0];
  CHECK(twins["frequency"] == twins["reference"]["exact"]);
}
