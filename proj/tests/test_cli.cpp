#include <doctest.h>

#include <cmath>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "concbounds/bounds.hpp"

using namespace concbounds::cli;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

double result(const nlohmann::json& record, const std::string& name) {
  for (const auto& r : record["results"]) {
    if (r["name"] == name) return r["value"].get<double>();
  }
  FAIL("missing result " << name);
  return 0.0;
}

std::string strip_timestamp(const std::string& s) {
  static const std::regex ts(R"("timestamp":"[^"]*")");
  return std::regex_replace(s, ts, "\"timestamp\":\"\"");
}

} // namespace

TEST_CASE("phi command") {
  const Run r = invoke({"phi", "--n", "3", "--z", "2"});
  CHECK(r.code == kExitOk);
  const auto recs = lines(r.out);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0]["command"] == "phi");
  CHECK(result(recs[0], "log_phi") == doctest::Approx(std::log(std::sinh(2.0) / 2.0)).epsilon(1e-9));
  CHECK(recs[0]["meta"]["version"] == kVersion);
  CHECK(recs[0]["meta"]["seed"].is_null());

  CHECK(result(lines(invoke({"phi", "--n", "7", "--z", "0"}).out)[0], "log_phi") == 0.0);

  const auto big = lines(invoke({"phi", "--n", "2", "--z", "1e4"}).out)[0];
  CHECK(std::isfinite(result(big, "log_phi")));
  CHECK(big["results"][1]["value"].is_null());
  CHECK(big["results"][1]["verdict"] == "overflow");
}

TEST_CASE("bound command") {
  const auto thm3 = invoke({"bound", "vector", "--method", "thm3", "--n", "4", "--sigma", "1", "--delta",
                            "0.1353352832"});
  CHECK(thm3.code == kExitOk);
  CHECK(result(lines(thm3.out)[0], "radius") == doctest::Approx(4.0).epsilon(1e-9));

  const auto all = lines(invoke({"bound", "vector", "--method", "all", "--n", "10", "--sigma", "1",
                                 "--delta", "0.01"}).out)[0];
  CHECK(result(all, "hkz.radius") <= result(all, "thm3.radius"));

  const auto mat = lines(invoke({"bound", "matrix", "--m", "3", "--n", "4", "--sigma", "1", "--delta",
                                 "0.01", "--eps", "auto"}).out)[0];
  CHECK(result(mat, "radius") == concbounds::bounds::optimize_eps_matrix(3, 4, 1, 0.01).radius);

  const auto fixed = lines(invoke({"bound", "vector", "--method", "thm2", "--n", "10", "--delta", "0.01",
                                   "--eps", "0.5"}).out)[0];
  CHECK(result(fixed, "eps") == 0.5);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({"bound", "matrix", "--n", "4", "--delta", "0.01"}).code == kExitUsage);
  CHECK(invoke({"bound", "vector", "--method", "thm4", "--n", "4", "--delta", "0.01"}).code == kExitUsage);
  CHECK(invoke({"bound", "vector", "--method", "thm3", "--n", "4", "--delta", "0.01", "--eps", "0.5"}).code ==
        kExitUsage);
  CHECK(invoke({"bound", "vector", "--method", "thm2", "--n", "4", "--delta", "0.01", "--eps", "x"}).code ==
        kExitUsage);
  CHECK(invoke({"bound", "vector", "--n", "4", "--delta", "1.5"}).code == kExitUsage);
  CHECK(invoke({"phi", "--n", "0", "--z", "1"}).code == kExitUsage);
  CHECK(invoke({"phi", "--n", "3"}).code == kExitUsage);
  CHECK(invoke({"frobnicate"}).code == kExitUsage);
  CHECK(invoke({"verify", "nosuch"}).code == kExitUsage);
  CHECK(invoke({"--format", "xml", "phi", "--n", "3", "--z", "1"}).code == kExitUsage);
  const Run r = invoke({"phi", "--n", "-1", "--z", "1"});
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("verify suites") {
  const Run l1 = invoke({"verify", "lemma1", "--n", "5", "--eps", "0.3", "--zmax", "100", "--grid", "200"});
  CHECK(l1.code == kExitOk);
  const auto recs = lines(l1.out);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0]["results"][0]["verdict"] == "pass");
  CHECK(recs[1]["results"][3]["verdict"] == "pass");

  CHECK(invoke({"verify", "deriv", "--n", "6"}).code == kExitOk);
  CHECK(invoke({"verify", "coverage", "--dist", "gaussian", "--n", "10", "--sigma", "1", "--method", "thm3",
                "--delta", "0.01", "--samples", "100000", "--seed", "7"})
            .code == kExitOk);
  CHECK(invoke({"verify", "mgf", "--dist", "rademacher", "--n", "3", "--lambda", "2", "--samples", "100000",
                "--seed", "7"})
            .code == kExitOk);
  CHECK(invoke({"verify", "matrix", "--matrices", "2", "--samples", "5000", "--coverage-samples", "2000"})
            .code == kExitOk);
}

TEST_CASE("inconclusive checks warn, and fail only under --strict") {
  // The Gaussian attains the AMGF bound exactly, so the 3-SE comparison cannot separate them.
  const std::vector<std::string> args{"verify", "amgf", "--dist", "gaussian", "--n", "3",
                                      "--lambda", "1", "--samples", "20000", "--seed", "1"};
  const Run loose = invoke(args);
  REQUIRE(lines(loose.out).back()["results"][3]["verdict"] == "inconclusive");
  CHECK(loose.code == kExitOk);
  CHECK(loose.err.find("inconclusive") != std::string::npos);

  std::vector<std::string> strict_args{"--strict"};
  strict_args.insert(strict_args.end(), args.begin(), args.end());
  CHECK(invoke(strict_args).code == kExitCheckFailed);
}

TEST_CASE("seeded output is byte-identical apart from the timestamp") {
  const std::vector<std::string> args{"--seed", "3", "verify", "mgf", "--dist", "uniform", "--n", "4",
                                      "--samples", "50000"};
  const Run a = invoke(args);
  const Run b = invoke(args);
  CHECK(strip_timestamp(a.out) == strip_timestamp(b.out));
  CHECK(lines(a.out)[0]["meta"]["seed"] == 3);

  std::vector<std::string> threaded{"--workers", "4"};
  threaded.insert(threaded.end(), args.begin(), args.end());
  CHECK(strip_timestamp(invoke(threaded).out) == strip_timestamp(a.out));
}

TEST_CASE("csv and json carry the same numbers") {
  const Run json_run = invoke({"compare", "--n", "7", "--delta", "0.05"});
  const Run csv_run = invoke({"--format", "csv", "compare", "--n", "7", "--delta", "0.05"});
  const auto rec = lines(json_run.out)[0];
  std::istringstream csv(csv_run.out);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "command,name,value,stderr,verdict");
  std::size_t i = 0;
  while (std::getline(csv, line)) {
    REQUIRE(i < rec["results"].size());
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    CHECK(cells[1] == rec["results"][i]["name"].get<std::string>());
    CHECK(std::stod(cells[2]) == rec["results"][i]["value"].get<double>());
    ++i;
  }
  CHECK(i == rec["results"].size());
}

TEST_CASE("table command") {
  const Run csv = invoke({"table", "--sweep", "n", "--n-min", "1", "--n-max", "3", "--delta", "0.1"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.rfind("n,delta,method,radius,c1,c2,eps\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 1 + 5 + 4 + 4);
  const Run json_table = invoke({"--format", "json", "table", "--deltas", "0.1,0.01"});
  CHECK(lines(json_table.out).size() == 2);
  CHECK(invoke({"table", "--sweep", "sigma"}).code == kExitUsage);
}

TEST_CASE("OutputRecord round-trips through JSON") {
  OutputRecord r;
  r.command = "verify";
  r.params = {{"suite", std::string("coverage")}, {"n", 10.0}, {"delta", 0.01}, {"a_key", 0.1 + 0.2}};
  r.results = {{"statistic", 0.99991, 3.1e-5, std::string("pass")},
               {"phi", std::nullopt, std::nullopt, std::string("overflow")},
               {"tiny", 4.9e-324, std::nullopt, std::nullopt}};
  r.meta = {kVersion, 18446744073709551615ULL, "2026-01-01T00:00:00Z"};
  const std::string text = r.to_json().dump();
  CHECK(OutputRecord::from_json(nlohmann::ordered_json::parse(text)) == r);
  CHECK(OutputRecord::from_json(r.to_json()) == r);
}
