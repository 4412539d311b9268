#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "peskine/checks.hpp"
#include "peskine/report.hpp"

using namespace peskine;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("peskine_test_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

Trivector parse(const std::string& text) { return trivector_from_json(Json::parse(text)); }

}  // namespace

TEST_CASE("trivector JSON round trip") {
  Rng rng(1);
  const std::string path = temp_path("trivector.json");
  for (int t = 0; t < 100; ++t) {
    const std::uint32_t p = t % 2 == 0 ? 7 : 101;
    const std::size_t n = 4 + 2 * (t % 4);
    const PrimeField f(p);
    Trivector s = Trivector::random(rng, f, n);
    // sparse ones exercise omitted zeros
    if (t % 3 == 0)
      for (std::size_t i = 0; i < s.size(); ++i)
        if (rng.below(2) == 0) s.set_coeff(i, 0);
    store_trivector(path, s);
    const Trivector back = load_trivector(path);
    CHECK(back == s);
    const Json j = trivector_to_json(s);
    for (const auto& e : j["coeffs"]) CHECK(e[3].get<Elem>() != 0);
    CHECK(trivector_to_json(back) == j);
  }
  std::remove(path.c_str());
}

TEST_CASE("trivector JSON validation") {
  CHECK(parse(R"({"p": 5, "n": 6, "coeffs": []})").is_zero());
  const Trivector one = parse(R"({"p": 5, "n": 6, "coeffs": [[0, 1, 2, 3], [1, 2, 5, 4]]})");
  CHECK(one.get(0, 1, 2) == 3);
  CHECK(one.get(1, 2, 5) == 4);
  CHECK_THROWS_AS(parse(R"({"p": 5, "n": 6, "coeffs": [[2, 1, 3, 1]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"p": 5, "n": 6, "coeffs": [[0, 1, 3, 1], [0, 1, 2, 1]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"p": 5, "n": 6, "coeffs": [[0, 1, 2, 1], [0, 1, 2, 1]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"p": 5, "n": 6, "coeffs": [[0, 1, 2, 5]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"p": 6, "n": 6, "coeffs": []})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"p": 5, "n": 6, "coeffs": [[0, 1, 6, 1]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"p": 5, "n": 6, "coeffs": [[0, 1, 2]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"p": 5, "n": 6, "coeffs": [[0, 1, 2, -1]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"p": 5, "coeffs": []})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"([1, 2])"), std::invalid_argument);
  const std::string bad = temp_path("malformed.json");
  write_file(bad, "{\"p\": 5,");
  CHECK_THROWS_AS(load_trivector(bad), std::invalid_argument);
  std::remove(bad.c_str());
  CHECK_THROWS(load_trivector(temp_path("does_not_exist.json")));
}

TEST_CASE("config and status") {
  for (Status s : {Status::Pass, Status::Fail, Status::ReportOnly, Status::Ambiguous}) CHECK(parse_status(to_string(s)) == s);
  CHECK_THROWS_AS(parse_status("OK"), std::invalid_argument);

  const CheckConfig c = config_from_json(Json::parse(R"({"seed": 9, "p": 11, "quick": true, "threads": 2})"));
  CHECK(c.seed == 9);
  CHECK(c.p == 11u);
  CHECK(c.quick);
  CHECK(c.threads == 2);
  CHECK_FALSE(config_params(c).contains("threads"));
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"sed": 9})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"p": 12})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"seed": "x"})")), std::invalid_argument);
}

TEST_CASE("report serialization and aggregation") {
  CheckReport a;
  a.check_id = "zeta";
  a.seed = 3;
  a.p = 7;
  a.params = config_params(CheckConfig{});
  a.status = Status::Pass;
  a.metrics = Json{{"b", 1}, {"a", 2}};
  a.runtime_ms = 12.5;
  const std::string text = serialize(a);
  CHECK(text.find("runtime") == std::string::npos);
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(text.find("\"check_id\"") < text.find("\"metrics\""));
  CheckReport other = a;
  other.runtime_ms = 99;
  CHECK(serialize(other) == text);
  CHECK(serialize(report_from_json(Json::parse(text))) == text);

  const Json empty = aggregate({});
  CHECK(empty["reports"].empty());
  CHECK(empty["summary"]["PASS"] == 0);
  std::ostringstream sink;
  CHECK(emit_report({}, "", sink));

  CheckReport b = a;
  b.check_id = "alpha";
  b.status = Status::Fail;
  const std::string path = temp_path("aggregate.json");
  CHECK_FALSE(emit_report({a, b}, path, sink));
  const auto loaded = load_reports(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].check_id == "alpha");
  CHECK(loaded[1].check_id == "zeta");
  CHECK(sink.str().find("FAIL 1") != std::string::npos);
  std::remove(path.c_str());

  CheckReport r = a;
  r.status = Status::ReportOnly;
  CHECK(emit_report({a, r}, "", sink));
}

TEST_CASE("check registry") {
  const auto& ids = check_ids();
  CHECK(ids.size() == 16);
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == ids.size());
  CHECK(ids.front() == "pfaffian-identity");
  CHECK(ids[13] == "determinism-equivariance");
  CHECK(is_check_id("birationality"));
  CHECK_FALSE(is_check_id("no-such-check"));
  CHECK_THROWS_AS(run_check("no-such-check", CheckConfig{}), std::invalid_argument);
  CheckConfig bad;
  bad.p = 9;
  CHECK_THROWS_AS(run_check("pfaffian-identity", bad), std::invalid_argument);
}

TEST_CASE("checks are deterministic and thread independent") {
  CheckConfig cfg;
  cfg.quick = true;
  cfg.seed = 5;
  for (const char* id : {"pfaffian-identity", "cubic-pencil", "sigma-dprime-generation", "sigma-prime-rank", "d3310-fibers"}) {
    cfg.threads = 1;
    const std::string one = serialize(run_check(id, cfg));
    CHECK(serialize(run_check(id, cfg)) == one);
    cfg.threads = 4;
    CHECK(serialize(run_check(id, cfg)) == one);
  }
  cfg.threads = 1;
  const CheckReport probe = run_check("cubic-singularity-probe", cfg);
  CHECK(probe.status == Status::ReportOnly);
  CheckConfig other = cfg;
  other.seed = 6;
  CHECK(serialize(run_check("pfaffian-identity", other)) != serialize(run_check("pfaffian-identity", cfg)));
}

TEST_CASE("a budget too small for a scan is reported as BudgetExceeded") {
  CheckConfig cfg;
  cfg.quick = true;
  cfg.budget = 1000;
  CHECK_THROWS_AS(run_check("sigma-prime-rank", cfg), BudgetExceeded);
}

TEST_CASE("the quick suite aggregate lists every check once") {
  CheckConfig cfg;
  cfg.quick = true;
  cfg.threads = 1;
  std::vector<CheckReport> reports;
  for (const auto& id : check_ids())
    if (id != "determinism-equivariance") reports.push_back(run_check(id, cfg));
  CheckReport det;
  det.check_id = "determinism-equivariance";
  det.status = Status::Pass;
  reports.push_back(det);
  const Json agg = aggregate(reports);
  std::multiset<std::string> seen;
  for (const auto& r : agg["reports"]) seen.insert(r["check_id"].get<std::string>());
  CHECK(seen.size() == check_ids().size());
  for (const auto& id : check_ids()) CHECK(seen.count(id) == 1);
  std::vector<std::string> order;
  for (const auto& r : agg["reports"]) order.push_back(r["check_id"]);
  CHECK(std::is_sorted(order.begin(), order.end()));
  for (const auto& r : reports)
    if (r.check_id == "cubic-singularity-probe" || r.check_id == "o5-locus-dimension") CHECK(r.status == Status::ReportOnly);
}
