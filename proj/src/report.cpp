#include "peskine/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace peskine {

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::ReportOnly: return "REPORT_ONLY";
    case Status::Ambiguous: return "AMBIGUOUS";
  }
  return "?";
}

Status parse_status(std::string_view name) {
  for (Status s : {Status::Pass, Status::Fail, Status::ReportOnly, Status::Ambiguous})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown status: " + std::string(name));
}

Json config_params(const CheckConfig& cfg) {
  Json j = Json::object();
  j["seed"] = cfg.seed;
  j["p"] = cfg.p ? Json(*cfg.p) : Json(nullptr);
  j["trials"] = cfg.trials ? Json(*cfg.trials) : Json(nullptr);
  j["quick"] = cfg.quick;
  j["budget"] = cfg.budget;
  j["hit_threshold"] = cfg.hit_threshold;
  j["miss_threshold"] = cfg.miss_threshold;
  return j;
}

namespace {

template <class T>
T get_as(const Json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const Json::exception&) {
    throw std::invalid_argument(std::string("config: bad value for \"") + key + "\"");
  }
}

std::uint64_t get_uint(const Json& v, const char* key) {
  if (!v.is_number_unsigned()) throw std::invalid_argument(std::string("config: \"") + key + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

CheckConfig config_from_json(const Json& j, CheckConfig base) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "seed") {
      base.seed = get_uint(v, "seed");
    } else if (key == "p") {
      if (v.is_null()) base.p.reset();
      else base.p = static_cast<std::uint32_t>(get_uint(v, "p"));
    } else if (key == "trials") {
      if (v.is_null()) base.trials.reset();
      else base.trials = get_uint(v, "trials");
    } else if (key == "quick") {
      if (!v.is_boolean()) throw std::invalid_argument("config: \"quick\" must be a boolean");
      base.quick = v.get<bool>();
    } else if (key == "budget") {
      base.budget = get_uint(v, "budget");
    } else if (key == "hit_threshold") {
      base.hit_threshold = get_as<double>(v, "hit_threshold");
    } else if (key == "miss_threshold") {
      base.miss_threshold = get_as<double>(v, "miss_threshold");
    } else if (key == "threads") {
      base.threads = static_cast<unsigned>(get_uint(v, "threads"));
    } else {
      throw std::invalid_argument("config: unknown key \"" + key + "\"");
    }
  }
  if (base.p && !is_prime(*base.p)) throw std::invalid_argument("config: p is not prime");
  if (base.threads == 0) throw std::invalid_argument("config: threads must be positive");
  return base;
}

Json to_json(const CheckReport& r) {
  Json j = Json::object();
  j["check_id"] = r.check_id;
  j["seed"] = r.seed;
  j["p"] = r.p;
  j["params"] = r.params;
  j["status"] = std::string(to_string(r.status));
  j["metrics"] = r.metrics;
  return j;
}

CheckReport report_from_json(const Json& j) {
  try {
    CheckReport r;
    r.check_id = j.at("check_id").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.p = j.at("p");
    r.params = j.at("params");
    r.status = parse_status(j.at("status").get<std::string>());
    r.metrics = j.at("metrics");
    return r;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

std::string serialize(const CheckReport& r) { return to_json(r).dump(2) + "\n"; }

Json estimate_to_json(const DimEstimate& e, int offset) {
  return Json{{"estimated_dim", e.estimated_dim < 0 ? -1 : e.estimated_dim + offset},
              {"trials", e.trials},
              {"hit_profile", e.hit_profile},
              {"ambiguous", e.ambiguous},
              {"note", e.confidence_note}};
}

Json trivector_to_json(const Trivector& s) {
  Json coeffs = Json::array();
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    if (s.coeff(idx) == 0) continue;
    const auto [i, j, k] = s.triple(idx);
    coeffs.push_back({i, j, k, s.coeff(idx)});
  }
  return Json{{"p", s.field().p()}, {"n", s.n()}, {"coeffs", coeffs}};
}

Trivector trivector_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("n") || !j.contains("coeffs"))
    throw std::invalid_argument("trivector: expected an object with p, n and coeffs");
  if (!j["p"].is_number_unsigned() || !j["n"].is_number_unsigned())
    throw std::invalid_argument("trivector: p and n must be non-negative integers");
  const std::uint64_t p = j["p"].get<std::uint64_t>();
  if (p > 0xFFFFFFFFu || !is_prime(p)) throw std::invalid_argument("trivector: p = " + std::to_string(p) + " is not prime");
  const PrimeField f(static_cast<std::uint32_t>(p));
  Trivector s(f, j["n"].get<std::size_t>());
  const Json& coeffs = j["coeffs"];
  if (!coeffs.is_array()) throw std::invalid_argument("trivector: coeffs must be an array");
  std::array<std::uint64_t, 3> prev{};
  bool first = true;
  for (const Json& e : coeffs) {
    if (!e.is_array() || e.size() != 4) throw std::invalid_argument("trivector: each coefficient is [i, j, k, c]");
    for (const Json& x : e)
      if (!x.is_number_unsigned()) throw std::invalid_argument("trivector: entries must be non-negative integers");
    const std::array<std::uint64_t, 3> t{e[0].get<std::uint64_t>(), e[1].get<std::uint64_t>(), e[2].get<std::uint64_t>()};
    const std::uint64_t c = e[3].get<std::uint64_t>();
    if (!(t[0] < t[1] && t[1] < t[2] && t[2] < s.n()))
      throw std::invalid_argument("trivector: triple must satisfy i < j < k < n");
    if (!first && !(prev < t)) throw std::invalid_argument("trivector: triples must be strictly increasing");
    if (c >= p) throw std::invalid_argument("trivector: coefficient out of range");
    s.set(t[0], t[1], t[2], static_cast<Elem>(c));
    prev = t;
    first = false;
  }
  return s;
}

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

Trivector load_trivector(const std::string& path) { return trivector_from_json(read_json(path)); }

void store_trivector(const std::string& path, const Trivector& s) {
  write_text(path, trivector_to_json(s).dump() + "\n");
}

Tally tally(const std::vector<CheckReport>& reports) {
  Tally t;
  for (const auto& r : reports) {
    switch (r.status) {
      case Status::Pass: ++t.pass; break;
      case Status::Fail: ++t.fail; break;
      case Status::ReportOnly: ++t.report_only; break;
      case Status::Ambiguous: ++t.ambiguous; break;
    }
  }
  return t;
}

Json aggregate(std::vector<CheckReport> reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const CheckReport& a, const CheckReport& b) { return a.check_id < b.check_id; });
  Json list = Json::array();
  for (const auto& r : reports) list.push_back(to_json(r));
  const Tally t = tally(reports);
  return Json{{"reports", list},
              {"summary",
               {{"PASS", t.pass}, {"FAIL", t.fail}, {"REPORT_ONLY", t.report_only}, {"AMBIGUOUS", t.ambiguous}}}};
}

bool emit_report(const std::vector<CheckReport>& reports, const std::string& path, std::ostream& out) {
  const Json agg = aggregate(reports);
  if (!path.empty()) write_text(path, agg.dump(2) + "\n");
  std::vector<const CheckReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CheckReport* a, const CheckReport* b) { return a->check_id < b->check_id; });
  out << std::left << std::setw(26) << "check" << std::setw(13) << "status"
      << "runtime_ms\n";
  for (const CheckReport* r : sorted) {
    std::ostringstream ms;
    ms << std::fixed << std::setprecision(0) << r->runtime_ms;
    out << std::setw(26) << r->check_id << std::setw(13) << to_string(r->status) << ms.str() << "\n";
  }
  const Tally t = tally(reports);
  out << "PASS " << t.pass << "  FAIL " << t.fail << "  REPORT_ONLY " << t.report_only << "  AMBIGUOUS "
      << t.ambiguous << "\n";
  return t.fail == 0;
}

std::vector<CheckReport> load_reports(const std::string& path) {
  const Json j = read_json(path);
  std::vector<CheckReport> out;
  if (j.is_object() && j.contains("reports")) {
    if (!j["reports"].is_array()) throw std::invalid_argument(path + ": \"reports\" must be an array");
    for (const Json& r : j["reports"]) out.push_back(report_from_json(r));
  } else {
    out.push_back(report_from_json(j));
  }
  return out;
}

}  // namespace peskine
