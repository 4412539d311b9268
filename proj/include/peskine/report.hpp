#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "peskine/estimate.hpp"
#include "peskine/parallel.hpp"
#include "peskine/trivector.hpp"

namespace peskine {

using Json = nlohmann::json;

enum class Status { Pass, Fail, ReportOnly, Ambiguous };
std::string_view to_string(Status s) noexcept;
Status parse_status(std::string_view name);

/// Effective configuration of a check run. Every field except threads is part of the
/// report body; threads only changes runtime.
struct CheckConfig {
  std::uint64_t seed = 1;
  std::optional<std::uint32_t> p;     // replaces the check's default primes
  std::optional<std::size_t> trials;  // slice trials per level (default 20)
  bool quick = false;                 // reduced sample sizes
  std::uint64_t budget = 100'000'000;
  double hit_threshold = 0.6;
  double miss_threshold = 0.2;
  unsigned threads = default_threads();
};

Json config_params(const CheckConfig& cfg);

/// Reads the keys of config_params (and "threads") from a JSON object on top of base.
/// Throws std::invalid_argument for unknown keys or wrong types.
CheckConfig config_from_json(const Json& j, CheckConfig base = {});

struct CheckReport {
  std::string check_id;
  std::uint64_t seed = 0;
  Json p;  // the prime, or the list of primes
  Json params;
  Status status = Status::Fail;
  Json metrics = Json::object();
  double runtime_ms = 0;  // not serialized
};

/// The byte-stable body: sorted keys, no runtime.
Json to_json(const CheckReport& r);
CheckReport report_from_json(const Json& j);
std::string serialize(const CheckReport& r);

/// DimEstimate with estimated_dim shifted by offset (e.g. -1 for a cone).
Json estimate_to_json(const DimEstimate& e, int offset = 0);

/// { "p": int, "n": int, "coeffs": [[i, j, k, c], ...] } with strictly increasing triples
/// and 0 <= c < p. Throws std::invalid_argument on any violation.
Json trivector_to_json(const Trivector& s);
Trivector trivector_from_json(const Json& j);
Trivector load_trivector(const std::string& path);
void store_trivector(const std::string& path, const Trivector& s);

struct Tally {
  std::size_t pass = 0, fail = 0, report_only = 0, ambiguous = 0;
};
Tally tally(const std::vector<CheckReport>& reports);

/// { "reports": [...sorted by check_id], "summary": {...} }.
Json aggregate(std::vector<CheckReport> reports);

/// Writes the aggregate to path (skipped if empty) and a summary table to out. Returns
/// false if any report is FAIL. Throws std::runtime_error on I/O failure.
bool emit_report(const std::vector<CheckReport>& reports, const std::string& path, std::ostream& out);

/// Reports from a single-report or aggregate JSON file.
std::vector<CheckReport> load_reports(const std::string& path);

}  // namespace peskine
