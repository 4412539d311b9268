#pragma once

#include <string>
#include <vector>

#include "peskine/report.hpp"

namespace peskine {

/// Registered check ids in suite order. The first fourteen are the acceptance suite;
/// the rest are REPORT_ONLY probes.
const std::vector<std::string>& check_ids();
bool is_check_id(const std::string& id);

/// Runs one check. Throws std::invalid_argument for an unknown id and BudgetExceeded when a
/// scan exceeds cfg.budget. The report body does not depend on cfg.threads.
CheckReport run_check(const std::string& id, const CheckConfig& cfg);

}  // namespace peskine
