#pragma once

// JSON renderings of verification and recovery results.
//
// Both documents share the layout
//   {"classification": ..., "groups": [{"index", "size", "v1", "v1_raw", "v2",
//     "localized": [{"pk", "column"}], "status"}], ...}
// where v1/v2 are boolean arrays in group order. The tamper report's group status
// is the group's classification; the recovery report's is its recovery status.

#include "relmark/recovery.hpp"
#include "relmark/table.hpp"

#include <json.hpp>

namespace relmark {

nlohmann::json tamper_report_json(const TamperReport& report, const Table& table);

/// `original` is the table recovery ran on; cells are named with its keys.
nlohmann::json recovery_report_json(const RecoveryOutcome& outcome, const Table& original);

} // namespace relmark
