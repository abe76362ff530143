#pragma once

// Report emission. JSON schema: docs/schema/report.schema.json

#include <optional>
#include <string>
#include <vector>

#include "solitonlab/suite.hpp"

namespace solitonlab {

inline constexpr int report_schema_version = 1;

enum class ReportFormat { json, text };

struct ReportOptions {
  /// Written as "timestamp" when set; leave empty for byte-stable output.
  std::optional<std::string> timestamp;
};

std::string emit_report(const IdentityReport& r, ReportFormat format, const ReportOptions& opts = {});

/// JSON array of reports, one per swept value.
std::string emit_sweep(const std::string& parameter, const std::vector<double>& values,
                       const std::vector<IdentityReport>& reports, ReportFormat format,
                       const ReportOptions& opts = {});

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace solitonlab
