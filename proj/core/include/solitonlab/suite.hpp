#pragma once

// Evaluates every applicable identity of a scenario over its plan points.

#include <optional>
#include <string>
#include <vector>

#include "solitonlab/scenario.hpp"

namespace solitonlab {

/// One identity at one point. Informational identities (asserted = false)
/// never affect the verdict.
struct IdentityResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool asserted = true;
  bool passed() const { return residual <= tolerance; }
};

struct DerivedValue {
  std::string name;
  double value = 0.0;
};

struct PointReport {
  std::size_t index = 0;
  Point at;
  std::optional<std::string> error;  // the point could not be evaluated
  std::vector<IdentityResult> identities;
  std::vector<DerivedValue> derived;
};

/// A derived constant across all evaluated points.
struct DerivedSummary {
  std::string name;
  double mean = 0.0;
  double spread = 0.0;  // max − min
  std::size_t samples = 0;
};

struct NumericsHealth {
  double ricci_asymmetry = 0.0;                // max over points
  std::optional<double> convergence_ratio;     // Christoffel error ratio at the first point
};

enum class Verdict { pass, fail, error };
std::string_view verdict_name(Verdict v) noexcept;

enum class SuiteMode {
  analyze,  // identities, fluid, soliton solves and classification
  verify,   // identities only
};

struct IdentityReport {
  int schema_version = 1;
  std::string scenario_name;
  std::string scenario_echo;  // canonical JSON of the scenario sources
  SuiteMode mode = SuiteMode::analyze;
  double tolerance = 1e-5;
  std::vector<PointReport> points;
  std::vector<DerivedSummary> derived;
  std::optional<ClassificationResult> classification;
  std::optional<CKVAnalysis> conformal_killing;
  std::optional<EinsteinFit> einstein;
  NumericsHealth health;
  std::vector<std::string> applicability;  // notes on informational identities
  std::vector<std::string> warnings;
  Verdict verdict = Verdict::pass;
};

/// Points are evaluated concurrently; the report is assembled in plan order
/// and does not depend on thread scheduling.
IdentityReport run_suite(const Scenario& s, SuiteMode mode = SuiteMode::analyze);

/// 0 pass, 1 asserted identity failure, 2 every point failed to evaluate.
int exit_code(const IdentityReport& r) noexcept;

}  // namespace solitonlab
