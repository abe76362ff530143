#pragma once

// Scenario files: JSON documents describing a metric, fields, a fluid, soliton
// parameters and an evaluation plan. Schema: docs/schema/scenario.schema.json

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "solitonlab/geometry.hpp"
#include "solitonlab/soliton.hpp"
#include "solitonlab/spacetime.hpp"

namespace solitonlab {

inline constexpr int scenario_schema_version = 1;

/// A number or an expression string, kept as written for the echo.
using ScalarSource = std::variant<double, std::string>;

struct MetricSource {
  std::string catalog;                              // empty for explicit components
  std::optional<double> hubble;                     // de_sitter
  std::optional<std::string> scale_factor;          // grw_flat
  std::vector<std::vector<std::string>> components; // explicit grid
};

struct FieldSource {
  std::vector<std::string> components;
  std::optional<std::string> gradient;
};

struct FluidSource {
  double kappa = 1.0;
  ScalarSource lambda = 0.0;
  bool fit_from_ricci = false;
  ScalarSource sigma = 0.0;
  ScalarSource rho = 0.0;
};

struct SolitonSource {
  SolitonFamily family = SolitonFamily::conformal_ricci_yamabe;
  double alpha = 1.0;
  double beta = 0.0;
  ScalarSource p = -0.5;
  std::optional<double> Lambda;
  std::optional<double> mu;
  SignConvention convention = SignConvention::positive_expanding;
};

struct GridAxis {
  std::string coordinate;
  double from = 0.0;
  double to = 0.0;
  int count = 1;
};

struct PlanSource {
  std::vector<std::vector<double>> points;
  std::vector<GridAxis> grid;
};

struct Scenario {
  std::string name;
  CoordinateNames coordinates;

  MetricSource metric_source;
  FieldSource xi_source;
  std::optional<FieldSource> v_source;  // absent: V = ξ
  std::optional<FluidSource> fluid_source;
  std::optional<SolitonSource> soliton_source;
  PlanSource plan_source;
  NumericsConfig numerics;
  double tolerance = 1e-5;
  bool tolerance_from_file = false;
  std::vector<std::string> expect;

  // built from the sources
  MetricSpec metric = catalog_metric(Minkowski{});
  VectorField xi;
  VectorField v;
  std::optional<FluidState> fluid;  // empty when absent or fitted
  std::optional<SolitonParams> soliton;
  std::vector<Point> points;        // explicit points first, then the grid (first axis outermost)
  std::vector<std::string> warnings;

  bool expects(std::string_view what) const;
};

/// Throws Error on I/O failure, SchemaError (with a JSON pointer) on schema
/// violations and ScenarioExpressionError for malformed expressions.
Scenario load_scenario(const std::filesystem::path& path);
Scenario load_scenario_text(const std::string& json_text);

/// Canonical JSON for the scenario sources; load_scenario_text of it rebuilds
/// an equal scenario. Compact, keys in schema order.
std::string scenario_echo(const Scenario& s);

/// Returns a copy with one parameter replaced, then revalidated. Names:
/// alpha, beta, p, Lambda, mu, kappa, lambda, sigma, rho, H, h, tolerance.
Scenario with_parameter(const Scenario& s, const std::string& name, double value);

/// Default identity tolerance: SOLITONLAB_TOL when set and valid, else 1e-5.
double default_tolerance();

}  // namespace solitonlab
