#pragma once

// Test spacetimes and perfect-fluid algebra.

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "solitonlab/geometry.hpp"

namespace solitonlab {

/// Coordinate names used by every catalog metric.
const CoordinateNames& spacetime_coordinates();

struct Minkowski {};
struct DeSitter {
  double hubble = 1.0;
};
/// −dt² + q(t)² (dx² + dy² + dz²); `scale_factor` is an expression in t.
struct FlatGrw {
  std::string scale_factor;
};
using CatalogEntry = std::variant<Minkowski, DeSitter, FlatGrw>;

struct CatalogInfo {
  std::string name;
  std::string parameters;
  std::string description;
};
std::vector<CatalogInfo> catalog_listing();

MetricSpec catalog_metric(const CatalogEntry& entry);

/// A fluid quantity: a constant or an expression of t alone.
class FluidValue {
 public:
  FluidValue(double v = 0.0) : constant_(v) {}  // NOLINT: implicit from double
  explicit FluidValue(Expr e);

  bool is_constant() const noexcept { return !expr_; }
  double at(const Point& p) const;
  const std::optional<Expr>& expression() const noexcept { return expr_; }
  double constant_value() const noexcept { return constant_; }

 private:
  double constant_ = 0.0;
  std::optional<Expr> expr_;
};

/// σ energy density, ρ isotropic pressure, κ gravitational constant (> 0),
/// λ cosmological constant.
struct FluidState {
  FluidValue sigma;
  FluidValue rho;
  double kappa = 1.0;
  FluidValue lambda;
};

/// A fluid state with every quantity evaluated at one point.
struct FluidConstants {
  double sigma = 0.0;
  double rho = 0.0;
  double kappa = 1.0;
  double lambda = 0.0;
};

FluidConstants fluid_at(const FluidState& fluid, const Point& p);

/// Radiation fluid σ = 3ρ.
FluidConstants radiation_fluid(double rho, double kappa, double lambda);

/// Best fit of a Ricci sample to A g + B η⊗η.
struct FluidFormFit {
  FluidConstants state;
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  // max |S − A g − B η⊗η|
  double spread = 0.0;    // max − min of the spatial frame values S(e,e)
  bool perfect_fluid = false;
};

struct EigenCheckResult {
  std::array<double, 4> eigenvalues{};  // ascending
  std::array<double, 4> expected{};     // ascending: {−κσ, κρ, κρ, κρ} sorted
  double max_deviation = 0.0;
  double max_imaginary = 0.0;
  double efe_residual = 0.0;
  bool applicable = false;
};

/// g(ξ,ξ) from a lowered η and the inverse metric.
double unit_norm_defect(const Matrix& g_inv, const Vector& eta);

/// T_ij = ρ g_ij + (σ+ρ) η_i η_j. Throws PreconditionError unless
/// |g(ξ,ξ) + 1| ≤ 1e-6.
Matrix energy_momentum(const FluidConstants& fluid, const Matrix& g, const Vector& eta);

/// S_ij + (λ − r/2) g_ij − κ T_ij.
Matrix efe_residual(const MetricSpec& m, const FluidState& fluid, const VectorField& xi,
                    const Point& p, const NumericsConfig& cfg = {});
Matrix efe_residual(const CurvatureSample& c, const FluidConstants& fluid, const Vector& xi);

/// [λ + κ(σ−ρ)/2] g + κ(σ+ρ) η⊗η.
Matrix ricci_from_fluid(const FluidConstants& fluid, const Matrix& g, const Vector& eta);

/// Inverts the perfect-fluid Ricci form for (σ, ρ) given κ and λ.
FluidFormFit fluid_from_ricci(const Matrix& s, const Matrix& g, const Vector& xi, double kappa,
                              double lambda, double tolerance = 1e-5);

/// r − [4λ + κ(σ − 3ρ)].
double scalar_curvature_identity(const MetricSpec& m, const FluidState& fluid, const Point& p,
                                 const NumericsConfig& cfg = {});
double scalar_curvature_identity(double r, const FluidConstants& fluid);

/// (QX)^i = g^ik S_kj X^j.
Vector ricci_operator(const Matrix& s, const Matrix& g_inv, const Vector& x);

/// Eigenvalues of the mixed tensor (S − (r/2) g + λ g)^i_j against {−κσ, κρ, κρ, κρ}.
EigenCheckResult einstein_eigen_check(const MetricSpec& m, const FluidState& fluid,
                                      const VectorField& xi, const Point& p,
                                      const NumericsConfig& cfg = {},
                                      double efe_tolerance = 1e-5);
EigenCheckResult einstein_eigen_check(const CurvatureSample& c, const FluidConstants& fluid,
                                      const Vector& xi, double efe_tolerance = 1e-5);

}  // namespace solitonlab
