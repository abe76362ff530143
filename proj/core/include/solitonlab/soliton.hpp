#pragma once

// Soliton equations, projections, closed forms and classification on
// perfect fluid spacetimes.
//
// Λ and μ are always obtained from projections of sampled tensors; the closed
// forms are kept as independent oracles for them.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "solitonlab/geometry.hpp"
#include "solitonlab/spacetime.hpp"

namespace solitonlab {

enum class SolitonFamily {
  ricci,                       // £g + 2S + 2Λg = 0
  conformal_ricci,             // £g + 2S + [2Λ − (p + 2/n)]g = 0
  conformal_eta_ricci,         // ... + 2μ η⊗η = 0
  yamabe,                      // ½£g − (r − Λ)g = 0
  ricci_yamabe,                // £g + 2αS − [2Λ − βr]g = 0
  gradient_ricci_yamabe,       // Hess f + αS − [Λ − ½βr]g = 0
  conformal_ricci_yamabe,      // £g + 2αS + [2Λ − βr − (p + 2/n)]g = 0
  conformal_eta_ricci_yamabe,  // ... + 2μ η⊗η = 0
};

std::string_view family_name(SolitonFamily f) noexcept;
std::optional<SolitonFamily> parse_family(std::string_view name) noexcept;
bool is_eta_family(SolitonFamily f) noexcept;
bool has_conformal_term(SolitonFamily f) noexcept;

/// `Lambda` is the soliton constant Λ; `mu` the η⊗η coefficient. `p` is the
/// scalar field of the conformal term, constant or a function of t.
struct SolitonParams {
  SolitonFamily family = SolitonFamily::conformal_ricci_yamabe;
  double alpha = 1.0;
  double beta = 0.0;
  std::optional<double> Lambda;
  std::optional<double> mu;
  FluidValue p = -0.5;
  int dimension = 4;
};

// -- torse-forming fields -------------------------------------------------------

/// max over coordinate directions X of max-abs(∇_X ξ − X − η(X) ξ).
double torse_forming_residual(const MetricSpec& m, const VectorField& xi, const Point& p,
                              const NumericsConfig& cfg = {});

/// Consequences of the torse-forming condition, each a max-abs residual over
/// the coordinate basis.
struct TorseConsequences {
  double geodesic = 0.0;        // ∇_ξ ξ = 0
  double eta_derivative = 0.0;  // (∇_X η)(Y) = g(X,Y) + η(X)η(Y)
  double curvature_xi = 0.0;    // R(X,Y)ξ = η(Y)X − η(X)Y
  double eta_curvature = 0.0;   // η(R(X,Y)Z) = η(X)g(Y,Z) − η(Y)g(X,Z)
  double norm_defect = 0.0;     // g(ξ,ξ) + 1
  bool unit_timelike = false;   // |norm_defect| ≤ 1e-6
};
TorseConsequences torse_consequence_residuals(const MetricSpec& m, const VectorField& xi,
                                              const Point& p, const NumericsConfig& cfg = {});

/// max-abs(£_ξ g − 2(g + η⊗η)).
double torse_lie_residual(const MetricSpec& m, const VectorField& xi, const Point& p,
                          const NumericsConfig& cfg = {});

// -- soliton equations -----------------------------------------------------------

/// Tensors entering a soliton equation at one point. `eta` is the lowered
/// potential field, used only by the η-families.
struct SolitonTerms {
  Matrix g;
  Matrix lie;  // £_V g
  Matrix ricci;
  double scalar = 0.0;
  Vector eta;
};

SolitonTerms soliton_terms(const MetricSpec& m, const VectorField& v, const Point& p,
                           const NumericsConfig& cfg = {});

/// Left-hand side of the family's defining equation. Throws
/// PreconditionError when Λ (or μ for an η-family) is missing, or for the
/// gradient family (use gradient_soliton_residual).
Matrix soliton_residual(const SolitonTerms& terms, const SolitonParams& params, double p_value);
Matrix soliton_residual(const MetricSpec& m, const VectorField& v, const SolitonParams& params,
                        const Point& p, const NumericsConfig& cfg = {});

/// Hess f + αS − [Λ − ½βr]g.
Matrix gradient_soliton_residual(const MetricSpec& m, const Expr& f, const SolitonParams& params,
                                 const Point& p, const NumericsConfig& cfg = {});

// -- Λ from the ξξ projection --------------------------------------------------------

/// Sampled inputs for the projection solves; ξ is unit timelike.
struct ProjectionSample {
  Matrix g;
  Matrix g_inv;
  Matrix ricci;
  Matrix lie;  // £_ξ g
  double scalar = 0.0;
  Vector xi;
  double div_xi = 0.0;         // trace of ∇ξ
  double div_xi_from_lie = 0.0;  // ½ g^ij (£_ξ g)_ij
};

ProjectionSample projection_sample(const MetricSpec& m, const VectorField& xi, const Point& p,
                                   const NumericsConfig& cfg = {});

/// Perfect-fluid sample: Ricci from the fluid form, £_ξ g = 2(g + η⊗η) and
/// r = 4λ + κ(σ − 3ρ). ξ must be unit timelike for g.
ProjectionSample synthetic_sample(const FluidConstants& fluid, const Matrix& g, const Vector& xi);

/// Λ zeroing the ξξ component of the conformal Ricci-Yamabe tensor (n = 4).
double lambda_from_projection(const ProjectionSample& s, double alpha, double beta, double p);
double lambda_from_projection(const MetricSpec& m, const VectorField& xi, const SolitonParams& params,
                              const Point& p, const NumericsConfig& cfg = {});

/// κ/2 [(α+β)σ + 3(α−β)ρ] + (2β−α)λ + ½(p + ½).
double lambda_closed_form(const FluidConstants& fluid, double alpha, double beta, double p);

/// lambda_closed_form(...) − Λ: the conformal factor when V is conformal Killing.
double phi_closed_form(const FluidConstants& fluid, double alpha, double beta, double p,
                       double Lambda);

// -- classification ------------------------------------------------------------------

enum class SolitonClass { expanding, steady, shrinking };

/// Two sign conventions appear in the literature for the same equations.
enum class SignConvention {
  positive_expanding,  // Λ > 0 expanding (default; used for the conformal families)
  positive_shrinking,  // Λ > 0 shrinking
};

std::string_view class_name(SolitonClass c) noexcept;
std::string_view convention_name(SignConvention c) noexcept;
std::optional<SignConvention> parse_convention(std::string_view name) noexcept;

struct ClassificationResult {
  double Lambda = 0.0;
  SolitonClass kind = SolitonClass::steady;
  SignConvention convention = SignConvention::positive_expanding;
  double tolerance = 1e-9;
};

ClassificationResult classify(double Lambda,
                              SignConvention convention = SignConvention::positive_expanding,
                              double tolerance = 1e-9);

// -- conformal Killing and Einstein fits ------------------------------------------------

enum class CkvCategory { proper, homothetic, killing, not_ckv };
std::string_view ckv_name(CkvCategory c) noexcept;

struct CKVAnalysis {
  std::vector<double> phi;  // Φ per point
  double residual = 0.0;    // max over points of max-abs(£_V g − 2Φg)
  CkvCategory category = CkvCategory::not_ckv;
  double tolerance = 1e-6;
};

/// Φ = tr(g⁻¹ £_V g) / 2n at each point, then categorized. Needs ≥ 2 points.
CKVAnalysis ckv_fit(const MetricSpec& m, const VectorField& v, std::span<const Point> points,
                    const NumericsConfig& cfg = {}, double tolerance = 1e-6);

struct EinsteinFit {
  std::vector<double> theta;  // θ = tr(g⁻¹S)/n per point
  double residual = 0.0;      // max-abs(S − θg)
};

EinsteinFit einstein_fit(std::span<const Matrix> ricci, std::span<const Matrix> metric);
EinsteinFit einstein_fit(const MetricSpec& m, std::span<const Point> points,
                         const NumericsConfig& cfg = {});

/// Conformal factor Ψ = −[Λ + αθ − βr/2 − ½(p + ½)] of V on an Einstein
/// spacetime S = θg solving the conformal Ricci-Yamabe equation.
double einstein_conformal_factor(double Lambda, double alpha, double beta, double theta, double r,
                                 double p);

// -- the metric dual one-form ----------------------------------------------------------

/// ω_i = g_ij V^j, (dω)_ij = ½(∂_i ω_j − ∂_j ω_i), F from (dω)(X,Y) = g(X,FY).
struct TwoFormPack {
  Vector omega;
  Matrix d_omega;
  Matrix f;                // F^k_j stored as (k, j)
  double skewness = 0.0;   // max |g(X,FY) + g(FX,Y)| over the coordinate basis
};

TwoFormPack two_form_pack(const MetricSpec& m, const VectorField& v, const Point& p,
                          const NumericsConfig& cfg = {});

/// max-abs of g(∇_X V, Y) − ½(£_V g)(X,Y) + g(FX, Y); holds for every V.
double nabla_decomposition_check(const MetricSpec& m, const VectorField& v, const Point& p,
                                 const NumericsConfig& cfg = {});

/// max over X of |∇_X|V|² + 2g(FX,V) − (£_V g)(X,V)|; holds for every V.
double norm_gradient_residual(const MetricSpec& m, const VectorField& v, const Point& p,
                              const NumericsConfig& cfg = {});

/// Identities satisfied by the soliton potential V and its dual form when V
/// solves the conformal Ricci-Yamabe equation on a perfect fluid with
/// torse-forming velocity ξ.
struct DualFormIdentities {
  double divergence = 0.0;  // (div F)Y = −κ(σ+ρ)[3α + η(V)]η(Y) − [λ + κ(σ−ρ)/2]ω(Y)
  double norm_gradient = 0.0;  // ∇_X|V|² + 2g(FX,V) − (£_V g)(X,V) = 0
  double curvature = 0.0;  // R(X,Y)V = (∇_Y F)X − (∇_X F)Y + ακ(σ+ρ)[η(X)Y − η(Y)X]
  double soliton_residual = 0.0;  // max-abs of the soliton equation at Λ
  bool applicable = false;        // soliton_residual ≤ tolerance
};

DualFormIdentities dual_form_identities(const MetricSpec& m, const VectorField& v,
                                        const VectorField& xi, const FluidState& fluid,
                                        const SolitonParams& params, const Point& p,
                                        const NumericsConfig& cfg = {}, double tolerance = 1e-5);

// -- η-solitons --------------------------------------------------------------------------

struct EtaSolitonSolve {
  double Lambda = 0.0;
  double mu = 0.0;
  double div_xi = 0.0;
  Eigen::Matrix2d coefficients;  // rows: frame trace, ξξ component; columns: Λ, μ
  Eigen::Vector2d rhs;
  double residual = 0.0;  // max |coefficients·(Λ,μ) − rhs|
};

/// Builds the ε-weighted frame trace and the ξξ component of ½ × the
/// conformal η-Ricci-Yamabe tensor from the sample and solves for (Λ, μ).
EtaSolitonSolve eta_projection_solve(const ProjectionSample& s, double alpha, double beta,
                                     double p);
EtaSolitonSolve eta_projection_solve(const MetricSpec& m, const VectorField& xi, double alpha,
                                     double beta, double p, const Point& at,
                                     const NumericsConfig& cfg = {});

struct EtaConstants {
  double Lambda = 0.0;
  double mu = 0.0;
};

/// Closed forms for (Λ, μ) in terms of the fluid, α, β, p and div ξ:
///   Λ = (2β−α)λ + κ/2 [(β−α)σ + (α−3β)ρ] + ½(p + ½) − div ξ/3
///   μ = −κα(σ + ρ) − div ξ/3
EtaConstants eta_closed_forms(const FluidConstants& fluid, double alpha, double beta, double p,
                              double div_xi);

/// Residuals of the trace and ξξ relations
///   4Λ − μ = 4(2β−α)λ + κ(2β−α)(σ−3ρ) + 2(p + ½) − div ξ
///   Λ − μ  = (2β−α)λ + κ/2 [(α+β)σ + 3(α−β)ρ] + ½(p + ½)
/// evaluated at (Λ, μ). Returns max of the two absolute residuals.
double eta_relations_residual(const EtaConstants& c, const FluidConstants& fluid, double alpha,
                              double beta, double p, double div_xi);

struct LaplacianIdentity {
  double laplacian = 0.0;
  double laplacian_via_hessian = 0.0;
  double rhs = 0.0;       // −3[μ + κα(σ + ρ)]
  double residual = 0.0;  // laplacian − rhs
};

/// Requires |g(grad f, grad f) + 1| ≤ 1e-6 (PreconditionError otherwise).
/// β drops out of the right-hand side; it is accepted for symmetry with the
/// other η calls.
LaplacianIdentity laplacian_identity_check(const MetricSpec& m, const Expr& f,
                                           const FluidConstants& fluid, double alpha, double beta,
                                           double mu, const Point& p,
                                           const NumericsConfig& cfg = {});

}  // namespace solitonlab
