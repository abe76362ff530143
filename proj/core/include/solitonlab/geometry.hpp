#pragma once

// Pointwise pseudo-Riemannian tensor calculus on a single coordinate chart.
//
// Conventions (see docs/conventions.md):
//   Γ^k_ij       = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
//   R(X,Y)Z      = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z,   R(∂_i,∂_j)∂_k = R^l_kij ∂_l
//   R^l_kij      = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik
//   S_jk         = R^i_kij   (trace of X ↦ R(X,Y)Z)
// With these choices de Sitter space has R(X,Y)Z = g(Y,Z)X − g(X,Z)Y and S = 3g.
//
// All derivatives are central finite differences of step h, optionally with
// one Richardson level. Derivatives of Γ difference the assembled Γ.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "solitonlab/expr.hpp"

namespace solitonlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

struct NumericsConfig {
  double h = 1e-3;
  bool richardson = true;
  double singular_threshold = 1e-12;
};

enum class SignatureTag { lorentzian, riemannian, unspecified };

/// Metric components g_ij as expressions over the coordinates. Stored as the
/// upper triangle, so symmetry holds by construction.
class MetricSpec {
 public:
  /// `grid` must be n×n and structurally symmetric.
  MetricSpec(CoordinateNames coords, const std::vector<std::vector<Expr>>& grid,
             SignatureTag signature = SignatureTag::lorentzian);

  static MetricSpec diagonal(CoordinateNames coords, const std::vector<Expr>& diag,
                             SignatureTag signature = SignatureTag::lorentzian);

  int dimension() const noexcept { return n_; }
  const CoordinateNames& coordinates() const noexcept { return *coords_; }
  const std::shared_ptr<const CoordinateNames>& coordinates_ptr() const noexcept {
    return coords_;
  }
  const Expr& component(int i, int j) const;
  SignatureTag signature() const noexcept { return signature_; }

 private:
  MetricSpec() = default;
  std::size_t slot(int i, int j) const;

  int n_ = 0;
  std::shared_ptr<const CoordinateNames> coords_;
  std::vector<Expr> upper_;
  SignatureTag signature_ = SignatureTag::lorentzian;
};

/// Dense rank-3 array, indexed (a, b, c).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}

  int dim() const noexcept { return n_; }
  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }
  double max_abs() const noexcept;

  Tensor3& operator+=(const Tensor3& o);
  Tensor3& operator-=(const Tensor3& o);
  Tensor3& operator*=(double s);
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
  friend Tensor3 operator/(Tensor3 a, double s) { return a *= 1.0 / s; }

 private:
  std::size_t index(int a, int b, int c) const {
    return static_cast<std::size_t>((a * n_ + b) * n_ + c);
  }
  int n_ = 0;
  std::vector<double> data_;
};

/// Dense rank-4 array, indexed (a, b, c, d).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {}

  int dim() const noexcept { return n_; }
  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
  double max_abs() const noexcept;

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d);
  }
  int n_ = 0;
  std::vector<double> data_;
};

/// Γ^k_ij stored as (k, i, j); symmetric in (i, j).
struct Christoffel {
  Tensor3 gamma;
  Point at;
};

/// R^l_kij stored as (l, k, i, j).
struct Riemann {
  Tensor4 r;
  Point at;
};

/// Contravariant vector field: explicit components or grad f.
class VectorField {
 public:
  static VectorField from_components(std::vector<Expr> components);
  static VectorField gradient_of(Expr potential);

  bool is_gradient() const noexcept { return gradient_; }
  const Expr& potential() const { return potential_; }
  const std::vector<Expr>& components() const noexcept { return components_; }

  Vector at(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) const;

 private:
  bool gradient_ = false;
  Expr potential_;
  std::vector<Expr> components_;
};

/// Orthonormal frame at a point: column i of `vectors` is e_i, g(e_i,e_j) = ε_i δ_ij.
struct FramePack {
  Matrix vectors;
  std::vector<int> signs;
};

/// Everything curvature-related at one point, computed once.
struct CurvatureSample {
  Point at;
  Matrix g;
  Matrix g_inv;
  Christoffel christoffel;
  Riemann riemann;
  Matrix ricci;              // symmetrized
  double ricci_asymmetry = 0.0;  // max |S_ij − S_ji| before symmetrization
  double scalar = 0.0;
  Matrix einstein;
};

// -- metric ------------------------------------------------------------------

/// Throws DomainError from the component expressions and SingularMetricError
/// when |det g| < cfg.singular_threshold.
Matrix metric_at(const MetricSpec& m, const Point& p, const NumericsConfig& cfg = {});
Matrix inverse_metric(const MetricSpec& m, const Point& p, const NumericsConfig& cfg = {});

/// ∂_l g_ij stored as (l, i, j).
Tensor3 metric_derivatives(const MetricSpec& m, const Point& p, const NumericsConfig& cfg);

// -- connection and curvature -------------------------------------------------

Christoffel christoffel(const MetricSpec& m, const Point& p, const NumericsConfig& cfg = {});

/// Christoffel symbols from symbolically differentiated metric components.
Christoffel christoffel_exact(const MetricSpec& m, const Point& p);

Riemann riemann(const MetricSpec& m, const Point& p, const NumericsConfig& cfg = {});
CurvatureSample curvature(const MetricSpec& m, const Point& p, const NumericsConfig& cfg = {});

struct RicciSample {
  Matrix s;
  double asymmetry = 0.0;
};
RicciSample ricci(const MetricSpec& m, const Point& p, const NumericsConfig& cfg = {});
double scalar_curvature(const MetricSpec& m, const Point& p, const NumericsConfig& cfg = {});
Matrix einstein_tensor(const MetricSpec& m, const Point& p, const NumericsConfig& cfg = {});

/// Ricci contraction of an assembled Riemann tensor; returns the raw
/// (unsymmetrized) S_jk = R^i_kij.
Matrix contract_ricci(const Tensor4& r);

// -- derivative operators -----------------------------------------------------

/// (∇_j V)^k stored as M(k, j).
Matrix cov_deriv_vector(const MetricSpec& m, const VectorField& v, const Point& p,
                        const NumericsConfig& cfg = {});

/// (£_V g)_ij = g_ik (∇_j V)^k + g_jk (∇_i V)^k.
Matrix lie_derivative_metric(const MetricSpec& m, const VectorField& v, const Point& p,
                             const NumericsConfig& cfg = {});

Vector scalar_differential(const MetricSpec& m, const Expr& f, const Point& p,
                           const NumericsConfig& cfg = {});
Vector gradient_scalar(const MetricSpec& m, const Expr& f, const Point& p,
                       const NumericsConfig& cfg = {});
Matrix hessian_scalar(const MetricSpec& m, const Expr& f, const Point& p,
                      const NumericsConfig& cfg = {});
double divergence_vector(const MetricSpec& m, const VectorField& v, const Point& p,
                         const NumericsConfig& cfg = {});

struct LaplacianSample {
  double value = 0.0;          // div(grad f)
  double via_hessian = 0.0;    // g^ij (Hess f)_ij
  double route_gap() const { return value - via_hessian; }
};
LaplacianSample laplacian_scalar(const MetricSpec& m, const Expr& f, const Point& p,
                                 const NumericsConfig& cfg = {});

using Tensor11Field = std::function<Matrix(const Point&)>;

/// (div F)_j = (∇_k F)^k_j for a (1,1) field given as F(P)(k, j) = F^k_j.
Vector div_tensor11(const MetricSpec& m, const Tensor11Field& f, const Point& p,
                    const NumericsConfig& cfg = {});

/// (∇_m F)^k_j stored as (m, k, j).
Tensor3 cov_deriv_tensor11(const MetricSpec& m, const Tensor11Field& f, const Point& p,
                           const NumericsConfig& cfg = {});

// -- frames ------------------------------------------------------------------

/// Gram-Schmidt over the coordinate basis (hint first when given). Throws
/// SignatureError unless g has exactly one negative direction.
FramePack orthonormal_frame(const Matrix& g, const std::optional<Vector>& timelike_hint = {});
FramePack orthonormal_frame(const MetricSpec& m, const Point& p,
                            const std::optional<Vector>& timelike_hint = {},
                            const NumericsConfig& cfg = {});

/// S(X,Y) = Σ ε_i g(R(e_i,X)Y, e_i).
double ricci_via_frame(const Tensor4& r, const Matrix& g, const FramePack& frame,
                       const Vector& x, const Vector& y);

// -- health checks --------------------------------------------------------------

/// max |∇_m g_ij| using the numerical Γ.
double metric_compatibility_residual(const MetricSpec& m, const Point& p,
                                     const NumericsConfig& cfg = {});

/// max |R^l_kij + R^l_kji|.
double riemann_antisymmetry_residual(const Tensor4& r);

/// max over l,k,i,j of |R_lkij + R_lijk + R_ljki| with the first index lowered.
double first_bianchi_residual(const Tensor4& r, const Matrix& g);

/// (div G)_i = g^mj ∇_m G_ij.
Vector einstein_divergence(const MetricSpec& m, const Point& p, const NumericsConfig& cfg = {});

/// err(h) / err(h/2) of plain central-difference Γ against christoffel_exact.
/// Empty when both errors are at round-off level (e.g. flat metrics).
std::optional<double> christoffel_convergence_ratio(const MetricSpec& m, const Point& p,
                                                    double h);

}  // namespace solitonlab
