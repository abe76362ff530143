#include "solitonlab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finite_difference.hpp"
#include "solitonlab/error.hpp"

namespace solitonlab {

using detail::partial;

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

double frame_trace(const FramePack& frame, const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < frame.vectors.cols(); ++i) {
    const Vector e = frame.vectors.col(i);
    s += frame.signs[static_cast<std::size_t>(i)] * e.dot(a * e);
  }
  return s;
}

}  // namespace

// -- families ---------------------------------------------------------------------

std::string_view family_name(SolitonFamily f) noexcept {
  switch (f) {
    case SolitonFamily::ricci: return "ricci";
    case SolitonFamily::conformal_ricci: return "conformal_ricci";
    case SolitonFamily::conformal_eta_ricci: return "conformal_eta_ricci";
    case SolitonFamily::yamabe: return "yamabe";
    case SolitonFamily::ricci_yamabe: return "ricci_yamabe";
    case SolitonFamily::gradient_ricci_yamabe: return "gradient_ricci_yamabe";
    case SolitonFamily::conformal_ricci_yamabe: return "conformal_ricci_yamabe";
    case SolitonFamily::conformal_eta_ricci_yamabe: return "conformal_eta_ricci_yamabe";
  }
  return "?";
}

std::optional<SolitonFamily> parse_family(std::string_view name) noexcept {
  for (auto f : {SolitonFamily::ricci, SolitonFamily::conformal_ricci,
                 SolitonFamily::conformal_eta_ricci, SolitonFamily::yamabe,
                 SolitonFamily::ricci_yamabe, SolitonFamily::gradient_ricci_yamabe,
                 SolitonFamily::conformal_ricci_yamabe, SolitonFamily::conformal_eta_ricci_yamabe})
    if (family_name(f) == name) return f;
  return std::nullopt;
}

bool is_eta_family(SolitonFamily f) noexcept {
  return f == SolitonFamily::conformal_eta_ricci || f == SolitonFamily::conformal_eta_ricci_yamabe;
}

bool has_conformal_term(SolitonFamily f) noexcept {
  return f == SolitonFamily::conformal_ricci || f == SolitonFamily::conformal_eta_ricci ||
         f == SolitonFamily::conformal_ricci_yamabe ||
         f == SolitonFamily::conformal_eta_ricci_yamabe;
}

// -- torse-forming ---------------------------------------------------------------------

double torse_forming_residual(const MetricSpec& m, const VectorField& xi, const Point& p,
                              const NumericsConfig& cfg) {
  const int n = m.dimension();
  const Matrix g = metric_at(m, p, cfg);
  const Matrix nabla = cov_deriv_vector(m, xi, p, cfg);
  const Vector x = xi.at(m, p, cfg);
  const Vector eta = g * x;
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    Vector d = nabla.col(j) - eta[j] * x;
    d[j] -= 1.0;
    worst = std::max(worst, max_abs(d));
  }
  return worst;
}

TorseConsequences torse_consequence_residuals(const MetricSpec& m, const VectorField& xi,
                                              const Point& p, const NumericsConfig& cfg) {
  const int n = m.dimension();
  const CurvatureSample c = curvature(m, p, cfg);
  const Matrix nabla = cov_deriv_vector(m, xi, p, cfg);
  const Vector x = xi.at(m, p, cfg);
  const Vector eta = c.g * x;

  TorseConsequences out;
  out.norm_defect = x.dot(eta) + 1.0;
  out.unit_timelike = std::abs(out.norm_defect) <= 1e-6;
  out.geodesic = max_abs(Vector(nabla * x));

  // (∇_i η)_j = g_jk (∇_i ξ)^k
  const Matrix nabla_eta = (c.g * nabla).transpose();
  out.eta_derivative = max_abs(Matrix(nabla_eta - c.g - eta * eta.transpose()));

  const Tensor4& r = c.riemann.r;
  double curv = 0.0;
  double eta_curv = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        double rx = 0.0;
        for (int k = 0; k < n; ++k) rx += r(l, k, i, j) * x[k];
        const double expected = (l == i ? eta[j] : 0.0) - (l == j ? eta[i] : 0.0);
        curv = std::max(curv, std::abs(rx - expected));
      }
      for (int k = 0; k < n; ++k) {
        double er = 0.0;
        for (int l = 0; l < n; ++l) er += eta[l] * r(l, k, i, j);
        const double expected = eta[i] * c.g(j, k) - eta[j] * c.g(i, k);
        eta_curv = std::max(eta_curv, std::abs(er - expected));
      }
    }
  }
  out.curvature_xi = curv;
  out.eta_curvature = eta_curv;
  return out;
}

double torse_lie_residual(const MetricSpec& m, const VectorField& xi, const Point& p,
                          const NumericsConfig& cfg) {
  const Matrix g = metric_at(m, p, cfg);
  const Vector eta = g * xi.at(m, p, cfg);
  return max_abs(Matrix(lie_derivative_metric(m, xi, p, cfg) - 2.0 * (g + eta * eta.transpose())));
}

// -- soliton equations ---------------------------------------------------------------

SolitonTerms soliton_terms(const MetricSpec& m, const VectorField& v, const Point& p,
                           const NumericsConfig& cfg) {
  const CurvatureSample c = curvature(m, p, cfg);
  SolitonTerms t;
  t.g = c.g;
  t.lie = lie_derivative_metric(m, v, p, cfg);
  t.ricci = c.ricci;
  t.scalar = c.scalar;
  t.eta = c.g * v.at(m, p, cfg);
  return t;
}

Matrix soliton_residual(const SolitonTerms& t, const SolitonParams& params, double p_value) {
  if (!params.Lambda) throw PreconditionError("soliton constant Lambda is required");
  if (is_eta_family(params.family) && !params.mu)
    throw PreconditionError("eta-soliton families require mu");
  if (has_conformal_term(params.family) && params.dimension != 4)
    throw PreconditionError("conformal soliton families are defined for n = 4");

  const double lam = *params.Lambda;
  const double a = params.alpha;
  const double b = params.beta;
  const double conformal = p_value + 2.0 / params.dimension;
  const Matrix eta_eta = t.eta * t.eta.transpose();

  switch (params.family) {
    case SolitonFamily::ricci:
      return t.lie + 2.0 * t.ricci + 2.0 * lam * t.g;
    case SolitonFamily::conformal_ricci:
      return t.lie + 2.0 * t.ricci + (2.0 * lam - conformal) * t.g;
    case SolitonFamily::conformal_eta_ricci:
      return t.lie + 2.0 * t.ricci + (2.0 * lam - conformal) * t.g + 2.0 * *params.mu * eta_eta;
    case SolitonFamily::yamabe:
      return 0.5 * t.lie - (t.scalar - lam) * t.g;
    case SolitonFamily::ricci_yamabe:
      return t.lie + 2.0 * a * t.ricci - (2.0 * lam - b * t.scalar) * t.g;
    case SolitonFamily::gradient_ricci_yamabe:
      throw PreconditionError("gradient Ricci-Yamabe solitons are evaluated from the potential");
    case SolitonFamily::conformal_ricci_yamabe:
      return t.lie + 2.0 * a * t.ricci + (2.0 * lam - b * t.scalar - conformal) * t.g;
    case SolitonFamily::conformal_eta_ricci_yamabe:
      return t.lie + 2.0 * a * t.ricci + (2.0 * lam - b * t.scalar - conformal) * t.g +
             2.0 * *params.mu * eta_eta;
  }
  throw Error("unknown soliton family");
}

Matrix soliton_residual(const MetricSpec& m, const VectorField& v, const SolitonParams& params,
                        const Point& p, const NumericsConfig& cfg) {
  if (params.family == SolitonFamily::gradient_ricci_yamabe) {
    if (!v.is_gradient())
      throw PreconditionError("gradient Ricci-Yamabe solitons need a gradient potential field");
    return gradient_soliton_residual(m, v.potential(), params, p, cfg);
  }
  return soliton_residual(soliton_terms(m, v, p, cfg), params, params.p.at(p));
}

Matrix gradient_soliton_residual(const MetricSpec& m, const Expr& f, const SolitonParams& params,
                                 const Point& p, const NumericsConfig& cfg) {
  if (!params.Lambda) throw PreconditionError("soliton constant Lambda is required");
  const CurvatureSample c = curvature(m, p, cfg);
  return hessian_scalar(m, f, p, cfg) + params.alpha * c.ricci -
         (*params.Lambda - 0.5 * params.beta * c.scalar) * c.g;
}

// -- projections --------------------------------------------------------------------

ProjectionSample projection_sample(const MetricSpec& m, const VectorField& xi, const Point& p,
                                   const NumericsConfig& cfg) {
  const CurvatureSample c = curvature(m, p, cfg);
  ProjectionSample s;
  s.g = c.g;
  s.g_inv = c.g_inv;
  s.ricci = c.ricci;
  s.scalar = c.scalar;
  s.xi = xi.at(m, p, cfg);
  if (std::abs(s.xi.dot(s.g * s.xi) + 1.0) > 1e-6)
    throw PreconditionError("projection requires a unit timelike xi (g(xi,xi) = -1)");
  const Matrix nabla = cov_deriv_vector(m, xi, p, cfg);
  const Matrix gm = s.g * nabla;
  s.lie = gm + gm.transpose();
  s.div_xi = nabla.trace();
  s.div_xi_from_lie = 0.5 * s.g_inv.cwiseProduct(s.lie).sum();
  return s;
}

ProjectionSample synthetic_sample(const FluidConstants& fluid, const Matrix& g, const Vector& xi) {
  ProjectionSample s;
  s.g = g;
  s.g_inv = g.fullPivLu().inverse();
  s.xi = xi;
  const Vector eta = g * xi;
  s.ricci = ricci_from_fluid(fluid, g, eta);
  s.lie = 2.0 * (g + eta * eta.transpose());
  s.scalar = 4.0 * fluid.lambda + fluid.kappa * (fluid.sigma - 3.0 * fluid.rho);
  s.div_xi_from_lie = 0.5 * s.g_inv.cwiseProduct(s.lie).sum();
  s.div_xi = s.div_xi_from_lie;
  return s;
}

double lambda_from_projection(const ProjectionSample& s, double alpha, double beta, double p) {
  // ξξ component of £g + 2αS + [2Λ − βr − (p + ½)]g, linear in Λ
  const Vector& x = s.xi;
  const double gxx = x.dot(s.g * x);
  const double rest = x.dot(s.lie * x) + 2.0 * alpha * x.dot(s.ricci * x) -
                      (beta * s.scalar + (p + 0.5)) * gxx;
  return -rest / (2.0 * gxx);
}

double lambda_from_projection(const MetricSpec& m, const VectorField& xi, const SolitonParams& params,
                              const Point& p, const NumericsConfig& cfg) {
  return lambda_from_projection(projection_sample(m, xi, p, cfg), params.alpha, params.beta,
                                params.p.at(p));
}

double lambda_closed_form(const FluidConstants& f, double alpha, double beta, double p) {
  return 0.5 * f.kappa * ((alpha + beta) * f.sigma + 3.0 * (alpha - beta) * f.rho) +
         (2.0 * beta - alpha) * f.lambda + 0.5 * (p + 0.5);
}

double phi_closed_form(const FluidConstants& f, double alpha, double beta, double p, double Lambda) {
  return 0.5 * f.kappa * ((alpha + beta) * f.sigma + 3.0 * (alpha - beta) * f.rho) +
         (2.0 * beta - alpha) * f.lambda - Lambda + 0.5 * (p + 0.5);
}

// -- classification ---------------------------------------------------------------------

std::string_view class_name(SolitonClass c) noexcept {
  switch (c) {
    case SolitonClass::expanding: return "expanding";
    case SolitonClass::steady: return "steady";
    case SolitonClass::shrinking: return "shrinking";
  }
  return "?";
}

std::string_view convention_name(SignConvention c) noexcept {
  return c == SignConvention::positive_expanding ? "positive_expanding" : "positive_shrinking";
}

std::optional<SignConvention> parse_convention(std::string_view name) noexcept {
  if (name == "positive_expanding") return SignConvention::positive_expanding;
  if (name == "positive_shrinking") return SignConvention::positive_shrinking;
  return std::nullopt;
}

ClassificationResult classify(double Lambda, SignConvention convention, double tolerance) {
  if (!(tolerance >= 0.0)) throw PreconditionError("classification tolerance must be non-negative");
  ClassificationResult out{Lambda, SolitonClass::steady, convention, tolerance};
  if (std::abs(Lambda) <= tolerance) return out;
  const bool positive = Lambda > 0.0;
  const bool expanding = convention == SignConvention::positive_expanding ? positive : !positive;
  out.kind = expanding ? SolitonClass::expanding : SolitonClass::shrinking;
  return out;
}

// -- conformal Killing / Einstein ---------------------------------------------------------

std::string_view ckv_name(CkvCategory c) noexcept {
  switch (c) {
    case CkvCategory::proper: return "proper";
    case CkvCategory::homothetic: return "homothetic";
    case CkvCategory::killing: return "killing";
    case CkvCategory::not_ckv: return "not_ckv";
  }
  return "?";
}

CKVAnalysis ckv_fit(const MetricSpec& m, const VectorField& v, std::span<const Point> points,
                    const NumericsConfig& cfg, double tolerance) {
  if (points.size() < 2) throw PreconditionError("conformal Killing fit needs at least two points");
  CKVAnalysis out;
  out.tolerance = tolerance;
  const double n = m.dimension();
  for (const Point& p : points) {
    const Matrix g = metric_at(m, p, cfg);
    const Matrix g_inv = inverse_metric(m, p, cfg);
    const Matrix lie = lie_derivative_metric(m, v, p, cfg);
    const double phi = g_inv.cwiseProduct(lie).sum() / (2.0 * n);
    out.phi.push_back(phi);
    out.residual = std::max(out.residual, max_abs(Matrix(lie - 2.0 * phi * g)));
  }
  const auto [lo, hi] = std::minmax_element(out.phi.begin(), out.phi.end());
  const double largest = std::max(std::abs(*lo), std::abs(*hi));
  if (out.residual > tolerance)
    out.category = CkvCategory::not_ckv;
  else if (largest <= tolerance)
    out.category = CkvCategory::killing;
  else if (*hi - *lo <= tolerance)
    out.category = CkvCategory::homothetic;
  else
    out.category = CkvCategory::proper;
  return out;
}

EinsteinFit einstein_fit(std::span<const Matrix> ricci, std::span<const Matrix> metric) {
  if (ricci.size() != metric.size())
    throw PreconditionError("einstein_fit needs one metric sample per Ricci sample");
  EinsteinFit out;
  for (std::size_t i = 0; i < ricci.size(); ++i) {
    const Matrix g_inv = metric[i].fullPivLu().inverse();
    const double theta = g_inv.cwiseProduct(ricci[i]).sum() / static_cast<double>(metric[i].rows());
    out.theta.push_back(theta);
    out.residual = std::max(out.residual, max_abs(Matrix(ricci[i] - theta * metric[i])));
  }
  return out;
}

EinsteinFit einstein_fit(const MetricSpec& m, std::span<const Point> points,
                         const NumericsConfig& cfg) {
  std::vector<Matrix> s;
  std::vector<Matrix> g;
  for (const Point& p : points) {
    const CurvatureSample c = curvature(m, p, cfg);
    s.push_back(c.ricci);
    g.push_back(c.g);
  }
  return einstein_fit(s, g);
}

double einstein_conformal_factor(double Lambda, double alpha, double beta, double theta, double r,
                                 double p) {
  return -(Lambda + alpha * theta - 0.5 * beta * r - 0.5 * (p + 0.5));
}

// -- dual form ---------------------------------------------------------------------------

TwoFormPack two_form_pack(const MetricSpec& m, const VectorField& v, const Point& p,
                          const NumericsConfig& cfg) {
  const int n = m.dimension();
  const Matrix g = metric_at(m, p, cfg);
  const Matrix g_inv = inverse_metric(m, p, cfg);
  auto omega_at = [&](const Point& q) -> Vector { return metric_at(m, q, cfg) * v.at(m, q, cfg); };

  TwoFormPack out;
  out.omega = omega_at(p);
  Matrix d(n, n);  // d(i, j) = ∂_i ω_j
  for (int i = 0; i < n; ++i) d.row(i) = partial(omega_at, p, i, cfg).transpose();
  out.d_omega = 0.5 * (d - d.transpose());
  out.f = g_inv * out.d_omega;
  const Matrix gf = g * out.f;  // (gF)_ij = g(∂_i, F∂_j)
  out.skewness = max_abs(Matrix(gf + gf.transpose()));
  return out;
}

double nabla_decomposition_check(const MetricSpec& m, const VectorField& v, const Point& p,
                                 const NumericsConfig& cfg) {
  const Matrix g = metric_at(m, p, cfg);
  const Matrix nabla = cov_deriv_vector(m, v, p, cfg);
  const Matrix gm = g * nabla;  // gm(j, i) = g(∇_i V, ∂_j)
  const Matrix lie = gm + gm.transpose();
  const TwoFormPack pack = two_form_pack(m, v, p, cfg);
  const Matrix gf = g * pack.f;  // gf(j, i) = g(F∂_i, ∂_j)
  // entry (i, j): g(∇_i V, ∂_j) − ½£_ij + g(F∂_i, ∂_j)
  return max_abs(Matrix(gm.transpose() - 0.5 * lie + gf.transpose()));
}

double norm_gradient_residual(const MetricSpec& m, const VectorField& v, const Point& p,
                              const NumericsConfig& cfg) {
  const Matrix g = metric_at(m, p, cfg);
  const Vector vp = v.at(m, p, cfg);
  const Matrix f = two_form_pack(m, v, p, cfg).f;
  const Matrix lie = lie_derivative_metric(m, v, p, cfg);
  auto norm2 = [&](const Point& q) -> double {
    const Vector w = v.at(m, q, cfg);
    return w.dot(metric_at(m, q, cfg) * w);
  };
  double worst = 0.0;
  for (int i = 0; i < m.dimension(); ++i) {
    const double dnorm = partial(norm2, p, i, cfg);
    const double gfv = vp.dot(g * f.col(i));
    worst = std::max(worst, std::abs(dnorm + 2.0 * gfv - lie.row(i).dot(vp)));
  }
  return worst;
}

DualFormIdentities dual_form_identities(const MetricSpec& m, const VectorField& v,
                                        const VectorField& xi, const FluidState& fluid,
                                        const SolitonParams& params, const Point& p,
                                        const NumericsConfig& cfg, double tolerance) {
  const int n = m.dimension();
  const FluidConstants fl = fluid_at(fluid, p);
  const CurvatureSample c = curvature(m, p, cfg);
  const Vector vp = v.at(m, p, cfg);
  const Vector eta = c.g * xi.at(m, p, cfg);
  const Vector omega = c.g * vp;
  const double b = params.alpha * fl.kappa * (fl.sigma + fl.rho);

  DualFormIdentities out;
  SolitonParams conformal = params;
  conformal.family = SolitonFamily::conformal_ricci_yamabe;
  out.soliton_residual = max_abs(soliton_residual(m, v, conformal, p, cfg));
  out.applicable = out.soliton_residual <= tolerance;

  const Tensor11Field f_field = [&](const Point& q) -> Matrix {
    return two_form_pack(m, v, q, cfg).f;
  };
  // (div F)Y
  const Vector div_f = div_tensor11(m, f_field, p, cfg);
  const Vector div_expected = -fl.kappa * (fl.sigma + fl.rho) * (3.0 * params.alpha + eta.dot(vp)) * eta -
                              (fl.lambda + 0.5 * fl.kappa * (fl.sigma - fl.rho)) * omega;
  out.divergence = max_abs(Vector(div_f - div_expected));

  out.norm_gradient = norm_gradient_residual(m, v, p, cfg);

  // R(∂_i,∂_j)V against (∇_j F)∂_i − (∇_i F)∂_j + b[η_i ∂_j − η_j ∂_i]
  const Tensor3 nabla_f = cov_deriv_tensor11(m, f_field, p, cfg);
  double curv = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        double rv = 0.0;
        for (int k = 0; k < n; ++k) rv += c.riemann.r(l, k, i, j) * vp[k];
        double rhs = nabla_f(j, l, i) - nabla_f(i, l, j);
        rhs += b * ((l == j ? eta[i] : 0.0) - (l == i ? eta[j] : 0.0));
        curv = std::max(curv, std::abs(rv - rhs));
      }
    }
  }
  out.curvature = curv;
  return out;
}

// -- η-solitons ------------------------------------------------------------------------

EtaSolitonSolve eta_projection_solve(const ProjectionSample& s, double alpha, double beta,
                                     double p) {
  const Vector eta = s.g * s.xi;
  const Matrix eta_eta = eta * eta.transpose();
  // ½ × tensor with Λ = μ = 0
  const Matrix base = 0.5 * s.lie + alpha * s.ricci - 0.5 * (beta * s.scalar + (p + 0.5)) * s.g;
  const FramePack frame = orthonormal_frame(s.g, s.xi);

  EtaSolitonSolve out;
  out.div_xi = s.div_xi;
  out.coefficients << frame_trace(frame, s.g), frame_trace(frame, eta_eta),
      s.xi.dot(s.g * s.xi), std::pow(eta.dot(s.xi), 2);
  out.rhs << -frame_trace(frame, base), -s.xi.dot(base * s.xi);

  const double det = out.coefficients.determinant();
  if (std::abs(det) < 1e-9) throw Error("eta projection system is singular");
  const Eigen::Vector2d sol = out.coefficients.fullPivLu().solve(out.rhs);
  out.Lambda = sol[0];
  out.mu = sol[1];
  out.residual = (out.coefficients * sol - out.rhs).cwiseAbs().maxCoeff();
  return out;
}

EtaSolitonSolve eta_projection_solve(const MetricSpec& m, const VectorField& xi, double alpha,
                                     double beta, double p, const Point& at,
                                     const NumericsConfig& cfg) {
  return eta_projection_solve(projection_sample(m, xi, at, cfg), alpha, beta, p);
}

EtaConstants eta_closed_forms(const FluidConstants& f, double alpha, double beta, double p,
                              double div_xi) {
  const double k = f.kappa;
  EtaConstants out;
  out.Lambda = (2.0 * beta - alpha) * f.lambda +
               0.5 * k * ((beta - alpha) * f.sigma + (alpha - 3.0 * beta) * f.rho) + 0.5 * (p + 0.5) -
               div_xi / 3.0;
  out.mu = -k * alpha * (f.sigma + f.rho) - div_xi / 3.0;
  return out;
}

double eta_relations_residual(const EtaConstants& c, const FluidConstants& f, double alpha,
                              double beta, double p, double div_xi) {
  const double k = f.kappa;
  const double trace_rhs = 4.0 * (2.0 * beta - alpha) * f.lambda +
                           k * (2.0 * beta - alpha) * (f.sigma - 3.0 * f.rho) + 2.0 * (p + 0.5) -
                           div_xi;
  const double xi_rhs = (2.0 * beta - alpha) * f.lambda +
                        0.5 * k * ((alpha + beta) * f.sigma + 3.0 * (alpha - beta) * f.rho) +
                        0.5 * (p + 0.5);
  return std::max(std::abs(4.0 * c.Lambda - c.mu - trace_rhs), std::abs(c.Lambda - c.mu - xi_rhs));
}

LaplacianIdentity laplacian_identity_check(const MetricSpec& m, const Expr& f,
                                           const FluidConstants& fl, double alpha,
                                           [[maybe_unused]] double beta, double mu, const Point& p,
                                           const NumericsConfig& cfg) {
  const Vector df = scalar_differential(m, f, p, cfg);
  const double norm = df.dot(inverse_metric(m, p, cfg) * df);
  if (std::abs(norm + 1.0) > 1e-6)
    throw PreconditionError("potential gradient is not unit timelike (g(grad f, grad f) = " +
                            std::to_string(norm) + ")");
  const LaplacianSample lap = laplacian_scalar(m, f, p, cfg);
  LaplacianIdentity out;
  out.laplacian = lap.value;
  out.laplacian_via_hessian = lap.via_hessian;
  out.rhs = -3.0 * (mu + fl.kappa * alpha * (fl.sigma + fl.rho));
  out.residual = out.laplacian - out.rhs;
  return out;
}

}  // namespace solitonlab
