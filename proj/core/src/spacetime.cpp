#include "solitonlab/spacetime.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "solitonlab/error.hpp"

namespace solitonlab {

const CoordinateNames& spacetime_coordinates() {
  static const CoordinateNames coords{"t", "x", "y", "z"};
  return coords;
}

std::vector<CatalogInfo> catalog_listing() {
  return {
      {"minkowski", "", "flat spacetime, diag(-1, 1, 1, 1)"},
      {"de_sitter", "H (real, default 1)",
       "exponential flat slicing, diag(-1, q^2, q^2, q^2) with q = exp(H t)"},
      {"grw_flat", "q (expression in t, positive on the sampled range)",
       "flat generalized Robertson-Walker, diag(-1, q^2, q^2, q^2)"},
  };
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  return v < 0 ? "(" + s + ")" : s;
}

MetricSpec warped(const std::string& q_squared) {
  const auto& coords = spacetime_coordinates();
  Expr lapse = parse("-1", coords);
  Expr spatial = parse(q_squared, coords);
  return MetricSpec::diagonal(coords, {lapse, spatial, spatial, spatial});
}

struct CatalogBuilder {
  MetricSpec operator()(const Minkowski&) const { return warped("1"); }
  MetricSpec operator()(const DeSitter& d) const {
    return warped("exp(" + format_number(2.0 * d.hubble) + "*t)");
  }
  MetricSpec operator()(const FlatGrw& f) const {
    // validate q on its own so parse errors point into the user's text
    parse(f.scale_factor, spacetime_coordinates());
    return warped("(" + f.scale_factor + ")^2");
  }
};

bool only_depends_on_first(const Node& n) {
  if (n.op == Op::variable) return n.var == 0;
  if (n.lhs && !only_depends_on_first(*n.lhs)) return false;
  if (n.rhs && !only_depends_on_first(*n.rhs)) return false;
  return true;
}

}  // namespace

MetricSpec catalog_metric(const CatalogEntry& entry) { return std::visit(CatalogBuilder{}, entry); }

FluidValue::FluidValue(Expr e) {
  if (!only_depends_on_first(e.root()))
    throw PreconditionError("fluid quantities may depend on the time coordinate only");
  if (e.is_constant()) {
    constant_ = e.root().value;
  } else {
    expr_ = std::move(e);
  }
}

double FluidValue::at(const Point& p) const {
  if (!expr_) return constant_;
  return expr_->evaluate({p.data(), static_cast<std::size_t>(p.size())});
}

FluidConstants fluid_at(const FluidState& fluid, const Point& p) {
  if (!(fluid.kappa > 0.0)) throw PreconditionError("gravitational constant kappa must be positive");
  return FluidConstants{fluid.sigma.at(p), fluid.rho.at(p), fluid.kappa, fluid.lambda.at(p)};
}

FluidConstants radiation_fluid(double rho, double kappa, double lambda) {
  return FluidConstants{3.0 * rho, rho, kappa, lambda};
}

double unit_norm_defect(const Matrix& g_inv, const Vector& eta) {
  return eta.dot(g_inv * eta) + 1.0;
}

Matrix energy_momentum(const FluidConstants& fluid, const Matrix& g, const Vector& eta) {
  const Matrix g_inv = g.fullPivLu().inverse();
  if (std::abs(unit_norm_defect(g_inv, eta)) > 1e-6)
    throw PreconditionError("fluid velocity is not unit timelike (g(xi,xi) != -1)");
  return fluid.rho * g + (fluid.sigma + fluid.rho) * eta * eta.transpose();
}

Matrix efe_residual(const CurvatureSample& c, const FluidConstants& fluid, const Vector& xi) {
  const Vector eta = c.g * xi;
  const Matrix t = energy_momentum(fluid, c.g, eta);
  return c.ricci + (fluid.lambda - 0.5 * c.scalar) * c.g - fluid.kappa * t;
}

Matrix efe_residual(const MetricSpec& m, const FluidState& fluid, const VectorField& xi,
                    const Point& p, const NumericsConfig& cfg) {
  const CurvatureSample c = curvature(m, p, cfg);
  return efe_residual(c, fluid_at(fluid, p), xi.at(m, p, cfg));
}

Matrix ricci_from_fluid(const FluidConstants& fluid, const Matrix& g, const Vector& eta) {
  const Matrix g_inv = g.fullPivLu().inverse();
  if (std::abs(unit_norm_defect(g_inv, eta)) > 1e-6)
    throw PreconditionError("fluid velocity is not unit timelike (g(xi,xi) != -1)");
  return (fluid.lambda + 0.5 * fluid.kappa * (fluid.sigma - fluid.rho)) * g +
         fluid.kappa * (fluid.sigma + fluid.rho) * eta * eta.transpose();
}

FluidFormFit fluid_from_ricci(const Matrix& s, const Matrix& g, const Vector& xi, double kappa,
                              double lambda, double tolerance) {
  if (!(kappa > 0.0)) throw PreconditionError("gravitational constant kappa must be positive");
  if (std::abs(xi.dot(g * xi) + 1.0) > 1e-6)
    throw PreconditionError("fluid velocity is not unit timelike (g(xi,xi) != -1)");

  const FramePack frame = orthonormal_frame(g, xi);
  const int n = static_cast<int>(g.rows());
  double lo = 0.0;
  double hi = 0.0;
  double sum = 0.0;
  for (int a = 1; a < n; ++a) {
    const Vector e = frame.vectors.col(a);
    const double v = e.dot(s * e);
    if (a == 1 || v < lo) lo = v;
    if (a == 1 || v > hi) hi = v;
    sum += v;
  }

  FluidFormFit fit;
  fit.a = sum / (n - 1);
  fit.b = xi.dot(s * xi) + fit.a;
  fit.spread = hi - lo;
  const Vector eta = g * xi;
  fit.residual = (s - fit.a * g - fit.b * eta * eta.transpose()).cwiseAbs().maxCoeff();

  const double difference = 2.0 * (fit.a - lambda) / kappa;  // σ − ρ
  const double total = fit.b / kappa;                        // σ + ρ
  fit.state = FluidConstants{0.5 * (total + difference), 0.5 * (total - difference), kappa, lambda};
  fit.perfect_fluid = fit.residual <= tolerance && fit.spread <= tolerance;
  return fit;
}

double scalar_curvature_identity(double r, const FluidConstants& fluid) {
  return r - (4.0 * fluid.lambda + fluid.kappa * (fluid.sigma - 3.0 * fluid.rho));
}

double scalar_curvature_identity(const MetricSpec& m, const FluidState& fluid, const Point& p,
                                 const NumericsConfig& cfg) {
  return scalar_curvature_identity(curvature(m, p, cfg).scalar, fluid_at(fluid, p));
}

Vector ricci_operator(const Matrix& s, const Matrix& g_inv, const Vector& x) {
  return g_inv * (s * x);
}

EigenCheckResult einstein_eigen_check(const CurvatureSample& c, const FluidConstants& fluid,
                                      const Vector& xi, double efe_tolerance) {
  if (c.g.rows() != 4) throw PreconditionError("eigenvalue check requires a 4-dimensional metric");
  EigenCheckResult out;
  out.efe_residual = efe_residual(c, fluid, xi).cwiseAbs().maxCoeff();
  out.applicable = out.efe_residual <= efe_tolerance;

  const Matrix mixed = c.g_inv * (c.ricci + (fluid.lambda - 0.5 * c.scalar) * c.g);
  Eigen::EigenSolver<Matrix> es(mixed, false);
  for (int i = 0; i < 4; ++i) {
    out.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()[i].real();
    out.max_imaginary = std::max(out.max_imaginary, std::abs(es.eigenvalues()[i].imag()));
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());

  const double k_rho = fluid.kappa * fluid.rho;
  out.expected = {-fluid.kappa * fluid.sigma, k_rho, k_rho, k_rho};
  std::sort(out.expected.begin(), out.expected.end());
  for (std::size_t i = 0; i < 4; ++i)
    out.max_deviation = std::max(out.max_deviation, std::abs(out.eigenvalues[i] - out.expected[i]));
  return out;
}

EigenCheckResult einstein_eigen_check(const MetricSpec& m, const FluidState& fluid,
                                      const VectorField& xi, const Point& p,
                                      const NumericsConfig& cfg, double efe_tolerance) {
  const CurvatureSample c = curvature(m, p, cfg);
  return einstein_eigen_check(c, fluid_at(fluid, p), xi.at(m, p, cfg), efe_tolerance);
}

}  // namespace solitonlab
