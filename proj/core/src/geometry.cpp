#include "solitonlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "finite_difference.hpp"
#include "solitonlab/error.hpp"

namespace solitonlab {

using detail::partial;

namespace {

std::span<const double> as_span(const Point& p) {
  return {p.data(), static_cast<std::size_t>(p.size())};
}

void check_point(const MetricSpec& m, const Point& p) {
  if (p.size() != m.dimension())
    throw PreconditionError("point has " + std::to_string(p.size()) +
                            " coordinates, metric dimension is " +
                            std::to_string(m.dimension()));
}

}  // namespace

// -- MetricSpec ----------------------------------------------------------------

MetricSpec::MetricSpec(CoordinateNames coords, const std::vector<std::vector<Expr>>& grid,
                       SignatureTag signature)
    : n_(static_cast<int>(coords.size())),
      coords_(std::make_shared<const CoordinateNames>(std::move(coords))),
      signature_(signature) {
  if (n_ < 2) throw PreconditionError("metric dimension must be at least 2");
  if (static_cast<int>(grid.size()) != n_)
    throw PreconditionError("metric grid must have one row per coordinate");
  for (const auto& row : grid)
    if (static_cast<int>(row.size()) != n_)
      throw PreconditionError("metric grid must be square");
  upper_.resize(static_cast<std::size_t>(n_ * (n_ + 1) / 2));
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      const Expr& a = grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const Expr& b = grid[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (!(a == b))
        throw PreconditionError("metric grid is not symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      upper_[slot(i, j)] = Expr(a.root_ptr(), coords_);
    }
  }
}

MetricSpec MetricSpec::diagonal(CoordinateNames coords, const std::vector<Expr>& diag,
                                SignatureTag signature) {
  const std::size_t n = coords.size();
  if (diag.size() != n) throw PreconditionError("diagonal must have one entry per coordinate");
  auto shared = std::make_shared<const CoordinateNames>(coords);
  std::vector<std::vector<Expr>> grid(n, std::vector<Expr>(n, Expr::constant(0.0, shared)));
  for (std::size_t i = 0; i < n; ++i) grid[i][i] = diag[i];
  return MetricSpec(std::move(coords), grid, signature);
}

std::size_t MetricSpec::slot(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major upper triangle
  return static_cast<std::size_t>(i * n_ - i * (i - 1) / 2 + (j - i));
}

const Expr& MetricSpec::component(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw PreconditionError("metric index out of range");
  return upper_[slot(i, j)];
}

// -- Tensor3 / Tensor4 -----------------------------------------------------------

double Tensor3::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Tensor3& Tensor3::operator+=(const Tensor3& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double Tensor4::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

// -- metric --------------------------------------------------------------------

namespace {

Matrix raw_metric(const MetricSpec& m, const Point& p) {
  const int n = m.dimension();
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g(i, j) = g(j, i) = m.component(i, j).evaluate(as_span(p));
  return g;
}

void check_nonsingular(const Matrix& g, const NumericsConfig& cfg) {
  const double det = g.determinant();
  if (!(std::abs(det) >= cfg.singular_threshold))
    throw SingularMetricError("metric is singular at this point (|det g| = " +
                              std::to_string(std::abs(det)) + ")");
}

}  // namespace

Matrix metric_at(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  check_point(m, p);
  Matrix g = raw_metric(m, p);
  check_nonsingular(g, cfg);
  return g;
}

Matrix inverse_metric(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  Matrix g = metric_at(m, p, cfg);
  Matrix inv = g.fullPivLu().inverse();
  return 0.5 * (inv + inv.transpose());
}

Tensor3 metric_derivatives(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  check_point(m, p);
  const int n = m.dimension();
  Tensor3 dg(n);
  auto metric = [&](const Point& q) -> Matrix { return metric_at(m, q, cfg); };
  for (int l = 0; l < n; ++l) {
    Matrix d = partial(metric, p, l, cfg);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(l, i, j) = d(i, j);
  }
  return dg;
}

// -- connection ------------------------------------------------------------------

namespace {

Tensor3 assemble_christoffel(const Matrix& g_inv, const Tensor3& dg) {
  const int n = dg.dim();
  Tensor3 gamma(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += g_inv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        gamma(k, i, j) = gamma(k, j, i) = 0.5 * s;
      }
    }
  }
  return gamma;
}

}  // namespace

Christoffel christoffel(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  Matrix g_inv = inverse_metric(m, p, cfg);
  Tensor3 dg = metric_derivatives(m, p, cfg);
  return Christoffel{assemble_christoffel(g_inv, dg), p};
}

Christoffel christoffel_exact(const MetricSpec& m, const Point& p) {
  check_point(m, p);
  const int n = m.dimension();
  Matrix g_inv = inverse_metric(m, p);
  Tensor3 dg(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const double v = differentiate(m.component(i, j), l).evaluate(as_span(p));
        dg(l, i, j) = dg(l, j, i) = v;
      }
    }
  }
  return Christoffel{assemble_christoffel(g_inv, dg), p};
}

// -- curvature --------------------------------------------------------------------

Riemann riemann(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  const int n = m.dimension();
  const Tensor3 gamma = christoffel(m, p, cfg).gamma;
  auto gamma_at = [&](const Point& q) -> Tensor3 { return christoffel(m, q, cfg).gamma; };

  // dgamma[i](l, j, k) = ∂_i Γ^l_jk
  std::vector<Tensor3> dgamma;
  dgamma.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dgamma.push_back(partial(gamma_at, p, i, cfg));

  Tensor4 r(n);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          double v = dgamma[static_cast<std::size_t>(i)](l, j, k) -
                     dgamma[static_cast<std::size_t>(j)](l, i, k);
          for (int q = 0; q < n; ++q) v += gamma(l, i, q) * gamma(q, j, k) - gamma(l, j, q) * gamma(q, i, k);
          r(l, k, i, j) = v;
          r(l, k, j, i) = -v;
        }
      }
    }
  }
  return Riemann{std::move(r), p};
}

Matrix contract_ricci(const Tensor4& r) {
  const int n = r.dim();
  Matrix s = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) s(j, k) += r(i, k, i, j);
  return s;
}

CurvatureSample curvature(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  CurvatureSample c;
  c.at = p;
  c.g = metric_at(m, p, cfg);
  c.g_inv = inverse_metric(m, p, cfg);
  c.christoffel = christoffel(m, p, cfg);
  c.riemann = riemann(m, p, cfg);
  Matrix raw = contract_ricci(c.riemann.r);
  c.ricci_asymmetry = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  c.ricci = 0.5 * (raw + raw.transpose());
  c.scalar = (c.g_inv.cwiseProduct(c.ricci)).sum();
  c.einstein = c.ricci - 0.5 * c.scalar * c.g;
  return c;
}

RicciSample ricci(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  Matrix raw = contract_ricci(riemann(m, p, cfg).r);
  return RicciSample{0.5 * (raw + raw.transpose()), (raw - raw.transpose()).cwiseAbs().maxCoeff()};
}

double scalar_curvature(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  return curvature(m, p, cfg).scalar;
}

Matrix einstein_tensor(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  return curvature(m, p, cfg).einstein;
}

// -- vector fields ------------------------------------------------------------------

VectorField VectorField::from_components(std::vector<Expr> components) {
  VectorField v;
  v.components_ = std::move(components);
  return v;
}

VectorField VectorField::gradient_of(Expr potential) {
  VectorField v;
  v.gradient_ = true;
  v.potential_ = std::move(potential);
  return v;
}

Vector VectorField::at(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) const {
  check_point(m, p);
  if (gradient_) return gradient_scalar(m, potential_, p, cfg);
  if (static_cast<int>(components_.size()) != m.dimension())
    throw PreconditionError("vector field component count does not match the metric dimension");
  Vector v(m.dimension());
  for (int i = 0; i < m.dimension(); ++i)
    v[i] = components_[static_cast<std::size_t>(i)].evaluate(as_span(p));
  return v;
}

Matrix cov_deriv_vector(const MetricSpec& m, const VectorField& v, const Point& p,
                        const NumericsConfig& cfg) {
  const int n = m.dimension();
  const Tensor3 gamma = christoffel(m, p, cfg).gamma;
  const Vector vp = v.at(m, p, cfg);
  auto field = [&](const Point& q) -> Vector { return v.at(m, q, cfg); };
  Matrix out(n, n);
  for (int j = 0; j < n; ++j) {
    Vector dv = partial(field, p, j, cfg);
    for (int k = 0; k < n; ++k) {
      double s = dv[k];
      for (int q = 0; q < n; ++q) s += gamma(k, j, q) * vp[q];
      out(k, j) = s;
    }
  }
  return out;
}

Matrix lie_derivative_metric(const MetricSpec& m, const VectorField& v, const Point& p,
                             const NumericsConfig& cfg) {
  const Matrix g = metric_at(m, p, cfg);
  const Matrix gm = g * cov_deriv_vector(m, v, p, cfg);
  return gm + gm.transpose();
}

Vector scalar_differential(const MetricSpec& m, const Expr& f, const Point& p,
                           const NumericsConfig& cfg) {
  check_point(m, p);
  const int n = m.dimension();
  auto value = [&](const Point& q) -> double { return f.evaluate(as_span(q)); };
  Vector df(n);
  for (int i = 0; i < n; ++i) df[i] = partial(value, p, i, cfg);
  return df;
}

Vector gradient_scalar(const MetricSpec& m, const Expr& f, const Point& p,
                       const NumericsConfig& cfg) {
  return inverse_metric(m, p, cfg) * scalar_differential(m, f, p, cfg);
}

Matrix hessian_scalar(const MetricSpec& m, const Expr& f, const Point& p,
                      const NumericsConfig& cfg) {
  const int n = m.dimension();
  const Tensor3 gamma = christoffel(m, p, cfg).gamma;
  const Vector df = scalar_differential(m, f, p, cfg);
  auto differential = [&](const Point& q) -> Vector { return scalar_differential(m, f, q, cfg); };
  Matrix second(n, n);
  for (int i = 0; i < n; ++i) second.col(i) = partial(differential, p, i, cfg);
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.5 * (second(i, j) + second(j, i));
      for (int k = 0; k < n; ++k) s -= gamma(k, i, j) * df[k];
      h(i, j) = s;
    }
  }
  return 0.5 * (h + h.transpose());
}

double divergence_vector(const MetricSpec& m, const VectorField& v, const Point& p,
                         const NumericsConfig& cfg) {
  return cov_deriv_vector(m, v, p, cfg).trace();
}

LaplacianSample laplacian_scalar(const MetricSpec& m, const Expr& f, const Point& p,
                                 const NumericsConfig& cfg) {
  LaplacianSample out;
  out.value = divergence_vector(m, VectorField::gradient_of(f), p, cfg);
  out.via_hessian = inverse_metric(m, p, cfg).cwiseProduct(hessian_scalar(m, f, p, cfg)).sum();
  return out;
}

Tensor3 cov_deriv_tensor11(const MetricSpec& m, const Tensor11Field& f, const Point& p,
                           const NumericsConfig& cfg) {
  check_point(m, p);
  const int n = m.dimension();
  const Tensor3 gamma = christoffel(m, p, cfg).gamma;
  const Matrix fp = f(p);
  Tensor3 out(n);
  for (int q = 0; q < n; ++q) {
    Matrix d = partial(f, p, q, cfg);
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        double s = d(k, j);
        for (int l = 0; l < n; ++l) s += gamma(k, q, l) * fp(l, j) - gamma(l, q, j) * fp(k, l);
        out(q, k, j) = s;
      }
    }
  }
  return out;
}

Vector div_tensor11(const MetricSpec& m, const Tensor11Field& f, const Point& p,
                    const NumericsConfig& cfg) {
  const int n = m.dimension();
  const Tensor3 nabla = cov_deriv_tensor11(m, f, p, cfg);
  Vector out = Vector::Zero(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out[j] += nabla(k, k, j);
  return out;
}

// -- frames ----------------------------------------------------------------------

namespace {

FramePack eigen_frame(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const int n = static_cast<int>(g.rows());
  FramePack f;
  f.vectors = Matrix(n, n);
  f.signs.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()[i];
    f.vectors.col(i) = es.eigenvectors().col(i) / std::sqrt(std::abs(lam));
    f.signs[static_cast<std::size_t>(i)] = lam < 0 ? -1 : 1;
  }
  return f;
}

}  // namespace

FramePack orthonormal_frame(const Matrix& g, const std::optional<Vector>& timelike_hint) {
  const int n = static_cast<int>(g.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int negatives = 0;
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()[i];
    if (std::abs(lam) <= 1e-14 * scale) throw SignatureError("metric is degenerate");
    if (lam < 0) ++negatives;
  }
  if (negatives != 1)
    throw SignatureError("expected Lorentzian signature (one negative direction), found " +
                         std::to_string(negatives));

  std::vector<Vector> candidates;
  if (timelike_hint) candidates.push_back(*timelike_hint);
  for (int i = 0; i < n; ++i) candidates.push_back(Vector::Unit(n, i));

  FramePack f;
  f.vectors = Matrix(n, n);
  int found = 0;
  for (const Vector& c : candidates) {
    if (found == n) break;
    Vector v = c;
    for (int k = 0; k < found; ++k) {
      const Vector ek = f.vectors.col(k);
      v -= f.signs[static_cast<std::size_t>(k)] * ek.dot(g * v) * ek;
    }
    const double norm2 = v.dot(g * v);
    if (std::abs(norm2) <= 1e-10 * scale * std::max(1.0, v.squaredNorm())) continue;
    f.vectors.col(found) = v / std::sqrt(std::abs(norm2));
    f.signs.push_back(norm2 < 0 ? -1 : 1);
    ++found;
  }
  if (found < n) f = eigen_frame(g);

  // timelike vector first, remaining order preserved
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return f.signs[static_cast<std::size_t>(a)] < f.signs[static_cast<std::size_t>(b)];
  });
  FramePack sorted;
  sorted.vectors = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    sorted.vectors.col(i) = f.vectors.col(order[static_cast<std::size_t>(i)]);
    sorted.signs.push_back(f.signs[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
  }
  return sorted;
}

FramePack orthonormal_frame(const MetricSpec& m, const Point& p,
                            const std::optional<Vector>& timelike_hint,
                            const NumericsConfig& cfg) {
  return orthonormal_frame(metric_at(m, p, cfg), timelike_hint);
}

double ricci_via_frame(const Tensor4& r, const Matrix& g, const FramePack& frame,
                       const Vector& x, const Vector& y) {
  const int n = r.dim();
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    const Vector e = frame.vectors.col(a);
    // R(e, X)Y
    Vector ry = Vector::Zero(n);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) ry[l] += r(l, k, i, j) * y[k] * e[i] * x[j];
    s += frame.signs[static_cast<std::size_t>(a)] * ry.dot(g * e);
  }
  return s;
}

// -- health checks -------------------------------------------------------------------

double metric_compatibility_residual(const MetricSpec& m, const Point& p,
                                     const NumericsConfig& cfg) {
  const int n = m.dimension();
  const Matrix g = metric_at(m, p, cfg);
  const Tensor3 dg = metric_derivatives(m, p, cfg);
  const Tensor3 gamma = christoffel(m, p, cfg).gamma;
  double worst = 0.0;
  for (int q = 0; q < n; ++q) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = dg(q, i, j);
        for (int k = 0; k < n; ++k) s -= gamma(k, q, i) * g(k, j) + gamma(k, q, j) * g(i, k);
        worst = std::max(worst, std::abs(s));
      }
    }
  }
  return worst;
}

double riemann_antisymmetry_residual(const Tensor4& r) {
  const int n = r.dim();
  double worst = 0.0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(r(l, k, i, j) + r(l, k, j, i)));
  return worst;
}

double first_bianchi_residual(const Tensor4& r, const Matrix& g) {
  const int n = r.dim();
  Tensor4 low(n);
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += g(a, l) * r(l, k, i, j);
          low(a, k, i, j) = s;
        }
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          worst = std::max(worst, std::abs(low(a, k, i, j) + low(a, i, j, k) + low(a, j, k, i)));
  return worst;
}

Vector einstein_divergence(const MetricSpec& m, const Point& p, const NumericsConfig& cfg) {
  const int n = m.dimension();
  const CurvatureSample c = curvature(m, p, cfg);
  const Tensor3& gamma = c.christoffel.gamma;
  auto einstein_at = [&](const Point& q) -> Matrix { return curvature(m, q, cfg).einstein; };

  // nabla(q, i, j) = ∇_q G_ij
  Tensor3 nabla(n);
  for (int q = 0; q < n; ++q) {
    Matrix d = partial(einstein_at, p, q, cfg);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = d(i, j);
        for (int k = 0; k < n; ++k)
          s -= gamma(k, q, i) * c.einstein(k, j) + gamma(k, q, j) * c.einstein(i, k);
        nabla(q, i, j) = s;
      }
    }
  }
  Vector out = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < n; ++q)
      for (int j = 0; j < n; ++j) out[i] += c.g_inv(q, j) * nabla(q, i, j);
  return out;
}

std::optional<double> christoffel_convergence_ratio(const MetricSpec& m, const Point& p,
                                                    double h) {
  const Tensor3 exact = christoffel_exact(m, p).gamma;
  NumericsConfig coarse{h, false, NumericsConfig{}.singular_threshold};
  NumericsConfig fine{0.5 * h, false, NumericsConfig{}.singular_threshold};
  const double e1 = (christoffel(m, p, coarse).gamma - exact).max_abs();
  const double e2 = (christoffel(m, p, fine).gamma - exact).max_abs();
  const double floor = 1e-12 * std::max(1.0, exact.max_abs());
  if (e1 <= floor || e2 <= floor) return std::nullopt;
  return e1 / e2;
}

}  // namespace solitonlab
