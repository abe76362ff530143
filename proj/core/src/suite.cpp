#include "solitonlab/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "solitonlab/error.hpp"

namespace solitonlab {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool uses_projection(SolitonFamily f) {
  return f == SolitonFamily::conformal_ricci_yamabe || f == SolitonFamily::conformal_ricci;
}

class PointEvaluator {
 public:
  PointEvaluator(const Scenario& s, SuiteMode mode, std::size_t index)
      : s_(s), mode_(mode), cfg_(s.numerics), tol_(s.tolerance) {
    out_.index = index;
    out_.at = s.points[index];
  }

  PointReport run() {
    try {
      geometry();
      if (s_.fluid_source) fluid();
      if (mode_ == SuiteMode::analyze && s_.soliton) soliton();
    } catch (const Error& e) {
      out_.error = e.what();
      out_.identities.clear();
      out_.derived.clear();
    }
    return std::move(out_);
  }

  std::vector<std::string> notes;

 private:
  void add(std::string name, double residual, bool asserted, double tolerance = -1.0) {
    if (!std::isfinite(residual)) residual = std::numeric_limits<double>::infinity();
    out_.identities.push_back({std::move(name), residual, tolerance < 0 ? tol_ : tolerance, asserted});
  }
  void derive(std::string name, double value) { out_.derived.push_back({std::move(name), value}); }

  // Runs one optional block; a failed precondition skips it with a note.
  void guarded(const char* what, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const PreconditionError& e) {
      notes.push_back(std::string(what) + " skipped at point " + std::to_string(out_.index) + ": " +
                      e.what());
    }
  }

  const Point& p() const { return out_.at; }

  void geometry() {
    c_ = curvature(s_.metric, p(), cfg_);
    add("metric_compatibility", metric_compatibility_residual(s_.metric, p(), cfg_), true);
    add("riemann_antisymmetry", riemann_antisymmetry_residual(c_.riemann.r), true);
    add("first_bianchi", first_bianchi_residual(c_.riemann.r, c_.g), true);
    add("contracted_bianchi", einstein_divergence(s_.metric, p(), cfg_).cwiseAbs().maxCoeff(), true,
        10.0 * tol_);
    derive("r", c_.scalar);
    derive("theta", c_.g_inv.cwiseProduct(c_.ricci).sum() / s_.metric.dimension());
    derive("ricci_asymmetry", c_.ricci_asymmetry);

    add("nabla_decomposition", nabla_decomposition_check(s_.metric, s_.v, p(), cfg_), true);
    add("dual_form_skewness", two_form_pack(s_.metric, s_.v, p(), cfg_).skewness, true);
    add("norm_gradient", norm_gradient_residual(s_.metric, s_.v, p(), cfg_), true);
    if (s_.xi.is_gradient()) {
      const LaplacianSample lap = laplacian_scalar(s_.metric, s_.xi.potential(), p(), cfg_);
      add("laplacian_routes", std::abs(lap.route_gap()), true);
      derive("laplacian", lap.value);
    }

    xi_ = s_.xi.at(s_.metric, p(), cfg_);
    unit_ = std::abs(xi_.dot(c_.g * xi_) + 1.0) <= 1e-6;
    derive("div_xi", divergence_vector(s_.metric, s_.xi, p(), cfg_));
    if (!unit_) {
      notes.push_back("xi is not unit timelike at point " + std::to_string(out_.index) +
                      "; fluid, torse-forming and projection identities skipped");
      return;
    }

    const bool torse_asserted = s_.expects("torse_forming");
    torse_ = torse_forming_residual(s_.metric, s_.xi, p(), cfg_);
    const TorseConsequences tc = torse_consequence_residuals(s_.metric, s_.xi, p(), cfg_);
    add("torse_forming", torse_, torse_asserted);
    add("torse_lie_derivative", torse_lie_residual(s_.metric, s_.xi, p(), cfg_), torse_asserted);
    add("torse_geodesic", tc.geodesic, torse_asserted);
    add("torse_eta_derivative", tc.eta_derivative, torse_asserted);
    add("torse_curvature", tc.curvature_xi, torse_asserted);
    add("torse_eta_curvature", tc.eta_curvature, torse_asserted);
  }

  void fluid() {
    if (!unit_) {
      add("fluid_unit_velocity", std::abs(xi_.dot(c_.g * xi_) + 1.0), true);
      return;
    }
    const FluidSource& src = *s_.fluid_source;
    if (s_.fluid) {
      fl_ = fluid_at(*s_.fluid, p());
      add("field_equations", max_abs(efe_residual(c_, *fl_, xi_)), true);
      add("scalar_curvature_identity", std::abs(scalar_curvature_identity(c_.scalar, *fl_)), true);
    } else {
      const FluidValue lambda = std::holds_alternative<double>(src.lambda)
                                    ? FluidValue(std::get<double>(src.lambda))
                                    : FluidValue(parse(std::get<std::string>(src.lambda), s_.coordinates));
      const FluidFormFit fit =
          fluid_from_ricci(c_.ricci, c_.g, xi_, src.kappa, lambda.at(p()), tol_);
      add("perfect_fluid_form", fit.residual, true);
      add("perfect_fluid_isotropy", fit.spread, true);
      fl_ = fit.state;
    }
    derive("sigma", fl_->sigma);
    derive("rho", fl_->rho);
    const EigenCheckResult eig = einstein_eigen_check(c_, *fl_, xi_, tol_);
    add("einstein_eigenvalues", std::max(eig.max_deviation, eig.max_imaginary), true);
  }

  void soliton() {
    SolitonParams params = *s_.soliton;
    const double pv = params.p.at(p());
    const bool v_is_xi = !s_.v_source;
    const bool explicit_fluid = fl_.has_value() && s_.fluid.has_value();

    if (is_eta_family(params.family)) {
      guarded("eta projection", [&] {
        if (!v_is_xi) throw PreconditionError("the eta projection needs V = xi");
        const EtaSolitonSolve solve =
            eta_projection_solve(s_.metric, s_.xi, params.alpha, params.beta, pv, p(), cfg_);
        derive("Lambda_eta", solve.Lambda);
        derive("mu_eta", solve.mu);
        add("eta_system_residual", solve.residual, true);
        if (!params.Lambda) params.Lambda = solve.Lambda;
        if (!params.mu) params.mu = solve.mu;
        if (explicit_fluid) {
          const EtaConstants closed = eta_closed_forms(*fl_, params.alpha, params.beta, pv, solve.div_xi);
          derive("Lambda_eta_closed_form", closed.Lambda);
          derive("mu_eta_closed_form", closed.mu);
          add("eta_closed_forms",
              std::max(std::abs(closed.Lambda - solve.Lambda), std::abs(closed.mu - solve.mu)), true);
          add("eta_relations",
              eta_relations_residual({solve.Lambda, solve.mu}, *fl_, params.alpha, params.beta, pv,
                                     solve.div_xi),
              true);
          if (s_.xi.is_gradient()) {
            const LaplacianIdentity li = laplacian_identity_check(
                s_.metric, s_.xi.potential(), *fl_, params.alpha, params.beta, solve.mu, p(), cfg_);
            add("laplacian_identity", std::abs(li.residual), true);
          }
        }
      });
    } else if (uses_projection(params.family)) {
      guarded("Lambda projection", [&] {
        if (!v_is_xi) throw PreconditionError("the Lambda projection needs V = xi");
        const double alpha = params.family == SolitonFamily::conformal_ricci ? 1.0 : params.alpha;
        const double beta = params.family == SolitonFamily::conformal_ricci ? 0.0 : params.beta;
        const double lam = lambda_from_projection(projection_sample(s_.metric, s_.xi, p(), cfg_),
                                                  alpha, beta, pv);
        derive("Lambda_projection", lam);
        if (!params.Lambda) params.Lambda = lam;
        if (explicit_fluid) {
          const double closed = lambda_closed_form(*fl_, alpha, beta, pv);
          derive("Lambda_closed_form", closed);
          const bool torse = torse_ <= tol_;
          add("lambda_closed_form", std::abs(closed - lam), torse);
          if (!torse)
            notes.push_back("lambda_closed_form is informational at point " +
                            std::to_string(out_.index) + ": xi is not torse-forming");
        }
      });
    }

    const bool soliton_asserted = s_.expects("soliton");
    guarded("soliton equation", [&] {
      double residual = 0.0;
      if (params.family == SolitonFamily::gradient_ricci_yamabe)
        residual = max_abs(gradient_soliton_residual(s_.metric, s_.v.potential(), params, p(), cfg_));
      else
        residual = max_abs(soliton_residual(soliton_terms(s_.metric, s_.v, p(), cfg_), params, pv));
      add("soliton_equation", residual, soliton_asserted);
    });

    if (s_.fluid && !is_eta_family(params.family) && params.family != SolitonFamily::gradient_ricci_yamabe) {
      guarded("dual form identities", [&] {
        const DualFormIdentities d =
            dual_form_identities(s_.metric, s_.v, s_.xi, *s_.fluid, params, p(), cfg_, tol_);
        const bool asserted = s_.expects("dual_form");
        add("dual_form_divergence", d.divergence, asserted);
        add("dual_form_curvature", d.curvature, asserted);
        if (!d.applicable)
          notes.push_back("dual form identities are informational at point " +
                          std::to_string(out_.index) + ": the soliton equation does not hold");
      });
    }
  }

  const Scenario& s_;
  SuiteMode mode_;
  NumericsConfig cfg_;
  double tol_;
  PointReport out_;
  CurvatureSample c_;
  Vector xi_;
  bool unit_ = false;
  double torse_ = std::numeric_limits<double>::infinity();
  std::optional<FluidConstants> fl_;
};

struct PointOutcome {
  PointReport report;
  std::vector<std::string> notes;
};

std::vector<PointOutcome> evaluate_points(const Scenario& s, SuiteMode mode) {
  std::vector<PointOutcome> out(s.points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.size(); i = next++) {
      PointEvaluator ev(s, mode, i);
      out[i].report = ev.run();
      out[i].notes = std::move(ev.notes);
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n = std::min(hw, out.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::vector<DerivedSummary> summarize(const std::vector<PointReport>& points) {
  std::vector<DerivedSummary> out;
  for (const PointReport& pr : points) {
    if (pr.error) continue;
    for (const DerivedValue& d : pr.derived) {
      auto it = std::find_if(out.begin(), out.end(), [&](const auto& x) { return x.name == d.name; });
      if (it == out.end()) {
        out.push_back({d.name, 0.0, 0.0, 0});
        it = out.end() - 1;
      }
      it->mean += d.value;
      ++it->samples;
    }
  }
  for (DerivedSummary& sum : out) {
    sum.mean /= static_cast<double>(sum.samples);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const PointReport& pr : points) {
      if (pr.error) continue;
      for (const DerivedValue& d : pr.derived) {
        if (d.name != sum.name) continue;
        lo = std::min(lo, d.value);
        hi = std::max(hi, d.value);
      }
    }
    sum.spread = hi - lo;
  }
  return out;
}

const DerivedSummary* find_summary(const std::vector<DerivedSummary>& all, std::string_view name) {
  for (const auto& d : all)
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::error: return "error";
  }
  return "?";
}

IdentityReport run_suite(const Scenario& s, SuiteMode mode) {
  IdentityReport r;
  r.scenario_name = s.name;
  r.scenario_echo = scenario_echo(s);
  r.mode = mode;
  r.tolerance = s.tolerance;
  r.warnings = s.warnings;

  std::vector<PointOutcome> outcomes = evaluate_points(s, mode);
  std::vector<Point> good;
  for (PointOutcome& o : outcomes) {
    for (std::string& n : o.notes) r.applicability.push_back(std::move(n));
    if (o.report.error)
      r.warnings.push_back("point " + std::to_string(o.report.index) + " failed: " + *o.report.error);
    else
      good.push_back(o.report.at);
    r.points.push_back(std::move(o.report));
  }
  r.derived = summarize(r.points);

  for (const PointReport& pr : r.points)
    for (const DerivedValue& d : pr.derived)
      if (d.name == "ricci_asymmetry") r.health.ricci_asymmetry = std::max(r.health.ricci_asymmetry, d.value);
  if (!good.empty()) {
    try {
      r.health.convergence_ratio = christoffel_convergence_ratio(s.metric, good.front(), 1e-2);
    } catch (const Error&) {
      // left empty: the coarse stencil left the metric's domain
    }
  }

  if (mode == SuiteMode::analyze && good.size() >= 2) {
    try {
      r.conformal_killing = ckv_fit(s.metric, s.v, good, s.numerics, std::max(s.tolerance, 1e-6));
      r.einstein = einstein_fit(s.metric, good, s.numerics);
    } catch (const Error& e) {
      r.warnings.push_back(std::string("conformal Killing / Einstein fit failed: ") + e.what());
    }
  }

  if (mode == SuiteMode::analyze && s.soliton_source) {
    std::optional<double> lambda = s.soliton_source->Lambda;
    if (!lambda) {
      for (const char* name : {"Lambda_projection", "Lambda_eta"})
        if (const DerivedSummary* d = find_summary(r.derived, name)) {
          lambda = d->mean;
          break;
        }
    }
    if (lambda) r.classification = classify(*lambda, s.soliton_source->convention);
  }

  if (good.empty()) {
    r.verdict = Verdict::error;
  } else {
    r.verdict = Verdict::pass;
    for (const PointReport& pr : r.points)
      for (const IdentityResult& id : pr.identities)
        if (id.asserted && !id.passed()) r.verdict = Verdict::fail;
  }
  return r;
}

int exit_code(const IdentityReport& r) noexcept {
  switch (r.verdict) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 1;
    case Verdict::error: return 2;
  }
  return 2;
}

}  // namespace solitonlab
