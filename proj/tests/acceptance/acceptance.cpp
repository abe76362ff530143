// One pass/fail line per acceptance criterion. Usage:
//   solitonlab_acceptance [--only ID] [--cli PATH] [--scenarios DIR]

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "solitonlab/geometry.hpp"
#include "solitonlab/soliton.hpp"
#include "solitonlab/spacetime.hpp"

using namespace solitonlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Point pt(double t, double x = 0, double y = 0, double z = 0) {
  Point p(4);
  p << t, x, y, z;
  return p;
}

Expr E(const std::string& s) { return parse(s, spacetime_coordinates()); }

VectorField field(const char* a, const char* b, const char* c, const char* d) {
  return VectorField::from_components({E(a), E(b), E(c), E(d)});
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<Point> random_points(std::mt19937_64& rng, int n, double t_lo, double t_hi) {
  std::uniform_real_distribution<double> ut(t_lo, t_hi), ux(-1.0, 1.0);
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) out.push_back(pt(ut(rng), ux(rng), ux(rng), ux(rng)));
  return out;
}

struct Catalog {
  std::string name;
  MetricSpec metric;
  double t_lo, t_hi;
};

std::vector<Catalog> catalogs() {
  return {{"minkowski", catalog_metric(Minkowski{}), -1.0, 1.0},
          {"de_sitter", catalog_metric(DeSitter{1.0}), -1.0, 1.0},
          {"grw_flat(sqrt t)", catalog_metric(FlatGrw{"t^(1/2)"}), 0.5, 2.0},
          {"grw_flat(t^2+1)", catalog_metric(FlatGrw{"t^2+1"}), -1.0, 1.0}};
}

const FluidState kZeroFluid{0.0, 0.0, 1.0, 0.0};

SolitonParams euler_soliton() {
  SolitonParams s;
  s.family = SolitonFamily::conformal_ricci_yamabe;
  s.alpha = 1.0;
  s.beta = 0.0;
  s.p = -0.5;
  s.Lambda = -1.0;
  return s;
}

// -- criteria ------------------------------------------------------------------

Outcome curvature_oracle() {
  constexpr double tol_ds = 1e-5, tol_flat = 1e-10;
  Outcome o;
  const MetricSpec ds = catalog_metric(DeSitter{1.0});
  double worst_s = 0, worst_r = 0;
  for (double t : {-1.0, 0.0, 1.0}) {
    const CurvatureSample c = curvature(ds, pt(t, 0.3, -0.2, 0.1));
    worst_s = std::max(worst_s, max_abs(c.ricci - 3.0 * c.g));
    worst_r = std::max(worst_r, std::abs(c.scalar - 12.0));
    // warped-product oracle with q = e^t
    const auto w = oracle::warped(std::exp(t), std::exp(t), std::exp(t));
    o.require(std::abs(c.ricci(0, 0) - w.s_tt) <= tol_ds && std::abs(c.ricci(1, 1) - w.s_xx) <= tol_ds &&
                  std::abs(c.scalar - w.r) <= tol_ds,
              "warped oracle mismatch at t=" + num(t));
  }
  o.require(worst_s <= tol_ds, "|S-3g| " + num(worst_s));
  o.require(worst_r <= tol_ds, "|r-12| " + num(worst_r));
  const Riemann flat = riemann(catalog_metric(Minkowski{}), pt(0.2, 0.1, 0.3, -0.4));
  const double worst_flat = flat.r.max_abs();
  o.require(worst_flat <= tol_flat, "Minkowski curvature " + num(worst_flat));
  o.detail = o.pass ? "|S-3g| " + num(worst_s) + ", |r-12| " + num(worst_r) + ", flat " + num(worst_flat)
                    : o.detail;
  return o;
}

Outcome torse_anchor() {
  constexpr double tol = 1e-5, tol_h2 = 1e-3;
  Outcome o;
  std::mt19937_64 rng(202);
  const MetricSpec ds = catalog_metric(DeSitter{1.0});
  const VectorField xi = field("1", "0", "0", "0");
  double worst = 0;
  for (const Point& p : random_points(rng, 5, -1.0, 1.0)) {
    const TorseConsequences c = torse_consequence_residuals(ds, xi, p);
    worst = std::max({worst, torse_forming_residual(ds, xi, p), c.geodesic, c.eta_derivative,
                      c.curvature_xi, c.eta_curvature, std::abs(c.norm_defect),
                      torse_lie_residual(ds, xi, p)});
  }
  o.require(worst <= tol, "H=1 residual " + num(worst));
  const double h2 = torse_forming_residual(catalog_metric(DeSitter{2.0}), xi, pt(0.3, 0.1, 0.2, 0.3));
  o.require(std::abs(h2 - 1.0) <= tol_h2, "H=2 residual " + num(h2));
  if (o.pass) o.detail = "H=1 worst " + num(worst) + ", H=2 " + num(h2);
  return o;
}

struct SyntheticCase {
  FluidConstants fluid;
  double alpha, beta, p;
  ProjectionSample sample;
};

std::vector<SyntheticCase> synthetic_cases() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.1, 5.0);
  std::vector<SyntheticCase> out;
  for (int i = 0; i < 1000; ++i) {
    const auto s = oracle::random_lorentz(rng);
    SyntheticCase c;
    c.fluid = {u(rng), u(rng), pos(rng), u(rng)};
    c.alpha = u(rng);
    c.beta = u(rng);
    c.p = u(rng);
    c.sample = synthetic_sample(c.fluid, s.g, s.xi);
    out.push_back(c);
  }
  return out;
}

Outcome lambda_sweep() {
  constexpr double tol = 1e-9;
  Outcome o;
  double worst = 0;
  for (const auto& c : synthetic_cases())
    worst = std::max(worst, std::abs(lambda_from_projection(c.sample, c.alpha, c.beta, c.p) -
                                     lambda_closed_form(c.fluid, c.alpha, c.beta, c.p)));
  o.require(worst <= tol, "max |Λ_proj - Λ_closed| " + num(worst));
  if (o.pass) o.detail = "1000 cases, max |ΔΛ| " + num(worst);
  return o;
}

Outcome eta_sweep() {
  constexpr double tol = 1e-9;
  Outcome o;
  double worst = 0;
  int failing = 0;
  for (const auto& c : synthetic_cases()) {
    const EtaSolitonSolve s = eta_projection_solve(c.sample, c.alpha, c.beta, c.p);
    const EtaConstants k = eta_closed_forms(c.fluid, c.alpha, c.beta, c.p, c.sample.div_xi);
    const double err = std::hypot(s.Lambda - k.Lambda, s.mu - k.mu);
    worst = std::max(worst, err);
    failing += err > tol;
  }
  o.require(worst <= tol, std::to_string(failing) + "/1000 cases exceed, max " + num(worst));
  if (o.pass) o.detail = "1000 cases, max |Δ(Λ,μ)| " + num(worst);
  return o;
}

Outcome laplacian_identity() {
  constexpr double tol = 1e-5, tol_routes = 1e-6;
  Outcome o;
  const MetricSpec ds = catalog_metric(DeSitter{1.0});
  const FluidConstants fluid{0.0, 0.0, 1.0, 3.0};
  double worst = 0, routes = 0, residual = 0, worst_mu = 0;
  for (double t : {-0.5, 0.0, 0.5}) {
    const Point p = pt(t, 0.2, -0.1, 0.3);
    // μ from the sampled projection solve, checked against its closed form
    const EtaSolitonSolve solve = eta_projection_solve(ds, VectorField::gradient_of(E("t")), 1.0, 0.0, -0.5, p);
    const double mu = solve.mu;
    worst_mu = std::max(worst_mu, std::abs(mu - eta_closed_forms(fluid, 1.0, 0.0, -0.5, solve.div_xi).mu));
    const LaplacianIdentity l = laplacian_identity_check(ds, E("t"), fluid, 1.0, 0.0, mu, p);
    worst = std::max(worst, std::abs(l.laplacian + 3.0));
    routes = std::max(routes, std::abs(l.laplacian - l.laplacian_via_hessian));
    residual = std::max(residual, std::abs(l.residual));
  }
  o.require(worst <= tol, "|Δf+3| " + num(worst));
  o.require(residual <= tol, "identity residual " + num(residual));
  o.require(routes <= tol_routes, "route disagreement " + num(routes));
  o.require(worst_mu <= tol, "μ vs closed form " + num(worst_mu));
  if (o.pass)
    o.detail = "|Δf+3| " + num(worst) + ", residual " + num(residual) + ", routes " + num(routes) +
               ", μ vs closed form " + num(worst_mu);
  return o;
}

Outcome eta_worked_case() {
  constexpr double tol = 1e-6, tol_back = 1e-9;
  Outcome o;
  const MetricSpec ds = catalog_metric(DeSitter{1.0});
  const FluidConstants fluid{0.0, 0.0, 1.0, 3.0};
  const EtaSolitonSolve s = eta_projection_solve(ds, VectorField::gradient_of(E("t")), 1.0, 0.0, -0.5, pt(0.2, 0.1));
  o.require(std::abs(s.Lambda + 2.0) <= tol, "Λ = " + num(s.Lambda));
  o.require(std::abs(s.mu - 1.0) <= tol, "μ = " + num(s.mu));
  const double back = eta_relations_residual({s.Lambda, s.mu}, fluid, 1.0, 0.0, -0.5, s.div_xi);
  o.require(back <= tol_back, "back-substitution " + num(back));
  if (o.pass) o.detail = "Λ = " + num(s.Lambda) + ", μ = " + num(s.mu) + ", back-substitution " + num(back);
  return o;
}

Outcome radiation_reduction() {
  constexpr double tol_coef = 1e-12, tol = 1e-5;
  Outcome o;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.1, 5.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double rho = u(rng), k = pos(rng), l = u(rng), a = u(rng), b = u(rng), p = u(rng), div = u(rng);
    const EtaConstants c = eta_closed_forms(radiation_fluid(rho, k, l), a, b, p, div);
    const auto want = oracle::radiation_forms(rho, k, l, a, b, p, div);
    worst = std::max({worst, std::abs(c.Lambda - want.lambda), std::abs(c.mu - want.mu)});
  }
  o.require(worst <= tol_coef, "coefficient mismatch " + num(worst));

  const MetricSpec frw = catalog_metric(FlatGrw{"t^(1/2)"});
  const CurvatureSample c = curvature(frw, pt(1.0));
  const Vector xi = (Vector(4) << 1, 0, 0, 0).finished();
  const FluidFormFit fit = fluid_from_ricci(c.ricci, c.g, xi, 1.0, 0.0);
  o.require(std::abs(fit.state.sigma - 3.0 * fit.state.rho) <= tol, "σ-3ρ " + num(fit.state.sigma - 3.0 * fit.state.rho));
  o.require(std::abs(c.scalar) <= tol, "r " + num(c.scalar));
  const EigenCheckResult e = einstein_eigen_check(c, fit.state, xi);
  o.require(e.max_deviation <= tol, "eigen deviation " + num(e.max_deviation));
  if (o.pass)
    o.detail = "coefficients " + num(worst) + ", σ-3ρ " + num(fit.state.sigma - 3.0 * fit.state.rho) + ", r " +
               num(c.scalar) + ", eigen " + num(e.max_deviation);
  return o;
}

Outcome ckv_einstein_logic() {
  constexpr double tol_phi = 1e-6, tol_einstein = 1e-10, tol_closed = 1e-12;
  Outcome o;
  std::mt19937_64 rng(707);
  const auto pts = random_points(rng, 4, -1.0, 1.0);
  const MetricSpec mk = catalog_metric(Minkowski{});
  const CKVAnalysis euler = ckv_fit(mk, field("t", "x", "y", "z"), pts);
  o.require(euler.category == CkvCategory::homothetic, std::string("Euler field is ") + std::string(ckv_name(euler.category)));
  double phi_err = 0;
  for (double phi : euler.phi) phi_err = std::max(phi_err, std::abs(phi - 1.0));
  o.require(phi_err <= tol_phi, "|Φ-1| " + num(phi_err));
  const EinsteinFit ef = einstein_fit(mk, pts);
  o.require(ef.residual <= tol_einstein, "Einstein fit " + num(ef.residual));
  const CKVAnalysis ds = ckv_fit(catalog_metric(DeSitter{1.0}), field("1", "0", "0", "0"), pts);
  o.require(ds.category == CkvCategory::not_ckv, std::string("de Sitter ∂_t is ") + std::string(ckv_name(ds.category)));
  const SolitonParams s = euler_soliton();
  const FluidConstants zero{0.0, 0.0, 1.0, 0.0};
  const double closed = lambda_closed_form(zero, s.alpha, s.beta, -0.5);
  const double gap = std::abs(phi_closed_form(zero, s.alpha, s.beta, -0.5, *s.Lambda) + *s.Lambda - closed);
  o.require(gap <= tol_closed, "Φ+Λ gap " + num(gap));
  if (o.pass) o.detail = "|Φ-1| " + num(phi_err) + ", Einstein fit " + num(ef.residual) + ", Φ+Λ gap " + num(gap);
  return o;
}

double worst_skewness() {
  std::mt19937_64 rng(808);
  const std::array<VectorField, 4> fields{field("1", "0", "0", "0"), field("t", "x", "y", "z"),
                                          field("0", "-y", "x", "0"), field("sin(x)*t", "t*y^2", "exp(z)-x", "t*x*y")};
  double worst = 0;
  for (const Catalog& c : catalogs())
    for (const VectorField& v : fields)
      for (const Point& p : random_points(rng, 3, c.t_lo, c.t_hi))
        worst = std::max(worst, two_form_pack(c.metric, v, p).skewness);
  return worst;
}

Outcome dual_form_suite() {
  constexpr double tol_soliton = 1e-9, tol = 1e-5, tol_skew = 1e-9;
  Outcome o;
  std::mt19937_64 rng(888);
  const MetricSpec mk = catalog_metric(Minkowski{});
  double soliton = 0, div = 0, norm = 0, curv = 0;
  bool applicable = true;
  for (const Point& p : random_points(rng, 5, -1.0, 1.0)) {
    const DualFormIdentities d =
        dual_form_identities(mk, field("t", "x", "y", "z"), field("1", "0", "0", "0"), kZeroFluid, euler_soliton(), p);
    applicable = applicable && d.applicable;
    soliton = std::max(soliton, d.soliton_residual);
    div = std::max(div, d.divergence);
    norm = std::max(norm, d.norm_gradient);
    curv = std::max(curv, d.curvature);
  }
  o.require(applicable, "not applicable");
  o.require(soliton <= tol_soliton, "soliton residual " + num(soliton));
  o.require(div <= tol, "divergence " + num(div));
  o.require(norm <= tol, "norm gradient " + num(norm));
  o.require(curv <= tol, "curvature " + num(curv));
  const double skew = worst_skewness();
  o.require(skew <= tol_skew, "F skewness " + num(skew));
  if (o.pass)
    o.detail = "soliton " + num(soliton) + ", divergence " + num(div) + ", norm gradient " + num(norm) +
               ", curvature " + num(curv) + ", skewness " + num(skew);
  return o;
}

Outcome decomposition() {
  constexpr double tol = 1e-5;
  Outcome o;
  std::mt19937_64 rng(909);
  const std::array<VectorField, 3> fields{field("1", "0", "0", "0"), field("t", "x", "y", "z"), field("0", "-y", "x", "0")};
  double worst = 0;
  for (const Catalog& c : catalogs())
    for (const VectorField& v : fields)
      for (const Point& p : random_points(rng, 5, c.t_lo, c.t_hi))
        worst = std::max(worst, nabla_decomposition_check(c.metric, v, p));
  o.require(worst <= tol, "worst " + num(worst));
  if (o.pass) o.detail = "worst " + num(worst);
  return o;
}

Outcome numerics_health() {
  constexpr double tol_bianchi = 1e-4, ratio_lo = 3.5, ratio_hi = 4.5;
  Outcome o;
  std::mt19937_64 rng(1010);
  double worst = 0;
  for (const Catalog& c : catalogs())
    for (const Point& p : random_points(rng, 3, c.t_lo, c.t_hi))
      worst = std::max(worst, einstein_divergence(c.metric, p).cwiseAbs().maxCoeff());
  o.require(worst <= tol_bianchi, "contracted Bianchi " + num(worst));
  const auto ratio = christoffel_convergence_ratio(catalog_metric(DeSitter{1.0}), pt(0.3, 0.1, 0.2, 0.3), 1e-2);
  o.require(ratio && *ratio >= ratio_lo && *ratio <= ratio_hi, "convergence ratio " + (ratio ? num(*ratio) : "n/a"));
  if (o.pass) o.detail = "contracted Bianchi " + num(worst) + ", convergence ratio " + num(*ratio);
  return o;
}

// -- CLI -----------------------------------------------------------------------------

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& cmd) {
  Run r;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Outcome cli(const std::string& cli_path, const std::string& dir) {
  Outcome o;
  if (cli_path.empty()) {
    o.require(false, "no --cli path given");
    return o;
  }
  for (const char* name : {"de-sitter-soliton", "minkowski", "frw-radiation"}) {
    const std::string cmd = "\"" + cli_path + "\" analyze \"" + dir + "/" + name + ".json\" --no-timestamp";
    const Run a = run(cmd), b = run(cmd);
    o.require(a.code == 0, std::string(name) + " exit " + std::to_string(a.code));
    o.require(a.out == b.out && !a.out.empty(), std::string(name) + " output not byte-stable");
    const auto j = nlohmann::json::parse(a.out, nullptr, false);
    o.require(!j.is_discarded() && j.value("verdict", "") == "pass", std::string(name) + " verdict not pass");
  }
  const Run bad = run("\"" + cli_path + "\" analyze \"" + dir + "/minkowski-lambda1.json\" --no-timestamp");
  o.require(bad.code == 1, "minkowski-lambda1 exit " + std::to_string(bad.code));
  if (o.pass) o.detail = "3 fixtures pass and are byte-stable; inconsistent fixture exits 1";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string only, cli_path, dir = SOLITONLAB_SCENARIO_DIR;
#ifdef SOLITONLAB_CLI_PATH
  cli_path = SOLITONLAB_CLI_PATH;
#endif
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--only") only = argv[i + 1];
    else if (flag == "--cli") cli_path = argv[i + 1];
    else if (flag == "--scenarios") dir = argv[i + 1];
    else {
      std::fprintf(stderr, "unknown option %s\n", argv[i]);
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1", curvature_oracle},
      {"2", torse_anchor},
      {"3a", lambda_sweep},
      {"3b", eta_sweep},
      {"4", laplacian_identity},
      {"5", eta_worked_case},
      {"6", radiation_reduction},
      {"7", ckv_einstein_logic},
      {"8", dual_form_suite},
      {"9", decomposition},
      {"10", numerics_health},
      {"11", [&] { return cli(cli_path, dir); }},
  };
  const std::vector<std::string> titles{
      "curvature oracle",     "torse-forming anchor",   "Λ closed-form sweep",
      "η closed-form sweep",  "Laplacian identity",     "η-soliton worked case",
      "radiation reduction",  "CKV and Einstein logic", "dual-form identities",
      "∇V decomposition",     "numerics health",        "CLI fixtures"};

  int failed = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && criteria[i].first != only) continue;
    ++ran;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("[%s] %-3s %s: %s\n", o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                titles[i].c_str(), o.detail.c_str());
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion named %s\n", only.c_str());
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
