#include "solitonlab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "solitonlab/error.hpp"

namespace solitonlab {

namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string join_pointer(const std::string& base, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~')
      escaped += "~0";
    else if (c == '/')
      escaped += "~1";
    else
      escaped += c;
  }
  return base + "/" + escaped;
}

std::string join_pointer(const std::string& base, std::size_t index) {
  return base + "/" + std::to_string(index);
}

std::string number_text(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Object view that rejects unknown keys and tracks its JSON pointer.
class Object {
 public:
  Object(const json& j, std::string pointer, std::initializer_list<const char*> allowed)
      : j_(j), pointer_(std::move(pointer)) {
    if (!j.is_object()) throw SchemaError(pointer_, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items())
      if (!ok.contains(item.key())) throw SchemaError(at(item.key()), "unknown key");
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& get(const char* key) const {
    if (!j_.contains(key)) throw SchemaError(at(key), "required key is missing");
    return j_.at(key);
  }
  std::string at(const std::string& key) const { return join_pointer(pointer_, key); }
  const std::string& pointer() const { return pointer_; }

  double number(const char* key) const {
    const json& v = get(key);
    if (!v.is_number()) throw SchemaError(at(key), "expected a number");
    return v.get<double>();
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }
  std::optional<double> optional_number(const char* key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  std::string string(const char* key) const {
    const json& v = get(key);
    if (!v.is_string()) throw SchemaError(at(key), "expected a string");
    return v.get<std::string>();
  }
  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_boolean()) throw SchemaError(at(key), "expected true or false");
    return v.get<bool>();
  }
  int integer(const char* key) const {
    const json& v = get(key);
    if (!v.is_number_integer()) throw SchemaError(at(key), "expected an integer");
    return v.get<int>();
  }
  ScalarSource scalar(const char* key, ScalarSource fallback) const {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw SchemaError(at(key), "expected a number or an expression string");
  }

 private:
  const json& j_;
  std::string pointer_;
};

std::string expression_text(const json& v, const std::string& pointer) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return number_text(v.get<double>());
  throw SchemaError(pointer, "expected an expression string or a number");
}

Expr parse_at(const std::string& text, const CoordinateNames& coords, const std::string& pointer) {
  try {
    return parse(text, coords);
  } catch (const ParseError& e) {
    throw ScenarioExpressionError(pointer, e);
  }
}

// -- reading ----------------------------------------------------------------------------

MetricSource read_metric(const json& j) {
  const std::string ptr = "/metric";
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  MetricSource out;
  if (j.contains("components")) {
    Object o(j, ptr, {"components"});
    const json& rows = o.get("components");
    const std::string rp = o.at("components");
    if (!rows.is_array()) throw SchemaError(rp, "expected an array of rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string ip = join_pointer(rp, i);
      if (!rows[i].is_array()) throw SchemaError(ip, "expected an array");
      std::vector<std::string> row;
      for (std::size_t k = 0; k < rows[i].size(); ++k)
        row.push_back(expression_text(rows[i][k], join_pointer(ip, k)));
      out.components.push_back(std::move(row));
    }
    return out;
  }
  const std::string name = j.contains("catalog") && j.at("catalog").is_string()
                               ? j.at("catalog").get<std::string>()
                               : std::string{};
  if (name == "minkowski") {
    Object o(j, ptr, {"catalog"});
  } else if (name == "de_sitter") {
    Object o(j, ptr, {"catalog", "H"});
    out.hubble = o.number("H", 1.0);
  } else if (name == "grw_flat") {
    Object o(j, ptr, {"catalog", "q"});
    out.scale_factor = expression_text(o.get("q"), o.at("q"));
  } else if (!j.contains("catalog")) {
    throw SchemaError(ptr, "expected \"catalog\" or \"components\"");
  } else {
    throw SchemaError(ptr + "/catalog", "unknown catalog metric '" +
                                            (j.at("catalog").is_string() ? name : j.at("catalog").dump()) +
                                            "' (minkowski, de_sitter, grw_flat)");
  }
  out.catalog = name;
  return out;
}

FieldSource read_field(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  FieldSource out;
  if (j.contains("gradient")) {
    Object o(j, ptr, {"gradient"});
    out.gradient = expression_text(o.get("gradient"), o.at("gradient"));
    return out;
  }
  Object o(j, ptr, {"components"});
  const json& c = o.get("components");
  if (!c.is_array()) throw SchemaError(o.at("components"), "expected an array");
  for (std::size_t i = 0; i < c.size(); ++i)
    out.components.push_back(expression_text(c[i], join_pointer(o.at("components"), i)));
  return out;
}

FluidSource read_fluid(const json& j) {
  FluidSource out;
  const bool fit = j.is_object() && j.contains("fit_from_ricci");
  Object o = fit ? Object(j, "/fluid", {"kappa", "lambda", "fit_from_ricci"})
                 : Object(j, "/fluid", {"kappa", "lambda", "sigma", "rho"});
  out.kappa = o.number("kappa");
  if (!(out.kappa > 0.0)) throw SchemaError(o.at("kappa"), "kappa must be positive");
  out.lambda = o.scalar("lambda", 0.0);
  out.fit_from_ricci = o.boolean("fit_from_ricci", false);
  if (fit && !out.fit_from_ricci)
    throw SchemaError(o.at("fit_from_ricci"), "set to true or give sigma and rho instead");
  if (!out.fit_from_ricci) {
    out.sigma = o.scalar("sigma", 0.0);
    out.rho = o.scalar("rho", 0.0);
  }
  return out;
}

SolitonSource read_soliton(const json& j) {
  Object o(j, "/soliton", {"family", "alpha", "beta", "p", "Lambda", "mu", "convention"});
  SolitonSource out;
  const std::string family = o.string("family");
  auto f = parse_family(family);
  if (!f) throw SchemaError(o.at("family"), "unknown soliton family '" + family + "'");
  out.family = *f;
  out.alpha = o.number("alpha", 1.0);
  out.beta = o.number("beta", 0.0);
  out.p = o.scalar("p", -0.5);
  out.Lambda = o.optional_number("Lambda");
  out.mu = o.optional_number("mu");
  if (o.has("convention")) {
    const std::string name = o.string("convention");
    auto c = parse_convention(name);
    if (!c) throw SchemaError(o.at("convention"), "unknown convention '" + name + "'");
    out.convention = *c;
  }
  return out;
}

PlanSource read_plan(const json& j, const CoordinateNames& coords) {
  Object o(j, "/plan", {"points", "grid"});
  PlanSource out;
  if (o.has("points")) {
    const json& pts = o.get("points");
    if (!pts.is_array()) throw SchemaError(o.at("points"), "expected an array of points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string ip = join_pointer(o.at("points"), i);
      if (!pts[i].is_array() || pts[i].size() != coords.size())
        throw SchemaError(ip, "expected an array of " + std::to_string(coords.size()) + " numbers");
      std::vector<double> p;
      for (std::size_t k = 0; k < pts[i].size(); ++k) {
        if (!pts[i][k].is_number()) throw SchemaError(join_pointer(ip, k), "expected a number");
        p.push_back(pts[i][k].get<double>());
      }
      out.points.push_back(std::move(p));
    }
  }
  if (o.has("grid")) {
    const json& g = o.get("grid");
    if (!g.is_object()) throw SchemaError(o.at("grid"), "expected an object keyed by coordinate");
    // axes in coordinate order, independent of key order in the file
    for (const std::string& c : coords) {
      if (!g.contains(c)) continue;
      Object axis(g.at(c), join_pointer(o.at("grid"), c), {"from", "to", "count"});
      GridAxis a{c, axis.number("from"), 0.0, axis.has("count") ? axis.integer("count") : 1};
      a.to = axis.number("to", a.from);
      if (a.count < 1) throw SchemaError(axis.at("count"), "count must be at least 1");
      out.grid.push_back(a);
    }
    for (const auto& item : g.items())
      if (std::find(coords.begin(), coords.end(), item.key()) == coords.end())
        throw SchemaError(join_pointer(o.at("grid"), item.key()), "not a coordinate name");
  }
  return out;
}

// -- building --------------------------------------------------------------------------------

FluidValue fluid_value(const ScalarSource& s, const CoordinateNames& coords, const std::string& ptr) {
  if (const double* d = std::get_if<double>(&s)) return FluidValue(*d);
  try {
    return FluidValue(parse_at(std::get<std::string>(s), coords, ptr));
  } catch (const PreconditionError& e) {
    throw SchemaError(ptr, e.what());
  }
}

VectorField build_field(const FieldSource& f, const CoordinateNames& coords, const std::string& ptr) {
  if (f.gradient) return VectorField::gradient_of(parse_at(*f.gradient, coords, ptr + "/gradient"));
  if (f.components.size() != coords.size())
    throw SchemaError(ptr + "/components",
                      "expected " + std::to_string(coords.size()) + " components");
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < f.components.size(); ++i)
    comps.push_back(parse_at(f.components[i], coords, join_pointer(ptr + "/components", i)));
  return VectorField::from_components(std::move(comps));
}

MetricSpec build_metric(const MetricSource& src, const CoordinateNames& coords) {
  if (src.catalog == "minkowski") return catalog_metric(Minkowski{});
  if (src.catalog == "de_sitter") return catalog_metric(DeSitter{src.hubble.value_or(1.0)});
  if (src.catalog == "grw_flat") {
    parse_at(*src.scale_factor, coords, "/metric/q");
    return catalog_metric(FlatGrw{*src.scale_factor});
  }
  const std::string ptr = "/metric/components";
  const std::size_t n = coords.size();
  if (src.components.size() != n)
    throw SchemaError(ptr, "expected " + std::to_string(n) + " rows");
  std::vector<std::vector<Expr>> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (src.components[i].size() != n)
      throw SchemaError(join_pointer(ptr, i), "expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k)
      grid[i].push_back(
          parse_at(src.components[i][k], coords, join_pointer(join_pointer(ptr, i), k)));
  }
  try {
    return MetricSpec(coords, grid);
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
}

void build(Scenario& s) {
  const CoordinateNames& coords = s.coordinates;
  s.metric = build_metric(s.metric_source, coords);
  s.xi = build_field(s.xi_source, coords, "/xi");
  s.v = s.v_source ? build_field(*s.v_source, coords, "/V") : s.xi;

  s.fluid.reset();
  if (s.fluid_source && !s.fluid_source->fit_from_ricci) {
    FluidState f;
    f.kappa = s.fluid_source->kappa;
    f.lambda = fluid_value(s.fluid_source->lambda, coords, "/fluid/lambda");
    f.sigma = fluid_value(s.fluid_source->sigma, coords, "/fluid/sigma");
    f.rho = fluid_value(s.fluid_source->rho, coords, "/fluid/rho");
    s.fluid = f;
  } else if (s.fluid_source) {
    fluid_value(s.fluid_source->lambda, coords, "/fluid/lambda");
  }

  s.soliton.reset();
  if (s.soliton_source) {
    const SolitonSource& src = *s.soliton_source;
    SolitonParams p;
    p.family = src.family;
    p.alpha = src.alpha;
    p.beta = src.beta;
    p.p = fluid_value(src.p, coords, "/soliton/p");
    p.Lambda = src.Lambda;
    p.mu = src.mu;
    if (p.family == SolitonFamily::gradient_ricci_yamabe && !s.v.is_gradient())
      throw SchemaError(s.v_source ? "/V" : "/xi",
                        "the gradient family needs a field given as a gradient");
    s.soliton = p;
  }

  s.points.clear();
  for (const auto& p : s.plan_source.points)
    s.points.push_back(Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size())));
  if (!s.plan_source.grid.empty()) {
    std::vector<std::size_t> axis_of(coords.size(), s.plan_source.grid.size());
    for (std::size_t a = 0; a < s.plan_source.grid.size(); ++a) {
      auto it = std::find(coords.begin(), coords.end(), s.plan_source.grid[a].coordinate);
      axis_of[static_cast<std::size_t>(it - coords.begin())] = a;
    }
    std::vector<int> idx(s.plan_source.grid.size(), 0);
    for (;;) {
      Point p = Point::Zero(static_cast<Eigen::Index>(coords.size()));
      for (std::size_t c = 0; c < coords.size(); ++c) {
        if (axis_of[c] == s.plan_source.grid.size()) continue;
        const GridAxis& a = s.plan_source.grid[axis_of[c]];
        const int k = idx[axis_of[c]];
        p[static_cast<Eigen::Index>(c)] =
            a.count == 1 ? a.from : a.from + (a.to - a.from) * k / (a.count - 1);
      }
      s.points.push_back(p);
      int d = static_cast<int>(idx.size()) - 1;
      while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == s.plan_source.grid[static_cast<std::size_t>(d)].count)
        idx[static_cast<std::size_t>(d--)] = 0;
      if (d < 0) break;
    }
  }
  if (s.points.empty()) throw SchemaError("/plan", "the plan has no evaluation points");

  s.warnings.clear();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    try {
      metric_at(s.metric, s.points[i], s.numerics);
    } catch (const Error& e) {
      s.warnings.push_back("plan point " + std::to_string(i) + " is outside the metric's domain: " +
                           e.what());
    }
  }
}

Scenario read(const json& root) {
  Object o(root, "", {"schema_version", "name", "coordinates", "dimension", "metric", "xi", "V",
                      "fluid", "soliton", "plan", "numerics", "expect"});
  if (o.integer("schema_version") != scenario_schema_version)
    throw SchemaError("/schema_version",
                      "unsupported schema version (expected " +
                          std::to_string(scenario_schema_version) + ")");
  Scenario s;
  s.name = o.string("name");

  if (o.has("dimension") && o.integer("dimension") != 4)
    throw SchemaError("/dimension", "only dimension 4 is supported");

  s.coordinates = spacetime_coordinates();
  if (o.has("coordinates")) {
    const json& c = o.get("coordinates");
    if (!c.is_array()) throw SchemaError("/coordinates", "expected an array of names");
    CoordinateNames names;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_string()) throw SchemaError(join_pointer("/coordinates", i), "expected a string");
      names.push_back(c[i].get<std::string>());
    }
    if (names.size() != 4) throw SchemaError("/coordinates", "expected 4 coordinate names");
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size()) throw SchemaError("/coordinates", "coordinate names must be unique");
    s.coordinates = names;
  }

  s.metric_source = read_metric(o.get("metric"));
  if (!s.metric_source.catalog.empty() && s.coordinates != spacetime_coordinates())
    throw SchemaError("/coordinates", "catalog metrics use the coordinates t, x, y, z");
  s.xi_source = read_field(o.get("xi"), "/xi");
  if (o.has("V")) s.v_source = read_field(o.get("V"), "/V");
  if (o.has("fluid")) s.fluid_source = read_fluid(o.get("fluid"));
  if (o.has("soliton")) s.soliton_source = read_soliton(o.get("soliton"));
  s.plan_source = read_plan(o.get("plan"), s.coordinates);

  s.tolerance = default_tolerance();
  if (o.has("numerics")) {
    Object n(o.get("numerics"), "/numerics", {"h", "richardson", "tolerance", "singular_threshold"});
    s.numerics.h = n.number("h", s.numerics.h);
    if (!(s.numerics.h > 0.0)) throw SchemaError("/numerics/h", "step must be positive");
    s.numerics.richardson = n.boolean("richardson", s.numerics.richardson);
    s.numerics.singular_threshold = n.number("singular_threshold", s.numerics.singular_threshold);
    if (!(s.numerics.singular_threshold >= 0.0))
      throw SchemaError("/numerics/singular_threshold", "must be non-negative");
    if (n.has("tolerance")) {
      s.tolerance = n.number("tolerance");
      s.tolerance_from_file = true;
      if (!(s.tolerance > 0.0)) throw SchemaError("/numerics/tolerance", "must be positive");
    }
  }

  if (o.has("expect")) {
    const json& e = o.get("expect");
    if (!e.is_array()) throw SchemaError("/expect", "expected an array of strings");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string ip = join_pointer("/expect", i);
      if (!e[i].is_string()) throw SchemaError(ip, "expected a string");
      const std::string what = e[i].get<std::string>();
      if (what != "torse_forming" && what != "soliton" && what != "dual_form")
        throw SchemaError(ip, "unknown expectation '" + what + "' (torse_forming, soliton, dual_form)");
      s.expect.push_back(what);
    }
  }

  build(s);
  return s;
}

ordered scalar_json(const ScalarSource& s) {
  if (const double* d = std::get_if<double>(&s)) return *d;
  return std::get<std::string>(s);
}

ordered field_json(const FieldSource& f) {
  ordered out;
  if (f.gradient)
    out["gradient"] = *f.gradient;
  else
    out["components"] = f.components;
  return out;
}

}  // namespace

bool Scenario::expects(std::string_view what) const {
  return std::find(expect.begin(), expect.end(), what) != expect.end();
}

double default_tolerance() {
  if (const char* env = std::getenv("SOLITONLAB_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v > 0.0) return v;
  }
  return 1e-5;
}

Scenario load_scenario_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return read(root);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("cannot read scenario file '" + path.string() + "'");
  return load_scenario_text(buf.str());
}

std::string scenario_echo(const Scenario& s) {
  ordered root;
  root["schema_version"] = scenario_schema_version;
  root["name"] = s.name;
  root["coordinates"] = s.coordinates;

  ordered metric;
  if (s.metric_source.catalog.empty()) {
    metric["components"] = s.metric_source.components;
  } else {
    metric["catalog"] = s.metric_source.catalog;
    if (s.metric_source.hubble) metric["H"] = *s.metric_source.hubble;
    if (s.metric_source.scale_factor) metric["q"] = *s.metric_source.scale_factor;
  }
  root["metric"] = metric;
  root["xi"] = field_json(s.xi_source);
  if (s.v_source) root["V"] = field_json(*s.v_source);

  if (s.fluid_source) {
    ordered f;
    f["kappa"] = s.fluid_source->kappa;
    f["lambda"] = scalar_json(s.fluid_source->lambda);
    if (s.fluid_source->fit_from_ricci) {
      f["fit_from_ricci"] = true;
    } else {
      f["sigma"] = scalar_json(s.fluid_source->sigma);
      f["rho"] = scalar_json(s.fluid_source->rho);
    }
    root["fluid"] = f;
  }
  if (s.soliton_source) {
    const SolitonSource& src = *s.soliton_source;
    ordered so;
    so["family"] = std::string(family_name(src.family));
    so["alpha"] = src.alpha;
    so["beta"] = src.beta;
    so["p"] = scalar_json(src.p);
    if (src.Lambda) so["Lambda"] = *src.Lambda;
    if (src.mu) so["mu"] = *src.mu;
    so["convention"] = std::string(convention_name(src.convention));
    root["soliton"] = so;
  }

  ordered plan;
  if (!s.plan_source.points.empty()) plan["points"] = s.plan_source.points;
  if (!s.plan_source.grid.empty()) {
    ordered grid;
    for (const GridAxis& a : s.plan_source.grid)
      grid[a.coordinate] = ordered{{"from", a.from}, {"to", a.to}, {"count", a.count}};
    plan["grid"] = grid;
  }
  root["plan"] = plan;

  ordered numerics;
  numerics["h"] = s.numerics.h;
  numerics["richardson"] = s.numerics.richardson;
  numerics["singular_threshold"] = s.numerics.singular_threshold;
  if (s.tolerance_from_file) numerics["tolerance"] = s.tolerance;
  root["numerics"] = numerics;
  if (!s.expect.empty()) root["expect"] = s.expect;
  return root.dump();
}

Scenario with_parameter(const Scenario& base, const std::string& name, double value) {
  Scenario s = base;
  auto need_soliton = [&]() -> SolitonSource& {
    if (!s.soliton_source) throw SchemaError("/soliton", "parameter '" + name + "' needs a soliton section");
    return *s.soliton_source;
  };
  auto need_fluid = [&]() -> FluidSource& {
    if (!s.fluid_source) throw SchemaError("/fluid", "parameter '" + name + "' needs a fluid section");
    return *s.fluid_source;
  };
  if (name == "alpha") {
    need_soliton().alpha = value;
  } else if (name == "beta") {
    need_soliton().beta = value;
  } else if (name == "p") {
    need_soliton().p = value;
  } else if (name == "Lambda") {
    need_soliton().Lambda = value;
  } else if (name == "mu") {
    need_soliton().mu = value;
  } else if (name == "kappa") {
    if (!(value > 0.0)) throw SchemaError("/fluid/kappa", "kappa must be positive");
    need_fluid().kappa = value;
  } else if (name == "lambda") {
    need_fluid().lambda = value;
  } else if (name == "sigma" || name == "rho") {
    FluidSource& f = need_fluid();
    if (f.fit_from_ricci) throw SchemaError("/fluid", "sigma and rho are fitted in this scenario");
    (name == "sigma" ? f.sigma : f.rho) = value;
  } else if (name == "H") {
    if (s.metric_source.catalog != "de_sitter")
      throw SchemaError("/metric", "parameter 'H' needs the de_sitter metric");
    s.metric_source.hubble = value;
  } else if (name == "h") {
    if (!(value > 0.0)) throw SchemaError("/numerics/h", "step must be positive");
    s.numerics.h = value;
  } else if (name == "tolerance") {
    if (!(value > 0.0)) throw SchemaError("/numerics/tolerance", "must be positive");
    s.tolerance = value;
    s.tolerance_from_file = true;
  } else {
    throw SchemaError("", "unknown sweep parameter '" + name + "'");
  }
  build(s);
  return s;
}

}  // namespace solitonlab
