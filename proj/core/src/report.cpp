#include "solitonlab/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <json.hpp>

namespace solitonlab {

namespace {

using ordered = nlohmann::ordered_json;

std::string_view mode_name(SuiteMode m) { return m == SuiteMode::analyze ? "analyze" : "verify"; }

ordered vector_json(const Point& p) {
  ordered a = ordered::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

ordered report_json(const IdentityReport& r) {
  ordered j;
  j["schema_version"] = report_schema_version;
  j["scenario"] = ordered::parse(r.scenario_echo);
  j["mode"] = std::string(mode_name(r.mode));
  j["tolerance"] = r.tolerance;
  j["verdict"] = std::string(verdict_name(r.verdict));
  j["exit_code"] = exit_code(r);

  ordered points = ordered::array();
  for (const PointReport& pr : r.points) {
    ordered pj;
    pj["index"] = pr.index;
    pj["at"] = vector_json(pr.at);
    if (pr.error) pj["error"] = *pr.error;
    ordered ids = ordered::array();
    for (const IdentityResult& id : pr.identities)
      ids.push_back({{"name", id.name},
                     {"residual", id.residual},
                     {"tolerance", id.tolerance},
                     {"asserted", id.asserted},
                     {"passed", id.passed()}});
    pj["identities"] = ids;
    ordered derived = ordered::object();
    for (const DerivedValue& d : pr.derived) derived[d.name] = d.value;
    pj["derived"] = derived;
    points.push_back(pj);
  }
  j["points"] = points;

  ordered derived = ordered::array();
  for (const DerivedSummary& d : r.derived)
    derived.push_back({{"name", d.name}, {"mean", d.mean}, {"spread", d.spread}, {"samples", d.samples}});
  j["derived"] = derived;

  if (r.classification)
    j["classification"] = {{"Lambda", r.classification->Lambda},
                           {"class", std::string(class_name(r.classification->kind))},
                           {"convention", std::string(convention_name(r.classification->convention))},
                           {"tolerance", r.classification->tolerance}};
  else
    j["classification"] = nullptr;

  if (r.conformal_killing)
    j["conformal_killing"] = {{"category", std::string(ckv_name(r.conformal_killing->category))},
                              {"phi", r.conformal_killing->phi},
                              {"residual", r.conformal_killing->residual},
                              {"tolerance", r.conformal_killing->tolerance}};
  else
    j["conformal_killing"] = nullptr;

  if (r.einstein)
    j["einstein"] = {{"theta", r.einstein->theta}, {"residual", r.einstein->residual}};
  else
    j["einstein"] = nullptr;

  ordered health;
  health["ricci_asymmetry"] = r.health.ricci_asymmetry;
  if (r.health.convergence_ratio)
    health["convergence_ratio"] = *r.health.convergence_ratio;
  else
    health["convergence_ratio"] = nullptr;
  j["health"] = health;
  j["applicability"] = r.applicability;
  j["warnings"] = r.warnings;
  return j;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void text_report(std::ostringstream& out, const IdentityReport& r) {
  out << "scenario " << r.scenario_name << " (" << mode_name(r.mode) << ", tolerance "
      << fmt(r.tolerance) << ")\n";
  out << "verdict: " << verdict_name(r.verdict) << " (exit " << exit_code(r) << ")\n";

  // worst residual per identity across points
  struct Worst {
    std::string name;
    double residual;
    double tolerance;
    bool asserted;
    std::size_t point;
  };
  std::vector<Worst> worst;
  for (const PointReport& pr : r.points) {
    for (const IdentityResult& id : pr.identities) {
      auto it = std::find_if(worst.begin(), worst.end(), [&](const Worst& w) { return w.name == id.name; });
      if (it == worst.end()) {
        worst.push_back({id.name, id.residual, id.tolerance, id.asserted, pr.index});
      } else if (id.residual > it->residual) {
        it->residual = id.residual;
        it->point = pr.index;
      }
    }
  }
  out << "\nidentities (worst over " << r.points.size() << " points):\n";
  for (const Worst& w : worst) {
    const char* mark = w.residual <= w.tolerance ? "ok  " : (w.asserted ? "FAIL" : "info");
    out << "  " << mark << "  " << w.name << "  " << fmt(w.residual) << " (tol " << fmt(w.tolerance)
        << ", point " << w.point << (w.asserted ? "" : ", informational") << ")\n";
  }
  if (!r.derived.empty()) {
    out << "\nderived:\n";
    for (const DerivedSummary& d : r.derived)
      out << "  " << d.name << " = " << fmt(d.mean) << " (spread " << fmt(d.spread) << ")\n";
  }
  if (r.classification)
    out << "\nclassification: " << class_name(r.classification->kind) << " (Lambda = "
        << fmt(r.classification->Lambda) << ", " << convention_name(r.classification->convention)
        << ")\n";
  if (r.conformal_killing)
    out << "conformal Killing: " << ckv_name(r.conformal_killing->category) << " (residual "
        << fmt(r.conformal_killing->residual) << ")\n";
  if (r.einstein) out << "Einstein fit residual: " << fmt(r.einstein->residual) << "\n";
  out << "\nhealth: ricci asymmetry " << fmt(r.health.ricci_asymmetry) << ", convergence ratio "
      << (r.health.convergence_ratio ? fmt(*r.health.convergence_ratio) : std::string("n/a")) << "\n";
  for (const std::string& n : r.applicability) out << "note: " << n << "\n";
  for (const std::string& w : r.warnings) out << "warning: " << w << "\n";
}

}  // namespace

std::string emit_report(const IdentityReport& r, ReportFormat format, const ReportOptions& opts) {
  if (format == ReportFormat::json) {
    ordered j = report_json(r);
    if (opts.timestamp) {
      ordered out;
      out["schema_version"] = report_schema_version;
      out["timestamp"] = *opts.timestamp;
      for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "schema_version") out[it.key()] = it.value();
      return out.dump(2) + "\n";
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  if (opts.timestamp) out << "generated " << *opts.timestamp << "\n";
  text_report(out, r);
  return out.str();
}

std::string emit_sweep(const std::string& parameter, const std::vector<double>& values,
                       const std::vector<IdentityReport>& reports, ReportFormat format,
                       const ReportOptions& opts) {
  if (format == ReportFormat::json) {
    ordered arr = ordered::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      ordered entry;
      entry["parameter"] = parameter;
      entry["value"] = values[i];
      entry["report"] = report_json(reports[i]);
      arr.push_back(entry);
    }
    ordered out;
    out["schema_version"] = report_schema_version;
    if (opts.timestamp) out["timestamp"] = *opts.timestamp;
    out["sweep"] = arr;
    return out.dump(2) + "\n";
  }
  std::ostringstream out;
  if (opts.timestamp) out << "generated " << *opts.timestamp << "\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out << "== " << parameter << " = " << fmt(values[i]) << "\n";
    text_report(out, reports[i]);
    out << "\n";
  }
  return out.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace solitonlab
