#include "rbq/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rbq {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ojson json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

namespace {

ojson number(double x) { return json_number(x); }

std::string point_text(const Vec2& v) {
  return format_double(v(0).real()) + " " + format_double(v(0).imag()) + " " + format_double(v(1).real()) + " " +
         format_double(v(1).imag());
}

}  // namespace

ojson report_header(const std::string& command, const std::string& spec_hash, std::uint64_t seed, ojson params) {
  ojson h;
  h["tool"] = "rbq";
  h["version"] = kVersion;
  h["command"] = command;
  h["spec_hash"] = spec_hash;
  h["seed"] = seed;
  h["params"] = std::move(params);
  return h;
}

ojson to_json(const Complex& c) { return ojson::array({number(c.real()), number(c.imag())}); }

ojson to_json(const Vec2& v) { return ojson::array({to_json(v(0)), to_json(v(1))}); }

ojson to_json(const std::optional<PointPair>& pair) {
  if (!pair) return nullptr;
  return ojson{{"z", to_json(pair->z)}, {"w", to_json(pair->w)}};
}

ojson group_summary(const ReflectionGroup& group) {
  ojson out;
  out["label"] = group.label();
  out["order"] = group.order();
  out["exponent"] = group.exponent();
  out["exact"] = group.is_exact();
  if (group.is_exact()) out["conductor"] = group.conductor();
  out["reflections"] = group.reflections().size();
  ojson hyperplanes = ojson::array();
  for (const auto& h : group.hyperplanes()) {
    ojson entry;
    entry["root"] = to_json(h.root);
    entry["multiplicity"] = h.multiplicity;
    entry["members"] = h.members;
    ojson angles = ojson::array();
    for (double a : h.angles) angles.push_back(number(a));
    entry["angles"] = angles;
    hyperplanes.push_back(entry);
  }
  out["hyperplanes"] = hyperplanes;
  ojson dets = ojson::array();
  for (const auto& g : group.elements()) dets.push_back(to_json(g.det()));
  out["determinants"] = dets;
  return out;
}

ojson to_json(const RegionCheck& check) {
  return {{"name", check.name},         {"binding", check.binding},
          {"tested", check.tested},     {"violations", check.violations},
          {"worst_margin", number(check.worst_margin)}, {"witness", to_json(check.witness)}};
}

ojson to_json(const RegionReport& report) {
  ojson checks = ojson::array();
  for (const auto& c : report.checks) checks.push_back(to_json(c));
  return {{"audit", report.audit},   {"group", report.group}, {"epsilon", number(report.epsilon)},
          {"samples", report.samples}, {"seed", report.seed}, {"passed", report.passed()},
          {"checks", checks},        {"notes", report.notes}};
}

ojson to_json(const DisjointnessResult& result) {
  ojson hits = ojson::array();
  for (const auto& [eps, n] : result.hits) hits.push_back({{"epsilon", number(eps)}, {"hits", n}});
  ojson out;
  out["largest_clear_eps"] = result.largest_clear_eps ? ojson(number(*result.largest_clear_eps)) : ojson(nullptr);
  out["grid"] = hits;
  out["witness"] = to_json(result.witness);
  if (result.witness) out["witness_eps"] = number(result.witness_eps);
  return out;
}

ojson to_json(const DisplacementConstants& constants) {
  ojson per = ojson::array();
  for (const auto& e : constants.per_reflection)
    per.push_back({{"index", e.index}, {"theta", number(e.theta)}, {"constant", number(e.constant)}});
  return {{"C1", number(constants.C1)}, {"C2", number(constants.C2)}, {"per_reflection", per}};
}

ojson to_json(const BoundReport& report) {
  ojson strata = ojson::array();
  for (const auto& s : report.per_stratum)
    strata.push_back({{"k", s.k}, {"count", s.count}, {"sup_ratio", number(s.sup_ratio)}, {"argmax", to_json(s.argmax)}});
  ojson out;
  out["group"] = report.group;
  out["region"] = report.region;
  out["p"] = number(report.p);
  out["strategies"] = report.strategies;
  out["samples"] = report.samples;
  out["failures"] = report.failures;
  out["empty"] = report.empty;
  out["sup_ratio"] = number(report.sup_ratio);
  out["argmax"] = to_json(report.argmax);
  out["per_stratum"] = strata;
  return out;
}

ojson to_json(const InvarianceReport& report) {
  return {{"tested", report.tested},
          {"group_residual", number(report.group_residual)},
          {"constant_residual", number(report.constant_residual)},
          {"normalization_residual", number(report.normalization_residual)}};
}

ojson to_json(const SeriesResidual& result) {
  return {{"m", result.m},
          {"samples", result.samples},
          {"max_residual", number(result.max_residual)},
          {"argmax", to_json(result.argmax)},
          {"zero_points", result.zero_points},
          {"zero_point_max_abs", number(result.zero_point_max_abs)}};
}

ojson to_json(const RegionBoundAudit& audit) {
  ojson reports = ojson::array();
  for (const auto& r : audit.reports) reports.push_back(to_json(r));
  return {{"epsilon", number(audit.epsilon)}, {"empty_regions", audit.empty_regions}, {"regions", reports}};
}

ojson to_json(const QuadratureResult& result) {
  return {{"value", to_json(result.value)},
          {"std_error", number(result.std_error)},
          {"abs_integral", number(result.abs_integral)},
          {"nodes", result.nodes}};
}

ojson to_json(const ScanTable& table) {
  ojson cells = ojson::array();
  for (const auto& c : table.cells)
    cells.push_back({{"p", number(c.p)},
                     {"function", c.function},
                     {"norm_Qf", number(c.norm_Qf)},
                     {"norm_f", number(c.norm_f)},
                     {"ratio", number(c.ratio)},
                     {"rel_error", number(c.rel_error)},
                     {"unstable", c.unstable},
                     {"excluded", c.excluded}});
  return {{"group", table.group},
          {"nodes", table.nodes},
          {"any_unstable", table.any_unstable()},
          {"max_ratio", number(table.max_ratio())},
          {"cells", cells}};
}

ojson to_json(const SymmetryReport& report) {
  ojson checks = ojson::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"tested", c.tested},
                      {"violations", c.violations},
                      {"max_residual", number(c.max_residual)}});
  return {{"group", report.group},
          {"passed", report.passed()},
          {"mutation_detected", report.mutation_detected},
          {"checks", checks}};
}

ojson to_json(const MPoly& poly) {
  ojson terms = ojson::array();
  for (const auto& [e, c] : poly.terms()) terms.push_back({{"exps", e}, {"coeff", c.to_strings()}, {"N", poly.conductor()}});
  return {{"N", poly.conductor()}, {"total_degree", poly.total_degree()}, {"term_count", terms.size()}, {"terms", terms}};
}

ojson to_json(const MResult& result) {
  return {{"divisions", result.divisions},
          {"Q_terms", result.Q.size()},
          {"Q_degree", result.Q.total_degree()},
          {"M_terms", result.M.size()},
          {"M_degree", result.M.total_degree()},
          {"M", to_json(result.M)}};
}

ojson to_json(const BFactorization& result) {
  ojson dir = ojson::array();
  for (const auto& c : result.direction) dir.push_back(c.to_strings());
  return {{"reflection_index", result.reflection_index},
          {"power", result.power},
          {"direction", dir},
          {"representatives", result.representatives.size()},
          {"numerator_terms", result.numerator.size()},
          {"denominator_terms", result.denominator.size()},
          {"P_H", to_json(result.P_H)},
          {"Q_H", to_json(result.Q_H)}};
}

std::string bound_csv(const BoundReport& report) {
  std::ostringstream out;
  out << "stratum,count,sup_ratio,argmax_z,argmax_w\n";
  for (const auto& s : report.per_stratum) {
    out << s.k << ',' << s.count << ',' << format_double(s.sup_ratio) << ',';
    if (s.argmax) out << point_text(s.argmax->z) << ',' << point_text(s.argmax->w);
    else out << ',';
    out << '\n';
  }
  return out.str();
}

std::string scan_csv(const ScanTable& table) {
  std::ostringstream out;
  out << "p,function,norm_Qf,norm_f,ratio,rel_error,unstable,excluded\n";
  for (const auto& c : table.cells)
    out << format_double(c.p) << ',' << c.function << ',' << format_double(c.norm_Qf) << ',' << format_double(c.norm_f)
        << ',' << format_double(c.ratio) << ',' << format_double(c.rel_error) << ',' << c.unstable << ',' << c.excluded
        << '\n';
  return out.str();
}

}  // namespace rbq
