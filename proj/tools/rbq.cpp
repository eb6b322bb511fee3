// rbq: command-line front end for the reflection-group Bergman kernel toolkit.
//
// Exit codes: 0 success, 1 verification failure or runtime error, 2 usage or
// input error. With --json, errors are also written to stderr as one JSON line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rbq/acceptance.hpp"
#include "rbq/errors.hpp"
#include "rbq/group_spec.hpp"
#include "rbq/kernels.hpp"
#include "rbq/regions.hpp"
#include "rbq/report.hpp"
#include "rbq/symbolic.hpp"
#include "rbq/verify.hpp"

using namespace rbq;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string spec;
  bool json = false;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string csv;
  // kernel
  double p = 2.0;
  std::string z, w;
  bool normalized = false;
  std::string which = "all";
  // factor
  std::optional<std::size_t> reflection;
  // regions
  std::string audit;
  std::optional<double> eps;
  std::uint64_t samples = 0;
  std::optional<std::size_t> element, other;
  // verify-weighted
  std::string pgrid = "1.1,1.5,2,3,5";
  std::size_t nodes = 200000;
  std::string family = "builtin";
};

Vec2 parse_point(const std::string& text, const char* name) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("--") + name + " expects four numbers re1,im1,re2,im2");
    }
  }
  if (v.size() != 4) throw UsageError(std::string("--") + name + " expects four numbers re1,im1,re2,im2");
  return Vec2(Complex(v[0], v[1]), Complex(v[2], v[3]));
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("--pgrid expects comma-separated numbers");
    }
  }
  if (out.empty()) throw UsageError("--pgrid is empty");
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

void emit(const Options& o, const ojson& doc, const std::string& human) {
  if (!o.out.empty()) write_file(o.out, doc.dump(2) + "\n");
  if (o.json) std::cout << doc.dump(2) << "\n";
  else std::cout << human;
}

std::string num(double x, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

std::string cnum(Complex c) { return num(c.real(), 10) + (c.imag() < 0 ? " - " : " + ") + num(std::abs(c.imag()), 10) + "i"; }

std::string vec_text(const Vec2& v) { return "(" + cnum(v(0)) + ", " + cnum(v(1)) + ")"; }

GroupSpec load(const Options& o) {
  if (o.spec.empty()) throw UsageError("--spec is required");
  return load_group_spec(o.spec);
}

// ---------------------------------------------------------------- commands

int cmd_group(const Options& o) {
  const auto spec = load(o);
  const auto& g = spec.group;
  ojson doc = report_header("group", spec.hash_hex(), o.seed, ojson::object());
  doc["group"] = group_summary(g);
  std::ostringstream h;
  h << "group " << g.label() << "\n";
  h << "  order        " << g.order() << "\n";
  h << "  exponent     " << g.exponent() << "\n";
  h << "  exact        " << (g.is_exact() ? "yes (conductor " + std::to_string(g.conductor()) + ")" : "no") << "\n";
  h << "  reflections  " << g.reflections().size() << "\n";
  h << "  hyperplanes  " << g.hyperplanes().size() << "\n";
  if (!g.hyperplanes().empty()) {
    h << "\n  #  multiplicity  root\n";
    for (std::size_t i = 0; i < g.hyperplanes().size(); ++i) {
      const auto& hp = g.hyperplanes()[i];
      char line[64];
      std::snprintf(line, sizeof line, "  %-2zu %-13d ", i, hp.multiplicity);
      h << line << vec_text(hp.root) << "\n";
    }
  }
  h << "\nspec hash " << spec.hash_hex() << "\n";
  emit(o, doc, h.str());
  return 0;
}

int cmd_kernel(const Options& o) {
  const auto spec = load(o);
  static const std::vector<std::string> kinds{"all", "ball", "avg", "kgp", "jac", "sum"};
  if (std::find(kinds.begin(), kinds.end(), o.which) == kinds.end())
    throw UsageError("--which must be one of ball|avg|kgp|jac|sum");
  KernelConfig cfg;
  cfg.p = o.p;
  cfg.normalized = o.normalized;
  cfg.validate();
  const BallPoint z(parse_point(o.z, "z")), w(parse_point(o.w, "w"));
  const auto& g = spec.group;
  ojson params{{"p", o.p}, {"z", to_json(z.vec())}, {"w", to_json(w.vec())}, {"normalized", o.normalized},
               {"which", o.which}};
  ojson doc = report_header("kernel", spec.hash_hex(), o.seed, params);
  ojson values;
  const bool all = o.which == "all";
  if (all || o.which == "ball") values["ball"] = to_json(ball_kernel(z, w, cfg));
  if (all || o.which == "avg") values["avg"] = to_json(averaged_kernel(g, z, w, cfg));
  if (all || o.which == "kgp") values["kgp"] = to_json(k_gp(g, z, w, cfg));
  if (all || o.which == "jac") values["jac"] = {{"z", to_json(jacobian_product(g, z, cfg))}, {"w", to_json(jacobian_product(g, w, cfg))}};
  if (all || o.which == "sum") values["sum"] = json_number(dominating_sum(g, z, w, cfg));
  doc["values"] = values;
  // value output is JSON in either mode
  std::cout << doc.dump(2) << "\n";
  if (!o.out.empty()) write_file(o.out, doc.dump(2) + "\n");
  return 0;
}

int cmd_factor(const Options& o) {
  const auto spec = load(o);
  const auto& g = spec.group;
  ojson params;
  params["reflection"] = o.reflection ? ojson(*o.reflection) : ojson(nullptr);
  ojson doc = report_header("factor", spec.hash_hex(), o.seed, params);
  std::ostringstream h;
  if (o.reflection) {
    if (*o.reflection >= g.order()) throw UsageError("--reflection index out of range");
    const auto b = compute_B_factorization(g, *o.reflection);
    doc["B"] = to_json(b);
    h << "B-factorization for reflection " << *o.reflection << " of " << g.label() << "\n"
      << "  power of each root form  " << b.power << "\n"
      << "  coset representatives    " << b.representatives.size() << "\n"
      << "  numerator terms          " << b.numerator.size() << "\n"
      << "  P_H terms                " << b.P_H.size() << "\n"
      << "  Q_H terms                " << b.Q_H.size() << "\n";
  } else {
    const auto m = compute_M(g);
    doc["M"] = to_json(m);
    h << "Q = J(z) J'(u) M for " << g.label() << "\n"
      << "  divisions  " << m.divisions << "\n"
      << "  Q          " << m.Q.size() << " terms, degree " << m.Q.total_degree() << "\n"
      << "  M          " << m.M.size() << " terms, degree " << m.M.total_degree() << "\n";
  }
  if (!o.out.empty()) h << "  written to " << o.out << "\n";
  emit(o, doc, h.str());
  return 0;
}

std::string region_text(const RegionReport& r) {
  std::ostringstream h;
  h << r.audit << " audit, " << r.group << ", eps = " << num(r.epsilon) << ", " << r.samples << " samples, seed "
    << r.seed << "\n";
  for (const auto& c : r.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-4s %-44s tested %-9llu violations %-7llu worst margin %s\n",
                  c.violations == 0 ? "ok" : (c.binding ? "FAIL" : "info"), c.name.c_str(),
                  static_cast<unsigned long long>(c.tested), static_cast<unsigned long long>(c.violations),
                  num(c.worst_margin, 4).c_str());
    h << line;
  }
  for (const auto& n : r.notes) h << "  note: " << n << "\n";
  return h.str();
}

int cmd_regions(const Options& o) {
  const auto spec = load(o);
  const auto& g = spec.group;
  const std::uint64_t samples = o.samples ? o.samples : 100000;
  const double eps = o.eps.value_or(0.05);
  if (!(eps > 0)) throw UsageError("--eps must be positive");
  ojson params{{"audit", o.audit}, {"eps", eps}, {"samples", samples}};
  ojson doc = report_header("regions", spec.hash_hex(), o.seed, params);
  std::ostringstream h;
  bool ok = true;
  if (o.audit == "nesting" || o.audit == "triple") {
    const auto rep = o.audit == "nesting" ? nesting_audit(g, eps, samples, o.seed)
                                          : triple_intersection_audit(g, eps, samples, o.seed);
    ok = rep.passed();
    doc["report"] = to_json(rep);
    h << region_text(rep);
  } else if (o.audit == "slab") {
    if (g.reflections().empty()) throw Error(ErrorKind::NoReflections, "group has no reflections");
    const auto constants = displacement_constants(g);
    std::vector<std::size_t> which = g.reflections();
    if (o.reflection) {
      if (!g.reflection_info(*o.reflection % g.order()) || *o.reflection >= g.order())
        throw UsageError("--reflection must index a reflection");
      which = {*o.reflection};
    }
    doc["constants"] = to_json(constants);
    doc["reports"] = ojson::array();
    h << "C1 = " << num(constants.C1, 12) << ", C2 = " << num(constants.C2, 12) << "\n";
    for (auto ri : which) {
      const auto rep = slab_audit(g.element(ri), eps, samples, o.seed, constants.C1);
      ok = ok && rep.passed();
      ojson entry = to_json(rep);
      entry["reflection"] = ri;
      doc["reports"].push_back(entry);
      h << "reflection " << ri << ": " << region_text(rep);
    }
  } else if (o.audit == "disjoint") {
    const std::vector<double> grid = o.eps ? std::vector<double>{*o.eps} : kDefaultEpsGrid;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (o.element || o.other) {
      if (!o.element || !o.other) throw UsageError("--element and --other go together");
      if (*o.element >= g.order() || *o.other >= g.order()) throw UsageError("element index out of range");
      pairs.emplace_back(*o.element, *o.other);
    } else {
      for (std::size_t a = 0; a < g.order(); ++a)
        for (std::size_t b = a + 1; b < g.order(); ++b) {
          const std::size_t q = g.product_index(g.inverse_index(b), a);
          if (!g.element(q).is_identity() && !g.reflection_info(q)) pairs.emplace_back(a, b);
        }
    }
    doc["pairs"] = ojson::array();
    h << "disjointness search over " << pairs.size() << " pair(s)\n";
    for (auto [a, b] : pairs) {
      const auto res = disjointness_search(g, a, b, grid, samples, o.seed);
      ojson entry = to_json(res);
      entry["g"] = a;
      entry["l"] = b;
      doc["pairs"].push_back(entry);
      h << "  (" << a << ", " << b << ") largest clear eps "
        << (res.largest_clear_eps ? num(*res.largest_clear_eps) : std::string("none")) << "\n";
    }
  } else {
    throw UsageError("--audit must be nesting, disjoint, triple or slab");
  }
  doc["passed"] = ok;
  emit(o, doc, h.str());
  return ok ? 0 : 1;
}

std::string bound_text(const BoundReport& r) {
  std::ostringstream h;
  h << "region " << r.region << ", p = " << num(r.p) << ": sup R = " << num(r.sup_ratio, 8) << " over " << r.samples
    << " samples, " << r.failures << " skipped\n";
  if (r.argmax) h << "  argmax z = " << vec_text(r.argmax->z) << "\n         w = " << vec_text(r.argmax->w) << "\n";
  if (r.region == "all") {
    h << "  stratum  count      sup\n";
    for (const auto& s : r.per_stratum) {
      char line[96];
      std::snprintf(line, sizeof line, "  %-8d %-10llu %s\n", s.k, static_cast<unsigned long long>(s.count),
                    num(s.sup_ratio, 6).c_str());
      h << line;
    }
  }
  return h.str();
}

int cmd_verify_bound(const Options& o) {
  const auto spec = load(o);
  const auto& g = spec.group;
  KernelConfig cfg;
  cfg.p = o.p;
  cfg.validate();
  const std::uint64_t samples = o.samples ? o.samples : 1000000;
  ojson params{{"p", o.p}, {"samples", samples}};
  params["eps"] = o.eps ? ojson(*o.eps) : ojson(nullptr);
  ojson doc = report_header("verify-bound", spec.hash_hex(), o.seed, params);
  const auto rep = bound_ratio_report(g, o.p, default_strategies(g, samples, o.seed), cfg);
  bool ok = std::isfinite(rep.sup_ratio) && (o.p != 2.0 || rep.sup_ratio <= 1.0);
  doc["bound"] = to_json(rep);
  std::string human = g.label() + "\n" + bound_text(rep);
  if (o.eps) {
    if (!(*o.eps > 0)) throw UsageError("--eps must be positive");
    const auto audit = region_bound_audit(g, o.p, *o.eps, std::max<std::uint64_t>(1, samples / 10), o.seed);
    for (const auto& r : audit.reports) {
      ok = ok && std::isfinite(r.sup_ratio);
      human += bound_text(r);
    }
    for (const auto& e : audit.empty_regions) human += "  no hits in " + e + "\n";
    doc["regions"] = to_json(audit);
  }
  doc["passed"] = ok;
  if (!o.csv.empty()) write_file(o.csv, bound_csv(rep));
  emit(o, doc, human);
  return ok ? 0 : 1;
}

int cmd_verify_weighted(const Options& o) {
  const auto spec = load(o);
  const auto& g = spec.group;
  const auto grid = parse_grid(o.pgrid);
  QuadratureSpec q;
  q.nodes = o.nodes;
  q.seed = o.seed;
  std::vector<TestFunction> fam;
  if (o.family == "builtin" || o.family == "both") fam = builtin_family(o.seed);
  if (o.family == "jacobian" || o.family == "both") {
    const auto j = jacobian_family(g, o.seed);
    fam.insert(fam.end(), j.begin(), j.end());
  }
  if (fam.empty()) throw UsageError("--family must be builtin, jacobian or both");
  ojson params{{"pgrid", grid}, {"nodes", o.nodes}, {"family", o.family}};
  ojson doc = report_header("verify-weighted", spec.hash_hex(), o.seed, params);
  const auto table = weighted_norm_scan(g, grid, fam, q);
  const bool ok = !table.any_unstable() && std::isfinite(table.max_ratio());
  doc["scan"] = to_json(table);
  doc["passed"] = ok;
  std::ostringstream h;
  h << g.label() << ", " << o.nodes << " nodes\n  p      function       ratio        rel.err\n";
  for (const auto& c : table.cells) {
    char line[160];
    if (c.excluded)
      std::snprintf(line, sizeof line, "  %-6s %-14s excluded (f not in L^p(sigma))\n", num(c.p).c_str(), c.function.c_str());
    else
      std::snprintf(line, sizeof line, "  %-6s %-14s %-12s %-10s%s\n", num(c.p).c_str(), c.function.c_str(),
                    num(c.ratio, 6).c_str(), num(c.rel_error, 3).c_str(), c.unstable ? " UNSTABLE" : "");
    h << line;
  }
  h << "max ratio " << num(table.max_ratio()) << "\n";
  if (!o.csv.empty()) write_file(o.csv, scan_csv(table));
  emit(o, doc, h.str());
  return ok ? 0 : 1;
}

int cmd_suite(const Options& o) {
  std::vector<CriterionResult> results;
  ojson params;
  std::string hash;
  if (o.spec.empty()) {
    results = run_acceptance(o.seed);
    params["battery"] = "acceptance";
  } else {
    const auto spec = load(o);
    hash = spec.hash_hex();
    const std::uint64_t samples = o.samples ? o.samples : 20000;
    params["battery"] = "group";
    params["samples"] = samples;
    results = group_battery(spec, o.seed, samples);
  }
  ojson doc = report_header("suite", hash, o.seed, params);
  doc["results"] = ojson::array();
  bool ok = true;
  std::ostringstream h;
  for (const auto& r : results) {
    ok = ok && r.passed;
    doc["results"].push_back(to_json(r, false));
    char head[96];
    std::snprintf(head, sizeof head, "%s %2d ", r.passed ? "PASS" : "FAIL", r.id);
    h << head << r.name << ": " << r.detail << "\n";
  }
  doc["passed"] = ok;
  emit(o, doc, h.str());
  return ok ? 0 : 1;
}

bool wants_json(int argc, char** argv) {
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--json") return true;
  return false;
}

void report_error(bool json, const std::string& kind, const std::string& message, int code) {
  if (json) {
    const ojson line{{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << line.dump() << "\n";
  } else {
    std::cerr << "rbq: " << message << "\n";
  }
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BadSpec:
    case ErrorKind::NotUnitary:
    case ErrorKind::NotFinite:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotReflection:
    case ErrorKind::IsIdentity:
    case ErrorKind::IsReflection:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  const bool json = wants_json(argc, argv);
  CLI::App app{"Averaged Bergman kernels of finite reflection groups in U(2)", "rbq"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool spec_required = true) {
    auto* s = sub->add_option("--spec", o.spec, "group spec JSON file");
    if (spec_required) s->required();
    sub->add_flag("--json", o.json, "print JSON instead of a table");
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
  };

  auto* group = app.add_subcommand("group", "print order, reflections and the hyperplane table");
  common(group);

  auto* kernel = app.add_subcommand("kernel", "evaluate kernels at a pair of points (JSON)");
  common(kernel);
  kernel->add_option("--p", o.p, "exponent p in (1, inf)")->capture_default_str();
  kernel->add_option("--z", o.z, "re1,im1,re2,im2")->required();
  kernel->add_option("--w", o.w, "re1,im1,re2,im2")->required();
  kernel->add_flag("--normalized", o.normalized, "include the 2/pi^2 constant");
  kernel->add_option("--which", o.which, "ball|avg|kgp|jac|sum (default: all)");

  auto* factor = app.add_subcommand("factor", "exact factorization Q = J J' M, or the B-factorization of a reflection");
  common(factor);
  factor->add_option("--reflection", o.reflection, "element index of a reflection");
  factor->add_option("--out", o.out, "write JSON to this file");

  auto* regions = app.add_subcommand("regions", "audit the boundary-diagonal regions");
  common(regions);
  regions->add_option("--audit", o.audit, "nesting|disjoint|triple|slab")->required();
  regions->add_option("--eps", o.eps, "region size (default 0.05; disjoint uses a grid unless set)");
  regions->add_option("--samples", o.samples, "samples per audit (default 100000)");
  regions->add_option("--element", o.element, "disjoint: first element index");
  regions->add_option("--other", o.other, "disjoint: second element index");
  regions->add_option("--reflection", o.reflection, "slab: one reflection index (default all)");

  auto* bound = app.add_subcommand("verify-bound", "stratified sup of |K_{G,p}| / sum_g |K(g.z,w)|");
  common(bound);
  bound->add_option("--p", o.p, "exponent p in (1, inf)")->capture_default_str();
  bound->add_option("--samples", o.samples, "total samples (default 1000000)");
  bound->add_option("--eps", o.eps, "also audit the region-restricted bounds at this eps");
  bound->add_option("--csv", o.csv, "write per-stratum CSV");

  auto* weighted = app.add_subcommand("verify-weighted", "weighted norm ratios of the skew projection");
  common(weighted);
  weighted->add_option("--pgrid", o.pgrid, "comma-separated p values")->capture_default_str();
  weighted->add_option("--nodes", o.nodes, "quadrature nodes per p")->capture_default_str();
  weighted->add_option("--family", o.family, "builtin|jacobian|both")->capture_default_str();
  weighted->add_option("--csv", o.csv, "write the table as CSV");

  auto* suite = app.add_subcommand("suite", "acceptance battery, or a per-group battery with --spec");
  common(suite, false);
  suite->add_option("--samples", o.samples, "per-group battery samples (default 20000)");
  suite->add_option("--out", o.out, "write JSON to this file");

  if (argc < 2) {
    std::cerr << app.help();
    report_error(json, "Usage", "a subcommand is required", 2);
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    report_error(json, "Usage", e.what(), 2);
    return 2;
  }

  try {
    if (*group) return cmd_group(o);
    if (*kernel) return cmd_kernel(o);
    if (*factor) return cmd_factor(o);
    if (*regions) return cmd_regions(o);
    if (*bound) return cmd_verify_bound(o);
    if (*weighted) return cmd_verify_weighted(o);
    if (*suite) return cmd_suite(o);
  } catch (const UsageError& e) {
    report_error(json, "Usage", e.what(), 2);
    return 2;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report_error(json, std::string(to_string(e.kind())), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report_error(json, "Internal", e.what(), 1);
    return 1;
  }
  return 2;
}
