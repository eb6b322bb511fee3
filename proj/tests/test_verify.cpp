#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rbq/errors.hpp"
#include "rbq/group_spec.hpp"
#include "rbq/verify.hpp"

using namespace rbq;

namespace {

ReflectionGroup trivial() { return group_from_json({{"family", "trivial"}}).group; }

ReflectionGroup diag_reflection() { return cyclic_reflection_group(2, Vec2(1, 0)); }

}  // namespace

TEST_CASE("trivial group has R identically one") {
  const auto g = trivial();
  for (double p : {1.1, 2.0, 4.0}) {
    const auto report = bound_ratio_report(g, p, default_strategies(g, 5000, 42));
    CHECK(report.sup_ratio == 1.0);
    for (const auto& s : report.per_stratum)
      if (s.count) CHECK(s.sup_ratio == 1.0);
    CHECK(report.failures == 0);
  }
}

TEST_CASE("p = 2 ratio never exceeds one") {
  for (const auto& g : {family_G(2, 1), family_G(2, 2), cyclic_reflection_group(4, Vec2(1, 0))}) {
    const auto report = bound_ratio_report(g, 2.0, default_strategies(g, 20000, 7));
    CHECK(report.sup_ratio <= 1.0);
    REQUIRE(report.argmax);
    const KernelEvaluator ev(g);
    const double again = bound_ratio(ev, report.argmax->z, report.argmax->w);
    CHECK(std::abs(again - report.sup_ratio) <= 1e-10 * report.sup_ratio);
  }
}

TEST_CASE("sup is the max over strata and argmax reproduces") {
  const auto g = family_G(2, 1);
  KernelConfig cfg;
  cfg.p = 4.0;
  const auto report = bound_ratio_report(g, 4.0, default_strategies(g, 20000, 3), cfg);
  double best = 0.0;
  for (const auto& s : report.per_stratum) best = std::max(best, s.sup_ratio);
  CHECK(best == report.sup_ratio);
  CHECK(std::isfinite(report.sup_ratio));
  const KernelEvaluator ev(g, cfg);
  const double again = bound_ratio(ev, report.argmax->z, report.argmax->w);
  CHECK(std::abs(again - report.sup_ratio) <= 1e-10 * report.sup_ratio);
}

TEST_CASE("reports do not depend on the worker count") {
  const auto g = family_G(2, 2);
  setenv("RBQ_WORKERS", "1", 1);
  const auto a = bound_ratio_report(g, 4.0, default_strategies(g, 30000, 11));
  setenv("RBQ_WORKERS", "5", 1);
  const auto b = bound_ratio_report(g, 4.0, default_strategies(g, 30000, 11));
  unsetenv("RBQ_WORKERS");
  CHECK(a.sup_ratio == b.sup_ratio);
  CHECK(a.samples == b.samples);
  REQUIRE(a.per_stratum.size() == b.per_stratum.size());
  for (std::size_t i = 0; i < a.per_stratum.size(); ++i) {
    CHECK(a.per_stratum[i].sup_ratio == b.per_stratum[i].sup_ratio);
    CHECK(a.per_stratum[i].count == b.per_stratum[i].count);
  }
}

TEST_CASE("R invariance") {
  for (const auto& g : {family_G(2, 1), cyclic_reflection_group(4, Vec2(1, 0))})
    for (double p : {1.1, 2.0, 4.0}) {
      const auto r = r_invariance(g, p, 3000, 5);
      CHECK(r.tested > 2500);
      CHECK(r.group_residual < 1e-10);
      CHECK(r.constant_residual < 1e-14);
      CHECK(r.normalization_residual < 1e-14);
    }
}

TEST_CASE("series identity residual") {
  for (int m : {2, 3, 4, 6}) {
    const auto r = series_residual(m, 2000, 42);
    CHECK(r.max_residual < 1e-10);
    CHECK(r.zero_points > 0);
    CHECK(r.zero_point_max_abs < 1e-14);
  }
}

TEST_CASE("region bound audit") {
  SUBCASE("trivial group") {
    const auto audit = region_bound_audit(trivial(), 4.0, 0.1, 2000, 1);
    REQUIRE(audit.reports.size() == 1);
    CHECK(audit.reports[0].sup_ratio == 1.0);
  }
  SUBCASE("G(2,2,2) reaches every region") {
    const auto audit = region_bound_audit(family_G(2, 2), 4.0, 0.1, 4000, 1);
    CHECK(audit.empty_regions.empty());
    for (const auto& r : audit.reports) CHECK(std::isfinite(r.sup_ratio));
  }
}

TEST_CASE("test function families") {
  const auto fam = builtin_family();
  CHECK(fam.size() == 15 + 3);
  const Vec2 w(Complex(0.3, 0.1), Complex(-0.2, 0.4));
  CHECK(std::abs(find_function(fam, "w1^1w2^0")(w) - w(0)) < 1e-15);
  CHECK(std::abs(find_function(fam, "w1^0w2^0")(w) - 1.0) < 1e-15);
  CHECK_THROWS_AS(find_function(fam, "nope"), Error);
  CHECK(builtin_family(42)[16].terms[3].coeff == builtin_family(42)[16].terms[3].coeff);
  const auto jf = jacobian_family(family_G(2, 2));
  CHECK(jf[0].degree() == 2);
}

TEST_CASE("operator reproduces holomorphic functions") {
  const auto fam = builtin_family();
  QuadratureSpec spec;
  spec.nodes = 100000;
  const Vec2 z(Complex(0.4, 0.2), Complex(-0.1, 0.5));
  const auto g = trivial();
  SUBCASE("constant") {
    const auto r = operator_apply(g, find_function(fam, "w1^0w2^0"), z, spec);
    CHECK(std::abs(r.value - 1.0) <= 3 * r.std_error);
  }
  SUBCASE("w1") {
    const auto r = operator_apply(g, find_function(fam, "w1^1w2^0"), z, spec);
    CHECK(std::abs(r.value - z(0)) <= 3 * r.std_error);
  }
  SUBCASE("skew function for diag(-1,1)") {
    const auto r = operator_apply(diag_reflection(), find_function(fam, "w1^1w2^0"), z, spec);
    CHECK(std::abs(r.value - z(0)) <= 3 * r.std_error);
  }
  SUBCASE("symmetric function is annihilated") {
    const auto r = operator_apply(diag_reflection(), find_function(fam, "w1^0w2^1"), z, spec);
    CHECK(std::abs(r.value) <= 3 * r.std_error + 1e-12);
  }
}

TEST_CASE("skew symmetrizer") {
  const auto fam = builtin_family();
  const Vec2 z(Complex(0.4, 0.2), Complex(-0.1, 0.5));
  CHECK(std::abs(skew_symmetrize(diag_reflection(), find_function(fam, "w1^1w2^0"), z) - z(0)) < 1e-15);
  CHECK(std::abs(skew_symmetrize(diag_reflection(), find_function(fam, "w1^0w2^1"), z)) < 1e-15);
}

TEST_CASE("weighted norm scan") {
  QuadratureSpec spec;
  spec.nodes = 40000;
  SUBCASE("trivial group ratio one") {
    const auto t = weighted_norm_scan(trivial(), {1.5, 2.0, 3.0}, builtin_family(), spec);
    for (const auto& c : t.cells) CHECK(c.ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("G(2,2,2) finite and contracting at p = 2") {
    const auto t = weighted_norm_scan(family_G(2, 2), {1.1, 1.5, 2.0, 3.0, 5.0}, builtin_family(), spec);
    CHECK_FALSE(t.any_unstable());
    CHECK(std::isfinite(t.max_ratio()));
    for (const auto& c : t.cells)
      if (c.p == 2.0) CHECK(c.ratio <= 1.0 + 3 * c.rel_error);
  }
}

TEST_CASE("symmetry suite") {
  for (const auto& g : {trivial(), family_G(2, 1), family_G(3, 3)}) {
    const auto r = symmetry_suite(g, 4000, 42);
    for (const auto& c : r.checks) {
      INFO(g.label() << " " << c.name << " " << c.max_residual);
      CHECK(c.violations == 0);
    }
    CHECK(r.mutation_detected);
    CHECK(r.passed());
  }
}

TEST_CASE("intersection sups agree with their transported reflection regions") {
  const auto g = family_G(2, 1);
  const auto audit = region_bound_audit(g, 4.0, 0.1, 20000, 42);
  auto sup = [&](const std::string& name) {
    for (const auto& r : audit.reports)
      if (r.region == name) return r.sup_ratio;
    FAIL("missing region " << name);
    return 0.0;
  };
  int compared = 0;
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t h = 0; h < g.order(); ++h) {
      const std::size_t q = g.product_index(g.inverse_index(h), x);
      if (h == x || !g.reflection_info(q)) continue;
      const std::size_t r = g.product_index(x, g.inverse_index(h));
      const double a = sup("U_g[" + std::to_string(x) + "]&U_h[" + std::to_string(h) + "]");
      const double b = sup("U_r[" + std::to_string(r) + "]&U_id");
      CHECK(a <= 2.0 * b);
      CHECK(b <= 2.0 * a);
      ++compared;
    }
  CHECK(compared == 32);
}
