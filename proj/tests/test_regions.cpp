#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "rbq/errors.hpp"
#include "rbq/regions.hpp"

using namespace rbq;

namespace {

Mat2 diag(Complex a, Complex b) {
  Mat2 m;
  m << a, 0, 0, b;
  return m;
}

const Mat2 kId = Mat2::Identity();

}  // namespace

TEST_CASE("membership examples") {
  const Vec2 s(std::sqrt(0.5), Complex(0, std::sqrt(0.5)));
  for (double eps : {1e-9, 1e-3, 0.5}) {
    CHECK(in_U(kId, eps, s, s));
    CHECK(in_S(kId, eps, s, s));
  }
  CHECK_FALSE(in_U(kId, 1.0, Vec2(0, 0), Vec2(0, 0)));
  CHECK_FALSE(in_S(kId, 1.0, Vec2(0, 0), Vec2(0, 0)));
  CHECK(in_S(kId, 1.0 + 1e-12, Vec2(0, 0), Vec2(0, 0)));
  const GroupElement r(diag(-1, 1));
  const double eps = 0.1;
  const Vec2 z(0, 1.0 - eps / 4);
  CHECK(in_U(RegionQuery{r, eps, BallPoint(z), BallPoint(z)}));
  CHECK_THROWS_AS(in_U(RegionQuery{r, 0.0, BallPoint(z), BallPoint(z)}), Error);
}

TEST_CASE("witness pairs") {
  const GroupElement r(diag(-1, 1));
  const auto p = witness_pair(GroupElement::identity(), r, 0.1);
  CHECK((p.z - Vec2(0, 0.975)).norm() < 1e-15);
  CHECK((p.w - p.z).norm() == 0.0);
  CHECK(in_U(r.matrix(), 0.1, p.z, p.w));
  CHECK(in_U(kId, 0.1, p.z, p.w));

  const auto g = family_G(2, 1);
  for (double eps : {0.01, 0.1, 2.0})
    for (auto ri : g.reflections())
      for (const auto& l : g.elements()) {
        const auto q = witness_pair(l, g.element(ri), eps);
        CHECK(in_U((l * g.element(ri)).matrix(), eps, q.z, q.w));
        CHECK(in_U(l.matrix(), eps, q.z, q.w));
      }
  CHECK_THROWS_AS(witness_pair(GroupElement::identity(), GroupElement::identity(), 0.1), Error);
}

TEST_CASE("nesting audit") {
  const auto trivial = close_generators({GroupElement::identity()});
  const auto t = nesting_audit(trivial, 0.05, 100000, 42);
  CHECK(t.passed());
  const auto g = family_G(2, 1);
  for (double eps : {0.05, 0.1}) {
    const auto rep = nesting_audit(g, eps, 20000, 7);
    CHECK(rep.passed());
    CHECK(rep.check("U(eps) in S(3eps)").tested > 1000);
    CHECK(rep.check("S(3eps) in U(12eps)").tested > 1000);
  }
  // below eps = 1/24 the radius 12 eps is too small; the corrected radius holds
  const auto small = nesting_audit(g, 0.01, 20000, 7);
  CHECK(small.check("U(eps) in S(3eps)").violations == 0);
  CHECK(small.check("S(3eps) in U(12eps)").violations > 0);
  CHECK(small.check("S(3eps) in U(max(12eps,sqrt(6eps)))").violations == 0);
  const auto w = *small.check("S(3eps) in U(12eps)").witness;
  bool found = false;
  for (const auto& e : g.elements())
    found = found || (in_S(e.matrix(), 0.03, w.z, w.w) && !in_U(e.matrix(), 0.12, w.z, w.w));
  CHECK(found);
}

TEST_CASE("explicit counterexample to the 12 eps radius") {
  const Vec2 z(1, 0), w(std::cos(0.2), std::sin(0.2));
  CHECK(in_S(kId, 0.03, z, w));
  CHECK_FALSE(in_U(kId, 0.12, z, w));
}

TEST_CASE("disjointness search") {
  const auto g = family_G(2, 2);
  std::size_t minus = g.order();
  for (std::size_t i = 0; i < g.order(); ++i)
    if ((g.element(i).matrix() + kId).cwiseAbs().maxCoeff() < 1e-12) minus = i;
  REQUIRE(minus < g.order());
  const auto res = disjointness_search(g, minus, 0, kDefaultEpsGrid, 20000, 3);
  REQUIRE(res.largest_clear_eps);
  CHECK(*res.largest_clear_eps > 0);
  CHECK_THROWS_AS(disjointness_search(g, 1, 1, kDefaultEpsGrid, 10, 3), Error);
  CHECK_THROWS_AS(disjointness_search(g, g.reflections().front(), 0, kDefaultEpsGrid, 10, 3), Error);
}

TEST_CASE("triple intersections") {
  const auto g = family_G(2, 1);
  const auto rep = triple_intersection_audit(g, 0.1, 100000, 42);
  CHECK(rep.passed());
  CHECK(rep.checks.front().violations == 0);
  const auto c3 = cyclic_reflection_group(3, Vec2(1, 0));
  for (double eps : {0.01, 0.1}) {
    const auto r3 = triple_intersection_audit(c3, eps, 2000, 42);
    CHECK(r3.check("order>=3 witness memberships").tested == 9);
    CHECK(r3.check("order>=3 witness memberships").violations == 0);
  }
  CHECK(triple_intersection_audit(close_generators({GroupElement::identity()}), 0.1, 1000, 1).passed());
}

TEST_CASE("displacement constants") {
  const auto g = family_G(2, 1);
  const auto dc = displacement_constants(g);
  CHECK(dc.C1 == doctest::Approx(2.0));
  CHECK(dc.C2 == doctest::Approx(2.0));
  const auto c3 = displacement_constants(cyclic_reflection_group(3, Vec2(1, 0)));
  CHECK(c3.C1 == doctest::Approx(std::sqrt(3.0)));
  const auto mixed = displacement_constants(family_G(4, 1));
  CHECK(mixed.C1 < mixed.C2);
  CHECK_THROWS_AS(displacement_constants(close_generators({GroupElement::identity()})), Error);

  Rng rng(8);
  for (auto [m, l] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 2}}) {
    const auto grp = family_G(m, l);
    for (const auto& e : displacement_constants(grp).per_reflection) {
      const auto info = *grp.reflection_info(e.index);
      for (int t = 0; t < 200; ++t) {
        const Vec2 z = rng.ball();
        const double ratio = (grp.element(e.index).apply(z) - z).norm() / std::abs(inner(z, info.root));
        CHECK(std::abs(ratio - e.constant) <= 1e-12);
      }
    }
  }
}

TEST_CASE("slab audit") {
  const GroupElement r(diag(-1, 1));
  const auto rep = slab_audit(r, 0.05, 50000, 42);
  CHECK(rep.passed());
  CHECK(rep.checks.front().tested > 1000);
  const auto c3 = cyclic_reflection_group(3, Vec2(1, 0));
  for (auto i : c3.reflections()) CHECK(slab_audit(c3.element(i), 0.02, 20000, 1).passed());
}

TEST_CASE("membership symmetry and unitary transport") {
  Rng rng(12);
  const auto g = family_G(3, 1);
  const double eps = 0.1;
  for (int t = 0; t < 2000; ++t) {
    const std::size_t ri = g.reflections()[rng.index(g.reflections().size())];
    const Mat2 r = g.element(ri).matrix();
    const auto p = sample_near_hyperplane(rng, g.reflection_info(ri)->root, t % 2 ? r : kId, eps, eps);
    const bool a = in_U(r, eps, p.z, p.w) && in_U(kId, eps, p.z, p.w);
    const bool b = in_U(r.adjoint(), eps, p.w, p.z) && in_U(kId, eps, p.w, p.z);
    CHECK(a == b);
    const Mat2 ge = g.element(rng.index(g.order())).matrix(), he = g.element(rng.index(g.order())).matrix();
    const auto q = sample_near_U(rng, ge, eps);
    const bool lhs = in_U(ge, eps, q.z, q.w) && in_U(he, eps, q.z, q.w);
    const Vec2 hz = he * q.z;
    const bool rhs = in_U(ge * he.adjoint(), eps, hz, q.w) && in_U(kId, eps, hz, q.w);
    // equal up to rounding at the region boundary
    if (lhs != rhs)
      CHECK(std::min(std::abs(u_value(ge, q.z, q.w) - eps), std::abs(u_value(he, q.z, q.w) - eps)) < 1e-12);
  }
}
