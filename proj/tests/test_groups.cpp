#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <set>

#include "rbq/errors.hpp"
#include "rbq/group_spec.hpp"
#include "rbq/groups.hpp"

using namespace rbq;

namespace {

Mat2 mat(Complex a, Complex b, Complex c, Complex d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

const Mat2 kFlip = mat(-1, 0, 0, 1);
const Mat2 kSwap = mat(0, 1, 1, 0);

bool parallel(const Vec2& a, const Vec2& b) { return std::abs(std::abs(a.dot(b)) - 1.0) < 1e-10; }

// Independent brute-force enumeration of G(m,l,2) as matrices.
std::vector<Mat2> brute_G(int m, int l) {
  std::vector<Mat2> out;
  const auto th = [m](int k) { return std::polar(1.0, 2.0 * std::numbers::pi * k / m); };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if ((a + b) % l != 0) continue;
      out.push_back(mat(th(a), 0, 0, th(b)));
      out.push_back(mat(0, th(a), th(b), 0));
    }
  return out;
}

}  // namespace

TEST_CASE("closure examples") {
  CHECK(close_generators({GroupElement::identity()}).order() == 1);
  const auto g = close_generators({GroupElement(kFlip)});
  CHECK(g.order() == 2);
  CHECK(close_generators(family_G_generators(2, 1)).order() == 8);
  CHECK_THROWS_AS(GroupElement(mat(1, 0.1, 0, 1)), Error);
  try {
    close_generators({GroupElement(mat(std::polar(1.0, 1.0), 0, 0, 1))}, 50);
    FAIL("expected NotFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFinite);
  }
}

TEST_CASE("family G orders and brute-force agreement") {
  for (int m = 1; m <= 8; ++m)
    for (int l = 1; l <= m; ++l) {
      if (m % l) continue;
      CAPTURE(m);
      CAPTURE(l);
      const auto g = family_G(m, l);
      CHECK(g.order() == static_cast<std::size_t>(2 * m * m / l));
      CHECK(g.is_closed());
      CHECK(g.generated_by_reflections());
      for (const auto& b : brute_G(m, l)) CHECK(g.index_of(GroupElement(b)).has_value());
      std::size_t total = 0;
      for (const auto& h : g.hyperplanes()) total += static_cast<std::size_t>(h.multiplicity - 1);
      CHECK(total == g.reflections().size());
      for (const auto& e : g.elements()) CHECK(g.order() % static_cast<std::size_t>(e.order()) == 0);
    }
  CHECK_THROWS_AS(family_G(4, 3), Error);
}

TEST_CASE("G(1,1,2), G(2,1,2), G(2,2,2) hyperplanes") {
  CHECK(family_G(1, 1).order() == 2);
  const auto g212 = family_G(2, 1);
  CHECK(g212.order() == 8);
  CHECK(g212.reflections().size() == 4);
  REQUIRE(g212.hyperplanes().size() == 4);
  const std::vector<Vec2> expected{Vec2(1, 0), Vec2(0, 1), Vec2(1, -1) / std::sqrt(2.0), Vec2(1, 1) / std::sqrt(2.0)};
  for (const auto& r : expected) {
    bool found = false;
    for (const auto& h : g212.hyperplanes()) found = found || (parallel(h.root, r) && h.multiplicity == 2);
    CHECK(found);
  }
  const auto g222 = family_G(2, 2);
  CHECK(g222.order() == 4);
  REQUIRE(g222.hyperplanes().size() == 2);
  for (const auto& h : g222.hyperplanes())
    CHECK((parallel(h.root, expected[2]) || parallel(h.root, expected[3])));
}

TEST_CASE("reflection detection") {
  const auto flip = is_reflection(GroupElement(kFlip));
  REQUIRE(flip);
  CHECK(parallel(flip->root, Vec2(1, 0)));
  CHECK(flip->angle == doctest::Approx(std::numbers::pi));
  CHECK_FALSE(is_reflection(GroupElement::identity()));
  const auto sw = is_reflection(GroupElement(kSwap));
  REQUIRE(sw);
  CHECK((sw->root - Vec2(1, -1) / std::sqrt(2.0)).norm() < 1e-12);
  CHECK(sw->angle == doctest::Approx(std::numbers::pi));
  CHECK_FALSE(is_reflection(GroupElement(mat(-1, 0, 0, -1))));
  CHECK_FALSE(is_reflection(GroupElement(mat(0, -1, 1, 0))));
  const auto cube = is_reflection(GroupElement(mat(std::polar(1.0, 4 * std::numbers::pi / 3), 0, 0, 1)));
  REQUIRE(cube);
  CHECK(cube->angle == doctest::Approx(4 * std::numbers::pi / 3));
}

TEST_CASE("hyperplane members fix the hyperplane") {
  for (auto [m, l] : std::vector<std::pair<int, int>>{{3, 1}, {4, 2}, {6, 3}}) {
    const auto g = family_G(m, l);
    for (const auto& h : g.hyperplanes()) {
      CHECK(std::abs(h.root.norm() - 1.0) < 1e-12);
      CHECK(static_cast<int>(h.members.size()) + 1 == h.multiplicity);
      const Vec2 v(-std::conj(h.root(1)), std::conj(h.root(0)));
      for (auto idx : h.members) CHECK((g.element(idx).apply(v) - v).norm() < 1e-12);
    }
  }
}

TEST_CASE("cyclic groups and conjugation") {
  const auto c4 = cyclic_reflection_group(4, Vec2(1, 0));
  CHECK(c4.order() == 4);
  REQUIRE(c4.hyperplanes().size() == 1);
  CHECK(c4.hyperplanes()[0].multiplicity == 4);
  CHECK(c4.is_exact());
  CHECK(close_generators({GroupElement::identity()}).hyperplanes().empty());

  CHECK(conjugate_group(c4, GroupElement::identity()).order() == 4);
  const auto swapped = conjugate_group(cyclic_reflection_group(3, Vec2(1, 0)), GroupElement(kSwap));
  REQUIRE(swapped.hyperplanes().size() == 1);
  CHECK(parallel(swapped.hyperplanes()[0].root, Vec2(0, 1)));

  const Mat2 u = mat(std::polar(1.0, 0.3) * std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::polar(1.0, -0.3) * std::cos(0.7));
  const GroupElement ue(u);
  const auto g = family_G(2, 2);
  const auto conj = conjugate_group(g, ue);
  CHECK(conj.order() == 4);
  for (auto idx : g.reflections()) {
    const auto info = *g.reflection_info(idx);
    const GroupElement image = ue * g.element(idx) * ue.inverse();
    const auto r = is_reflection(image);
    REQUIRE(r);
    CHECK(parallel(r->root, u * info.root));
    CHECK(r->angle == doctest::Approx(info.angle));
    CHECK(conj.index_of(image).has_value());
  }
}

TEST_CASE("closure idempotence") {
  const auto g = family_G(4, 2);
  const auto again = close_generators(g.elements());
  CHECK(again.order() == g.order());
  for (const auto& e : g.elements()) CHECK(again.index_of(e).has_value());
}

TEST_CASE("coset representatives") {
  const auto g = family_G(2, 1);
  CHECK(coset_representatives(g, g).size() == 1);
  CHECK(coset_representatives(g, close_generators({GroupElement::identity()})).size() == 8);
  const auto h = close_generators({GroupElement(kFlip)});
  const auto reps = coset_representatives(g, h);
  CHECK(reps.size() == 4);
  std::set<std::size_t> covered;
  for (const auto& r : reps)
    for (const auto& x : h.elements()) covered.insert(*g.index_of(r * x));
  CHECK(covered.size() == 8);
  const auto outside = cyclic_reflection_group(3, Vec2(1, 0));
  CHECK_THROWS_AS(coset_representatives(g, outside), Error);
}

TEST_CASE("group specs") {
  const auto spec = group_from_json(nlohmann::json::parse(R"({"family":"G","m":2,"l":1})"));
  CHECK(spec.group.order() == 8);
  const auto gens = group_from_json(nlohmann::json::parse(R"({"generators":[[[[-1,0],[0,0]],[[0,0],[1,0]]],[[[0,0],[1,0]],[[1,0],[0,0]]]]})"));
  CHECK(gens.group.order() == 8);
  CHECK(gens.group.is_exact());
  const auto cyc = group_from_json(nlohmann::json::parse(R"({"family":"cyclic","m":3,"root":[[0,0],[1,0]]})"));
  CHECK(cyc.group.order() == 3);
  CHECK(group_from_json(nlohmann::json::parse(R"({"family":"trivial"})")).group.order() == 1);
  CHECK_THROWS_AS(group_from_json(nlohmann::json::parse(R"({"family":"H"})")), Error);
  CHECK_THROWS_AS(group_from_json(nlohmann::json::parse(R"({"generators":[[[[0,-1],[0,0]],[[0,0],[0,1]]]]})")), Error);
  CHECK(spec.hash != gens.hash);
}
