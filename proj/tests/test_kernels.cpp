#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "rbq/errors.hpp"
#include "rbq/kernels.hpp"
#include "rbq/sampling.hpp"

using namespace rbq;

namespace {

Mat2 diag(Complex a, Complex b) {
  Mat2 m;
  m << a, 0, 0, b;
  return m;
}

ReflectionGroup trivial() { return close_generators({GroupElement::identity()}); }
ReflectionGroup flip_group() { return close_generators({GroupElement(diag(-1, 1))}); }

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

BallPoint random_point(Rng& rng, double max_radius) { return BallPoint(max_radius * rng.ball()); }

// Direct m-term average in 50-digit arithmetic, as the oracle for the series.
Complex direct_cyclic(int m, Complex a, Complex b) {
  using F = boost::multiprecision::cpp_bin_float_50;
  using CF = boost::multiprecision::cpp_complex_50;
  const CF A(F(a.real()), F(a.imag())), B(F(b.real()), F(b.imag()));
  CF acc(0);
  const F two_pi = 2 * boost::math::constants::pi<F>();
  for (int k = 0; k < m; ++k) {
    const CF th(cos(two_pi * k / m), sin(two_pi * k / m));
    const CF d = CF(1) - th * A - B;
    acc += th / (d * d * d);
  }
  acc /= m;
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

}  // namespace

TEST_CASE("ball kernel examples") {
  KernelConfig norm;
  norm.normalized = true;
  CHECK(ball_kernel(BallPoint(0, 0), BallPoint(0, 0), norm).real() == doctest::Approx(2.0 / (std::numbers::pi * std::numbers::pi)));
  const double s = std::sqrt(0.5);
  CHECK(std::abs(ball_kernel(BallPoint(s, 0), BallPoint(s, 0)) - Complex(8.0)) < 1e-12);
  const BallPoint z(std::sqrt(0.45), Complex(0, std::sqrt(0.45)));
  CHECK(rel(ball_kernel(z, z), 1000.0) < 1e-12);
  CHECK_THROWS_AS(ball_kernel(BallPoint(1, 0), BallPoint(1, 0)), Error);
  CHECK_THROWS_AS(BallPoint(1, 0.1), Error);
}

TEST_CASE("averaged kernel examples") {
  Rng rng(11);
  const auto t = trivial();
  for (int i = 0; i < 20; ++i) {
    const auto z = random_point(rng, 0.95), w = random_point(rng, 0.95);
    CHECK(averaged_kernel(t, z, w) == ball_kernel(z, w));
  }
  CHECK(std::abs(averaged_kernel(flip_group(), BallPoint(0, 0.6), BallPoint(0.3, 0.5))) == 0.0);
  try {
    averaged_kernel(flip_group(), BallPoint(-1, 0), BallPoint(1, 0));
    FAIL("expected SingularPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularPoint);
    CHECK(std::string(e.what()).find("element 1") != std::string::npos);
  }
}

TEST_CASE("jacobian examples") {
  const auto g212 = family_G(2, 1);
  CHECK(std::abs(jacobian_product(g212, BallPoint(0, 0.5))) == 0.0);
  CHECK(std::abs(jacobian_product(g212, BallPoint(0.4, 0.4))) < 1e-17);
  KernelConfig c3;
  c3.jac_constant_modulus = 3.0;
  CHECK(jacobian_product(trivial(), BallPoint(0.2, 0.1), c3) == Complex(3.0));
  // closed form ratio: |J_prod / J_closed| = (1/2) / (4/1) for G(2,1,2)
  const BallPoint z(Complex(0.3, 0.1), Complex(-0.2, 0.4));
  CHECK(std::abs(jacobian_product(g212, z)) ==
        doctest::Approx(std::abs(closed_form_jacobian_Gml(2, 1, z)) / 8.0).epsilon(1e-12));

  CHECK(closed_form_jacobian_Gml(2, 2, BallPoint(1, 0)) == Complex(2.0));
  CHECK(std::abs(closed_form_jacobian_Gml(2, 1, BallPoint(0.5, 0.5))) == 0.0);
  CHECK(std::abs(closed_form_jacobian_Gml(4, 2, BallPoint(std::sqrt(0.5), std::sqrt(0.5)))) < 1e-15);
  CHECK_THROWS_AS(closed_form_jacobian_Gml(4, 3, BallPoint(0.1, 0.1)), Error);
}

TEST_CASE("jacobian consistency with the closed form") {
  Rng rng(5);
  for (auto [m, l] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {4, 2}, {6, 3}, {4, 4}}) {
    CAPTURE(m);
    CAPTURE(l);
    const auto g = family_G(m, l);
    double lo = INFINITY, hi = 0;
    int used = 0;
    while (used < 1000) {
      const BallPoint z(rng.ball());
      const Complex closed = closed_form_jacobian_Gml(m, l, z);
      if (std::abs(closed) < 1e-6) continue;
      const double ratio = std::abs(jacobian_product(g, z) / closed);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      ++used;
    }
    CHECK((hi - lo) / hi <= 1e-10);
  }
}

TEST_CASE("k_gp examples") {
  Rng rng(17);
  const auto t = trivial();
  const auto f = flip_group();
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    KernelConfig cfg;
    cfg.p = p;
    const auto z = random_point(rng, 0.9), w = random_point(rng, 0.9);
    CHECK(rel(k_gp(t, z, w, cfg), ball_kernel(z, w)) < 1e-14);
  }
  KernelConfig two;
  const auto z = random_point(rng, 0.9), w = random_point(rng, 0.9);
  CHECK(k_gp(f, z, w, two) == averaged_kernel(f, z, w));
  KernelConfig four;
  four.p = 4.0;
  for (int i = 0; i < 20; ++i) {
    const auto a = random_point(rng, 0.9), b = random_point(rng, 0.9);
    const Complex expected = std::pow(std::abs(a.z1()) / std::abs(b.z1()), -0.5) * averaged_kernel(f, a, b);
    CHECK(rel(k_gp(f, a, b, four), expected) < 1e-12);
  }
  try {
    k_gp(f, BallPoint(0, 0.5), BallPoint(0.2, 0.1), four);
    FAIL("expected JacobianZero");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::JacobianZero);
    CHECK(std::string(e.what()).find("z side") != std::string::npos);
  }
  KernelConfig low;
  low.p = 1.5;
  CHECK_THROWS_AS(k_gp(f, BallPoint(0.2, 0.1), BallPoint(0, 0.5), low), Error);
  KernelConfig bad;
  bad.p = 1.0;
  CHECK_THROWS_AS(k_gp(f, z, w, bad), Error);
}

TEST_CASE("weight sigma") {
  Rng rng(2);
  const auto g = family_G(2, 2);
  for (int i = 0; i < 10; ++i) CHECK(weight_sigma(g, BallPoint(rng.ball()), 2.0) == 1.0);
  CHECK(weight_sigma(trivial(), BallPoint(0.3, 0.1), 3.0, 2.0) == doctest::Approx(0.5));
  // product form with unit roots gives 1/2 at (1,0); |c| = 4 reproduces the closed-form value 2
  CHECK(weight_sigma(g, BallPoint(1, 0), 1.0) == doctest::Approx(0.5));
  CHECK(weight_sigma(g, BallPoint(1, 0), 1.0, 4.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(weight_sigma(g, BallPoint(0.5, 0.5), 3.0), Error);
  CHECK(weight_sigma(g, BallPoint(0.5, 0.5), 1.5) == 0.0);
}

TEST_CASE("dominating sum") {
  const auto t = trivial();
  const BallPoint z(0.3, Complex(0.1, 0.2)), w(-0.2, 0.5);
  CHECK(dominating_sum(t, z, w) == doctest::Approx(std::abs(ball_kernel(z, w))));
  CHECK(dominating_sum(family_G(2, 1), BallPoint(0, 0), BallPoint(0, 0)) == doctest::Approx(8.0));
  const BallPoint on(0, 0.7);
  CHECK(dominating_sum(flip_group(), on, w) == doctest::Approx(2 * std::abs(ball_kernel(on, w))));
}

TEST_CASE("cyclic closed form") {
  CHECK(cyclic_closed_form(3, BallPoint(0, 0.5), BallPoint(0.4, 0.2)) == Complex(0.0));
  // m = 2, a = 0.1, b = 0.5
  const BallPoint z(std::sqrt(0.1), std::sqrt(0.5)), w(std::sqrt(0.1), std::sqrt(0.5));
  const double expected = 0.5 * (std::pow(0.4, -3) - std::pow(0.6, -3));
  CHECK(rel(cyclic_closed_form(2, z, w), expected) < 1e-12);
  CHECK_THROWS_AS(cyclic_closed_form(2, BallPoint(0.9, 0), BallPoint(0.9, 0)), Error);

  Rng rng(23);
  const ReflectionGroup c3 = cyclic_reflection_group(3, Vec2(1, 0));
  for (int m : {2, 3, 4, 5}) {
    int tested = 0;
    while (tested < 200) {
      const Vec2 zv = rng.ball(), wv = rng.ball();
      const Complex a = zv(0) * std::conj(wv(0)), b = zv(1) * std::conj(wv(1));
      if (!(std::abs(a) < 0.5 * std::abs(1.0 - b))) continue;
      ++tested;
      const Complex series = cyclic_closed_form(m, BallPoint(zv), BallPoint(wv));
      CHECK(rel(series, direct_cyclic(m, a, b)) < 1e-10);
      if (m == 3) CHECK(rel(series, averaged_kernel(c3, BallPoint(zv), BallPoint(wv))) < 1e-10);
    }
  }
  CHECK_THROWS_AS(cyclic_closed_form(2, BallPoint(0.7, 0.5), BallPoint(0.7, 0.5), 1), Error);
}

TEST_CASE("kernel invariants on random interior pairs") {
  Rng rng(31);
  for (auto [m, l] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {4, 2}}) {
    const auto g = family_G(m, l);
    KernelEvaluator ev(g);
    for (int t = 0; t < 100; ++t) {
      const Vec2 z = 0.95 * rng.ball(), w = 0.95 * rng.ball();
      double scale = 0;
      const Complex k = ev.averaged(z, w, scale);
      const Complex k_rev = ev.averaged(w, z);
      CHECK(std::abs(k - std::conj(k_rev)) <= 1e-12 * scale);
      for (std::size_t i = 0; i < g.order(); ++i) {
        const Complex shifted = ev.averaged(g.element(i).apply(z), w);
        CHECK(std::abs(shifted - k / g.element(i).det()) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("modulus invariance and c_pi independence") {
  Rng rng(37);
  const auto g = family_G(3, 1);
  for (double p : {1.5, 3.0, 6.0}) {
    std::vector<KernelEvaluator> evs;
    for (double c : {0.1, 1.0, 10.0}) {
      KernelConfig cfg;
      cfg.p = p;
      cfg.jac_constant_modulus = c;
      evs.emplace_back(g, cfg);
    }
    for (int t = 0; t < 50; ++t) {
      const Vec2 z = 0.9 * rng.ball(), w = 0.9 * rng.ball();
      double scale = 0;
      evs[1].averaged(z, w, scale);
      const Complex base = evs[1].k_gp(z, w);
      CHECK(rel(evs[0].k_gp(z, w), base) <= 1e-14);
      CHECK(rel(evs[2].k_gp(z, w), base) <= 1e-14);
      const double jscale = std::pow(std::abs(evs[1].jacobian(z)) / std::abs(evs[1].jacobian(w)), 2.0 / p - 1.0);
      for (std::size_t i = 0; i < g.order(); ++i)
        CHECK(std::abs(std::abs(evs[1].k_gp(g.element(i).apply(z), w)) - std::abs(base)) <= 1e-12 * scale * jscale);
    }
  }
}

TEST_CASE("hyperplane vanishing") {
  Rng rng(41);
  for (auto [m, l] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 2}, {3, 3}}) {
    const auto g = family_G(m, l);
    KernelEvaluator ev(g);
    for (const auto& h : g.hyperplanes()) {
      const Vec2 v(-std::conj(h.root(1)), std::conj(h.root(0)));
      for (int t = 0; t < 30; ++t) {
        const Vec2 z = rng.uniform(-0.8, 0.8) * std::polar(1.0, rng.uniform(0, 6.3)) * v;
        const Vec2 w = 0.8 * rng.ball();
        CHECK(std::abs(ev.averaged(z, w)) <= 1e-12);
      }
    }
  }
}
