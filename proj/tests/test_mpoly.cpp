#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "rbq/mpoly.hpp"

using rbq::CycloNum;
using rbq::MPoly;
using C = std::complex<double>;

namespace {

MPoly var(MPoly::Var v, int n) { return MPoly::variable(v, n); }

}  // namespace

TEST_CASE("expansion of a binomial square") {
  const int n = 4;
  const MPoly s = var(MPoly::Z1, n) + var(MPoly::U1, n);
  const MPoly sq = s.pow(2);
  CHECK(sq.size() == 3);
  CHECK(sq.terms().at({1, 0, 1, 0}) == CycloNum::rational(n, 2));
  CHECK(sq.total_degree() == 2);
  CHECK(s.pow(0) == MPoly::constant(CycloNum::one(n)));
}

TEST_CASE("cancellation leaves no zero terms") {
  const int n = 3;
  const MPoly a = var(MPoly::Z1, n) * var(MPoly::U2, n);
  CHECK((a - a).is_zero());
  CHECK((a + (-a)).size() == 0);
}

TEST_CASE("conj_swap is an involution and matches numerics") {
  const int n = 8;
  const CycloNum zeta = CycloNum::zeta_power(n, 1);
  const MPoly p = (MPoly::linear_form(zeta, CycloNum::rational(n, 3), false) *
                   MPoly::linear_form(CycloNum::one(n), zeta * zeta, true))
                      .pow(3) +
                  MPoly::monomial({2, 0, 0, 1}, zeta);
  CHECK(p.conj_swap().conj_swap() == p);
  const C z1(0.3, -0.1), z2(0.2, 0.4), u1(-0.5, 0.2), u2(0.1, 0.1);
  // conj_swap(P)(z,u) = conj(P(conj u, conj z))
  const C lhs = p.conj_swap().evaluate(z1, z2, u1, u2);
  const C rhs = std::conj(p.evaluate(std::conj(u1), std::conj(u2), std::conj(z1), std::conj(z2)));
  CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("linear substitution agrees with numeric substitution") {
  const int n = 6;
  const CycloNum w = CycloNum::zeta_power(n, 1);
  MPoly::Linear a{{{w, CycloNum::rational(n, mpq_class(1, 2))}, {CycloNum::zero(n), w.conj()}}};
  const MPoly p = (var(MPoly::Z1, n).pow(2) * var(MPoly::U1, n) - var(MPoly::Z2, n) * var(MPoly::U2, n).pow(3) +
                   MPoly::constant(CycloNum::one(n)))
                      .pow(2);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> d(-0.7, 0.7);
  for (int t = 0; t < 10; ++t) {
    const C z1(d(gen), d(gen)), z2(d(gen), d(gen)), u1(d(gen), d(gen)), u2(d(gen), d(gen));
    const C a00 = a[0][0].embed(), a01 = a[0][1].embed(), a10 = a[1][0].embed(), a11 = a[1][1].embed();
    const C direct_z = p.evaluate(a00 * z1 + a01 * z2, a10 * z1 + a11 * z2, u1, u2);
    const C direct_u = p.evaluate(z1, z2, a00 * u1 + a01 * u2, a10 * u1 + a11 * u2);
    CHECK(std::abs(p.substitute_linear(a, false).evaluate(z1, z2, u1, u2) - direct_z) < 1e-12);
    CHECK(std::abs(p.substitute_linear(a, true).evaluate(z1, z2, u1, u2) - direct_u) < 1e-12);
  }
}

TEST_CASE("lift preserves values") {
  const MPoly p = MPoly::linear_form(CycloNum::zeta_power(3, 1), CycloNum::one(3), false).pow(4);
  const MPoly q = p.lift(12);
  CHECK(q.conductor() == 12);
  const C z1(0.2, 0.3), z2(-0.4, 0.1);
  CHECK(std::abs(p.evaluate(z1, z2, 0, 0) - q.evaluate(z1, z2, 0, 0)) < 1e-14);
}
