#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "rbq/cyclotomic.hpp"
#include "rbq/errors.hpp"

using rbq::CycloNum;

TEST_CASE("cyclotomic polynomials") {
  auto as_long = [](int n) {
    std::vector<long> out;
    for (const auto& c : rbq::cyclotomic_polynomial(n)) out.push_back(c.get_si());
    return out;
  };
  CHECK(as_long(1) == std::vector<long>{-1, 1});
  CHECK(as_long(4) == std::vector<long>{1, 0, 1});
  CHECK(as_long(6) == std::vector<long>{1, -1, 1});
  CHECK(as_long(12) == std::vector<long>{1, 0, -1, 0, 1});
  CHECK(rbq::euler_phi(12) == 4);
  CHECK(rbq::euler_phi(7) == 6);
}

TEST_CASE("zeta powers close up and embed correctly") {
  for (int n : {1, 2, 3, 4, 5, 6, 8, 12}) {
    CAPTURE(n);
    const CycloNum z = CycloNum::zeta_power(n, 1);
    CycloNum acc = CycloNum::one(n);
    for (int k = 0; k < n; ++k) {
      const auto e = acc.embed();
      const double angle = 2.0 * std::numbers::pi * k / n;
      CHECK(std::abs(e - std::complex<double>(std::cos(angle), std::sin(angle))) < 1e-14);
      acc *= z;
    }
    CHECK(acc == CycloNum::one(n));
  }
}

TEST_CASE("sum of primitive roots is the Moebius value") {
  // mu(1)=1, mu(2)=-1, mu(3)=-1, mu(4)=0, mu(6)=1, mu(12)=0
  const std::vector<std::pair<int, int>> cases{{1, 1}, {2, -1}, {3, -1}, {4, 0}, {6, 1}, {12, 0}};
  for (auto [n, mu] : cases) {
    CycloNum s = CycloNum::zero(n);
    for (int k = 0; k < n; ++k)
      if (std::gcd(k, n) == 1) s += CycloNum::zeta_power(n, k);
    CHECK(s == CycloNum::rational(n, mu));
  }
}

TEST_CASE("inverse, conjugation and lifting") {
  const int n = 12;
  CycloNum a = CycloNum::rational(n, mpq_class(3, 2)) + CycloNum::zeta_power(n, 5) -
               CycloNum::zeta_power(n, 2) * CycloNum::rational(n, 7);
  const CycloNum inv = a.inverse();
  CHECK(a * inv == CycloNum::one(n));
  CHECK(std::abs(a.conj().embed() - std::conj(a.embed())) < 1e-13);
  CHECK(a.conj().conj() == a);
  const CycloNum lifted = a.lift(24);
  CHECK(lifted.conductor() == 24);
  CHECK(std::abs(lifted.embed() - a.embed()) < 1e-13);
  CHECK_THROWS_AS(CycloNum::zero(5).inverse(), rbq::Error);
  CHECK_THROWS_AS(CycloNum::one(4) + CycloNum::one(8), rbq::Error);
}

TEST_CASE("field axioms on random elements") {
  std::mt19937 gen(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int n : {3, 5, 8, 9}) {
    const int d = rbq::euler_phi(n);
    auto random_elem = [&] {
      std::vector<mpq_class> c(static_cast<std::size_t>(d));
      for (auto& x : c) x = mpq_class(coef(gen), 1 + (coef(gen) + 5) % 3);
      return CycloNum::from_coeffs(n, c);
    };
    for (int t = 0; t < 20; ++t) {
      const CycloNum a = random_elem(), b = random_elem(), c = random_elem();
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a * b).conj() == a.conj() * b.conj());
      CHECK(std::abs((a * b).embed() - a.embed() * b.embed()) < 1e-10 * (1 + std::abs(a.embed() * b.embed())));
      if (!a.is_zero()) CHECK(a * a.inverse() == CycloNum::one(n));
    }
  }
}
