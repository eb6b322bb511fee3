#pragma once

#include <array>
#include <complex>
#include <map>

#include "rbq/cyclotomic.hpp"

namespace rbq {

/// Polynomial in (z1, z2, u1, u2) over Q(zeta_N), where u stands for conj(w).
/// Zero coefficients are never stored.
class MPoly {
public:
  using Exps = std::array<int, 4>;
  using Terms = std::map<Exps, CycloNum>;
  using Linear = std::array<std::array<CycloNum, 2>, 2>;

  enum Var { Z1 = 0, Z2 = 1, U1 = 2, U2 = 3 };

  explicit MPoly(int conductor = 1) : conductor_(conductor) {}

  static MPoly constant(const CycloNum& c);
  static MPoly variable(Var v, int conductor);
  static MPoly monomial(const Exps& e, const CycloNum& c);
  /// a1*x1 + a2*x2 with x = z (on_u false) or x = u.
  static MPoly linear_form(const CycloNum& a1, const CycloNum& a2, bool on_u);

  int conductor() const { return conductor_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  int total_degree() const;
  int degree_in(Var v) const;

  void add_term(const Exps& e, const CycloNum& c);

  MPoly& operator+=(const MPoly& other);
  MPoly& operator-=(const MPoly& other);
  MPoly& operator*=(const MPoly& other) { return *this = *this * other; }
  MPoly operator-() const;
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.conductor_ == b.conductor_ && a.terms_ == b.terms_;
  }

  MPoly scaled(const CycloNum& c) const;
  MPoly pow(int k) const;

  /// Swap the z and u variable pairs and conjugate every coefficient.
  MPoly conj_swap() const;

  /// Substitute x -> A x for x = z or x = u (x_i -> sum_j A[i][j] x_j).
  MPoly substitute_linear(const Linear& a, bool on_u) const;

  /// Re-express all coefficients over Q(zeta_M), M a multiple of the conductor.
  MPoly lift(int conductor) const;

  /// Numeric value at (z, u); accumulation is done in extended precision.
  std::complex<double> evaluate(std::complex<double> z1, std::complex<double> z2,
                                std::complex<double> u1, std::complex<double> u2) const;

private:
  int conductor_;
  Terms terms_;
};

}  // namespace rbq
