#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_N).
//
// An element is stored in the power basis 1, zeta, ..., zeta^{phi(N)-1}
// reduced modulo the N-th cyclotomic polynomial, with arbitrary-precision
// rational coordinates.

#include <complex>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace rbq {

/// Tables shared by all numbers of one conductor.
struct CycloField {
  int conductor = 1;
  int degree = 1;                    // phi(N)
  std::vector<mpz_class> modulus;    // Phi_N, low to high, monic
  // power_table[k] = zeta^k reduced to the power basis, for 0 <= k < table size
  std::vector<std::vector<mpq_class>> power_table;
  std::vector<std::complex<double>> embedding;  // e^{2 pi i k / N}, k < degree

  static const CycloField& get(int conductor);
};

int euler_phi(int n);
std::vector<mpz_class> cyclotomic_polynomial(int n);

class CycloNum {
public:
  CycloNum() : CycloNum(1) {}
  explicit CycloNum(int conductor);

  static CycloNum zero(int conductor) { return CycloNum(conductor); }
  static CycloNum one(int conductor) { return rational(conductor, 1); }
  static CycloNum rational(int conductor, const mpq_class& q);
  /// zeta_N^k for any integer k.
  static CycloNum zeta_power(int conductor, long k);
  static CycloNum from_coeffs(int conductor, std::vector<mpq_class> coeffs);

  int conductor() const { return field_->conductor; }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const;

  CycloNum& operator+=(const CycloNum& other);
  CycloNum& operator-=(const CycloNum& other);
  CycloNum& operator*=(const CycloNum& other);
  CycloNum& operator*=(const mpq_class& q);
  CycloNum operator-() const;

  friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
  friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }
  friend CycloNum operator*(const CycloNum& a, const CycloNum& b);
  friend CycloNum operator*(CycloNum a, const mpq_class& q) { return a *= q; }
  friend bool operator==(const CycloNum& a, const CycloNum& b);
  friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

  /// Multiplicative inverse; throws DivisionFailed on zero.
  CycloNum inverse() const;
  friend CycloNum operator/(const CycloNum& a, const CycloNum& b) { return a * b.inverse(); }

  /// Complex conjugation, zeta -> zeta^{N-1}.
  CycloNum conj() const;

  /// Re-express in Q(zeta_M) for a multiple M of the conductor.
  CycloNum lift(int conductor) const;

  /// Numeric embedding zeta -> e^{2 pi i / N}.
  std::complex<double> embed() const;

  /// Coefficients as "p/q" strings, low degree first.
  std::vector<std::string> to_strings() const;
  std::string to_string() const;

private:
  const CycloField* field_;
  std::vector<mpq_class> coeffs_;

  void require_same_field(const CycloNum& other) const;
};

}  // namespace rbq
