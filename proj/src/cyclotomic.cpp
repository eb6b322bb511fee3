#include "rbq/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "rbq/errors.hpp"

namespace rbq {

namespace {

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Returns quotient, leaves remainder in `num`.
QPoly divmod(QPoly& num, const QPoly& den) {
  trim(num);
  QPoly quot;
  if (num.size() < den.size()) return quot;
  quot.assign(num.size() - den.size() + 1, mpq_class(0));
  const mpq_class lead = den.back();
  for (std::size_t i = num.size(); i-- >= den.size();) {
    if (num[i] == 0) continue;
    const mpq_class factor = num[i] / lead;
    const std::size_t shift = i - (den.size() - 1);
    quot[shift] = factor;
    for (std::size_t j = 0; j < den.size(); ++j) num[shift + j] -= factor * den[j];
  }
  trim(num);
  trim(quot);
  return quot;
}

QPoly multiply(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

QPoly subtract(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()), mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

}  // namespace

int euler_phi(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<mpz_class> cyclotomic_polynomial(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "cyclotomic polynomial needs n >= 1");
  // x^n - 1 divided by Phi_d for every proper divisor d.
  QPoly num(static_cast<std::size_t>(n) + 1, mpq_class(0));
  num[0] = -1;
  num[static_cast<std::size_t>(n)] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const auto phi_d = cyclotomic_polynomial(d);
    QPoly den(phi_d.begin(), phi_d.end());
    num = divmod(num, den);
  }
  std::vector<mpz_class> out;
  out.reserve(num.size());
  for (const auto& c : num) out.emplace_back(c.get_num());
  return out;
}

const CycloField& CycloField::get(int conductor) {
  if (conductor < 1) throw Error(ErrorKind::InvalidArgument, "conductor must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<CycloField>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[conductor];
  if (slot) return *slot;

  auto field = std::make_unique<CycloField>();
  field->conductor = conductor;
  field->modulus = cyclotomic_polynomial(conductor);
  field->degree = static_cast<int>(field->modulus.size()) - 1;
  const auto deg = static_cast<std::size_t>(field->degree);

  const std::size_t table_size = std::max<std::size_t>(static_cast<std::size_t>(conductor), 2 * deg);
  std::vector<mpq_class> current(deg, mpq_class(0));
  current[0] = 1;
  field->power_table.push_back(current);
  for (std::size_t k = 1; k < table_size; ++k) {
    std::vector<mpq_class> next(deg, mpq_class(0));
    const mpq_class top = current[deg - 1];
    for (std::size_t i = deg - 1; i > 0; --i) next[i] = current[i - 1];
    next[0] = 0;
    if (top != 0)
      for (std::size_t i = 0; i < deg; ++i) next[i] -= top * mpq_class(field->modulus[i]);
    field->power_table.push_back(next);
    current = std::move(next);
  }

  for (std::size_t k = 0; k < deg; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / conductor;
    field->embedding.emplace_back(std::cos(angle), std::sin(angle));
  }
  slot = std::move(field);
  return *slot;
}

CycloNum::CycloNum(int conductor)
    : field_(&CycloField::get(conductor)),
      coeffs_(static_cast<std::size_t>(field_->degree), mpq_class(0)) {}

CycloNum CycloNum::rational(int conductor, const mpq_class& q) {
  CycloNum out(conductor);
  out.coeffs_[0] = q;
  return out;
}

CycloNum CycloNum::zeta_power(int conductor, long k) {
  CycloNum out(conductor);
  long r = k % conductor;
  if (r < 0) r += conductor;
  out.coeffs_ = out.field_->power_table[static_cast<std::size_t>(r)];
  return out;
}

CycloNum CycloNum::from_coeffs(int conductor, std::vector<mpq_class> coeffs) {
  CycloNum out(conductor);
  if (coeffs.size() != out.coeffs_.size())
    throw Error(ErrorKind::InvalidArgument, "coefficient vector length must equal phi(N)");
  out.coeffs_ = std::move(coeffs);
  for (auto& c : out.coeffs_) c.canonicalize();
  return out;
}

bool CycloNum::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CycloNum::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

void CycloNum::require_same_field(const CycloNum& other) const {
  if (field_ != other.field_)
    throw Error(ErrorKind::InvalidArgument, "mixed cyclotomic conductors " +
                                                std::to_string(conductor()) + " and " +
                                                std::to_string(other.conductor()));
}

CycloNum& CycloNum::operator+=(const CycloNum& other) {
  require_same_field(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

CycloNum& CycloNum::operator-=(const CycloNum& other) {
  require_same_field(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

CycloNum& CycloNum::operator*=(const CycloNum& other) {
  *this = *this * other;
  return *this;
}

CycloNum& CycloNum::operator*=(const mpq_class& q) {
  for (auto& c : coeffs_) c *= q;
  return *this;
}

CycloNum CycloNum::operator-() const {
  CycloNum out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

CycloNum operator*(const CycloNum& a, const CycloNum& b) {
  a.require_same_field(b);
  const std::size_t deg = a.coeffs_.size();
  CycloNum out(a.conductor());
  if (deg == 1) {
    out.coeffs_[0] = a.coeffs_[0] * b.coeffs_[0];
    return out;
  }
  std::vector<mpq_class> full(2 * deg - 1, mpq_class(0));
  for (std::size_t i = 0; i < deg; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < deg; ++j) {
      if (b.coeffs_[j] == 0) continue;
      full[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  for (std::size_t k = 0; k < full.size(); ++k) {
    if (full[k] == 0) continue;
    if (k < deg) {
      out.coeffs_[k] += full[k];
    } else {
      const auto& power = a.field_->power_table[k];
      for (std::size_t i = 0; i < deg; ++i)
        if (power[i] != 0) out.coeffs_[i] += full[k] * power[i];
    }
  }
  return out;
}

bool operator==(const CycloNum& a, const CycloNum& b) {
  return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
}

CycloNum CycloNum::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionFailed, "inverse of zero in Q(zeta_N)");
  // Extended Euclid: s*a + t*Phi = gcd, gcd a nonzero constant since Phi is irreducible.
  QPoly modulus(field_->modulus.begin(), field_->modulus.end());
  QPoly r0 = modulus, r1 = coeffs_;
  trim(r1);
  QPoly s0, s1{mpq_class(1)};
  while (!r1.empty()) {
    QPoly rem = r0;
    QPoly quot = divmod(rem, r1);
    QPoly s2 = subtract(s0, multiply(quot, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 is the constant gcd and s0 * a == r0 mod Phi.
  if (r0.size() != 1) throw Error(ErrorKind::DivisionFailed, "non-invertible element");
  const mpq_class g = r0[0];
  QPoly rem = s0;
  divmod(rem, modulus);
  CycloNum out(conductor());
  for (std::size_t i = 0; i < rem.size(); ++i) out.coeffs_[i] = rem[i] / g;
  return out;
}

CycloNum CycloNum::conj() const {
  const int n = conductor();
  CycloNum out(n);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    const auto idx = static_cast<std::size_t>((n - static_cast<int>(k)) % n);
    const auto& power = field_->power_table[idx];
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (power[i] != 0) out.coeffs_[i] += coeffs_[k] * power[i];
  }
  return out;
}

CycloNum CycloNum::lift(int target) const {
  const int n = conductor();
  if (target % n != 0)
    throw Error(ErrorKind::InvalidArgument, "lift target must be a multiple of the conductor");
  const int step = target / n;
  CycloNum out(target);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    out += zeta_power(target, static_cast<long>(k) * step) * coeffs_[k];
  }
  return out;
}

std::complex<double> CycloNum::embed() const {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (coeffs_[k] != 0) acc += coeffs_[k].get_d() * field_->embedding[k];
  return acc;
}

std::vector<std::string> CycloNum::to_strings() const {
  std::vector<std::string> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.get_str());
  return out;
}

std::string CycloNum::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coeffs_[k].get_str() + ")";
    if (k > 0) out += "*z^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

}  // namespace rbq
