#include "rbq/mpoly.hpp"

#include <algorithm>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rbq/errors.hpp"

namespace rbq {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

struct QuadComplex {
  Quad re{0};
  Quad im{0};
};

QuadComplex mul(const QuadComplex& a, const QuadComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Quad to_quad(const mpq_class& q) {
  if (q.get_den() == 1) return Quad(q.get_num().get_str());
  return Quad(q.get_num().get_str()) / Quad(q.get_den().get_str());
}

QuadComplex embed_quad(const CycloNum& c) {
  QuadComplex acc;
  const auto& coeffs = c.coeffs();
  const Quad two_pi = 2 * boost::math::constants::pi<Quad>();
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    const Quad q = to_quad(coeffs[k]);
    if (k == 0) {
      acc.re += q;
      continue;
    }
    const Quad angle = two_pi * static_cast<int>(k) / c.conductor();
    acc.re += q * cos(angle);
    acc.im += q * sin(angle);
  }
  return acc;
}

std::vector<QuadComplex> power_table(std::complex<double> x, int max_degree) {
  std::vector<QuadComplex> out(static_cast<std::size_t>(max_degree) + 1);
  out[0] = {Quad(1), Quad(0)};
  const QuadComplex base{Quad(x.real()), Quad(x.imag())};
  for (int k = 1; k <= max_degree; ++k) out[static_cast<std::size_t>(k)] = mul(out[static_cast<std::size_t>(k) - 1], base);
  return out;
}

}  // namespace

MPoly MPoly::constant(const CycloNum& c) {
  MPoly out(c.conductor());
  out.add_term({0, 0, 0, 0}, c);
  return out;
}

MPoly MPoly::variable(Var v, int conductor) {
  Exps e{0, 0, 0, 0};
  e[static_cast<std::size_t>(v)] = 1;
  return monomial(e, CycloNum::one(conductor));
}

MPoly MPoly::monomial(const Exps& e, const CycloNum& c) {
  MPoly out(c.conductor());
  out.add_term(e, c);
  return out;
}

MPoly MPoly::linear_form(const CycloNum& a1, const CycloNum& a2, bool on_u) {
  MPoly out(a1.conductor());
  const std::size_t base = on_u ? 2 : 0;
  Exps e1{0, 0, 0, 0}, e2{0, 0, 0, 0};
  e1[base] = 1;
  e2[base + 1] = 1;
  out.add_term(e1, a1);
  out.add_term(e2, a2);
  return out;
}

int MPoly::total_degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) best = std::max(best, e[0] + e[1] + e[2] + e[3]);
  return best;
}

int MPoly::degree_in(Var v) const {
  int best = -1;
  for (const auto& [e, c] : terms_) best = std::max(best, e[static_cast<std::size_t>(v)]);
  return best;
}

void MPoly::add_term(const Exps& e, const CycloNum& c) {
  if (c.conductor() != conductor_)
    throw Error(ErrorKind::InvalidArgument, "coefficient conductor does not match polynomial");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MPoly& MPoly::operator+=(const MPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

MPoly MPoly::operator-() const {
  MPoly out(conductor_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.conductor_ != b.conductor_)
    throw Error(ErrorKind::InvalidArgument, "mixed polynomial conductors");
  MPoly out(a.conductor_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      const MPoly::Exps e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
      auto [it, inserted] = out.terms_.try_emplace(e, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(out.terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

MPoly MPoly::scaled(const CycloNum& c) const {
  MPoly out(conductor_);
  if (c.is_zero()) return out;
  for (const auto& [e, coeff] : terms_) out.terms_.emplace(e, coeff * c);
  return out;
}

MPoly MPoly::pow(int k) const {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "negative polynomial power");
  MPoly result = constant(CycloNum::one(conductor_));
  MPoly base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

MPoly MPoly::conj_swap() const {
  MPoly out(conductor_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(Exps{e[2], e[3], e[0], e[1]}, c.conj());
  return out;
}

MPoly MPoly::substitute_linear(const Linear& a, bool on_u) const {
  const std::size_t base = on_u ? 2 : 0;
  const int max_deg = std::max(degree_in(on_u ? U1 : Z1), degree_in(on_u ? U2 : Z2));
  // powers of the two substituted linear forms
  std::vector<MPoly> pow1, pow2;
  const MPoly form1 = linear_form(a[0][0], a[0][1], on_u);
  const MPoly form2 = linear_form(a[1][0], a[1][1], on_u);
  pow1.push_back(constant(CycloNum::one(conductor_)));
  pow2.push_back(constant(CycloNum::one(conductor_)));
  for (int k = 1; k <= max_deg; ++k) {
    pow1.push_back(pow1.back() * form1);
    pow2.push_back(pow2.back() * form2);
  }
  MPoly out(conductor_);
  for (const auto& [e, c] : terms_) {
    Exps rest = e;
    rest[base] = 0;
    rest[base + 1] = 0;
    const MPoly factor = pow1[static_cast<std::size_t>(e[base])] * pow2[static_cast<std::size_t>(e[base + 1])];
    for (const auto& [fe, fc] : factor.terms_) {
      out.add_term({rest[0] + fe[0], rest[1] + fe[1], rest[2] + fe[2], rest[3] + fe[3]}, fc * c);
    }
  }
  return out;
}

MPoly MPoly::lift(int target) const {
  MPoly out(target);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.lift(target));
  return out;
}

std::complex<double> MPoly::evaluate(std::complex<double> z1, std::complex<double> z2,
                                     std::complex<double> u1, std::complex<double> u2) const {
  if (terms_.empty()) return {0.0, 0.0};
  const auto p0 = power_table(z1, std::max(0, degree_in(Z1)));
  const auto p1 = power_table(z2, std::max(0, degree_in(Z2)));
  const auto p2 = power_table(u1, std::max(0, degree_in(U1)));
  const auto p3 = power_table(u2, std::max(0, degree_in(U2)));
  QuadComplex acc;
  for (const auto& [e, c] : terms_) {
    QuadComplex term = embed_quad(c);
    term = mul(term, p0[static_cast<std::size_t>(e[0])]);
    term = mul(term, p1[static_cast<std::size_t>(e[1])]);
    term = mul(term, p2[static_cast<std::size_t>(e[2])]);
    term = mul(term, p3[static_cast<std::size_t>(e[3])]);
    acc.re += term.re;
    acc.im += term.im;
  }
  return {static_cast<double>(acc.re), static_cast<double>(acc.im)};
}

}  // namespace rbq
