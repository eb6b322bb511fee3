#include "rbq/kernels.hpp"

#include <cmath>
#include <numbers>

#include "rbq/errors.hpp"

namespace rbq {

namespace {

constexpr double kSingularGuard = 1e-300;

Complex int_pow(Complex x, int k) {
  Complex out{1.0, 0.0};
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

}  // namespace

BallPoint::BallPoint(Complex z1, Complex z2) : BallPoint(Vec2(z1, z2)) {}

BallPoint::BallPoint(const Vec2& v) : v_(v) {
  if (!std::isfinite(v.squaredNorm()))
    throw Error(ErrorKind::InvalidArgument, "point has non-finite coordinates");
  if (v.squaredNorm() > 1.0 + 1e-12)
    throw Error(ErrorKind::InvalidArgument, "point lies outside the closed unit ball");
}

void KernelConfig::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "p must lie in (1, inf)");
  if (!(jac_constant_modulus > 0.0) || !std::isfinite(jac_constant_modulus))
    throw Error(ErrorKind::InvalidArgument, "jac_constant_modulus must be positive");
}

double kernel_constant(const KernelConfig& cfg) {
  return cfg.normalized ? 2.0 / (std::numbers::pi * std::numbers::pi) : 1.0;
}

KernelEvaluator::KernelEvaluator(const ReflectionGroup& group, KernelConfig cfg)
    : cfg_(cfg), c_(kernel_constant(cfg)) {
  cfg_.validate();
  for (const auto& g : group.elements()) {
    mats_.push_back(g.matrix());
    dets_.push_back(g.det());
  }
  for (const auto& h : group.hyperplanes()) {
    roots_.push_back(h.root);
    multiplicities_.push_back(h.multiplicity);
  }
}

Complex KernelEvaluator::ball(const Vec2& z, const Vec2& w) const {
  const Complex d = 1.0 - inner(z, w);
  if (std::abs(d) < kSingularGuard) throw Error(ErrorKind::SingularPoint, "1 - <z,w> vanishes");
  return c_ / (d * d * d);
}

Complex KernelEvaluator::averaged(const Vec2& z, const Vec2& w) const {
  double scale = 0.0;
  return averaged(z, w, scale);
}

Complex KernelEvaluator::averaged(const Vec2& z, const Vec2& w, double& scale) const {
  Complex acc{0.0, 0.0};
  double abs_acc = 0.0;
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    const Vec2 gz = mats_[i] * z;
    const Complex d = 1.0 - inner(gz, w);
    if (std::abs(d) < kSingularGuard)
      throw Error(ErrorKind::SingularPoint, "1 - <g.z,w> vanishes for group element " + std::to_string(i));
    const Complex k = c_ / (d * d * d);
    acc += dets_[i] * k;
    abs_acc += std::abs(k);
  }
  const double n = static_cast<double>(mats_.size());
  scale = abs_acc / n;
  return acc / n;
}

Complex KernelEvaluator::jacobian(const Vec2& z) const {
  Complex out{cfg_.jac_constant_modulus, 0.0};
  for (std::size_t i = 0; i < roots_.size(); ++i) out *= int_pow(inner(z, roots_[i]), multiplicities_[i] - 1);
  return out;
}

Complex KernelEvaluator::k_gp(const Vec2& z, const Vec2& w) const {
  const double a = 2.0 / cfg_.p - 1.0;
  const Complex kg = averaged(z, w);
  if (a == 0.0) return kg;
  const double jz = std::abs(jacobian(z));
  const double jw = std::abs(jacobian(w));
  if (a < 0.0 && jz == 0.0) throw Error(ErrorKind::JacobianZero, "J(pi)(z) = 0 with negative exponent (z side)");
  if (a > 0.0 && jw == 0.0) throw Error(ErrorKind::JacobianZero, "J(pi)(w) = 0 with negative exponent (w side)");
  return std::pow(jz, a) * kg * std::pow(jw, -a);
}

double KernelEvaluator::sigma(const Vec2& z) const {
  const double e = 2.0 - cfg_.p;
  if (e == 0.0) return 1.0;
  const double j = std::abs(jacobian(z));
  if (e < 0.0 && j == 0.0) throw Error(ErrorKind::JacobianZero, "J(pi)(z) = 0 with p > 2");
  return std::pow(j, e);
}

double KernelEvaluator::dominating(const Vec2& z, const Vec2& w) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    const Vec2 gz = mats_[i] * z;
    const Complex d = 1.0 - inner(gz, w);
    if (std::abs(d) < kSingularGuard)
      throw Error(ErrorKind::SingularPoint, "1 - <g.z,w> vanishes for group element " + std::to_string(i));
    acc += std::abs(c_ / (d * d * d));  // same rounding as the terms of averaged()
  }
  return acc;
}

Complex ball_kernel(const BallPoint& z, const BallPoint& w, const KernelConfig& cfg) {
  const Complex d = 1.0 - inner(z.vec(), w.vec());
  if (std::abs(d) < kSingularGuard) throw Error(ErrorKind::SingularPoint, "1 - <z,w> vanishes");
  return kernel_constant(cfg) / (d * d * d);
}

Complex averaged_kernel(const ReflectionGroup& group, const BallPoint& z, const BallPoint& w,
                        const KernelConfig& cfg) {
  return KernelEvaluator(group, cfg).averaged(z.vec(), w.vec());
}

Complex jacobian_product(const ReflectionGroup& group, const BallPoint& z, const KernelConfig& cfg) {
  return KernelEvaluator(group, cfg).jacobian(z.vec());
}

Complex closed_form_jacobian_Gml(int m, int l, const BallPoint& z) {
  if (m < 1 || l < 1 || m % l != 0) throw Error(ErrorKind::BadDivisor, "closed form needs l | m");
  const Complex z1 = z.z1(), z2 = z.z2();
  const double lead = static_cast<double>(m) * m / l;
  return lead * int_pow(z1 * z2, m / l - 1) * (int_pow(z1, m) - int_pow(z2, m));
}

Complex k_gp(const ReflectionGroup& group, const BallPoint& z, const BallPoint& w, const KernelConfig& cfg) {
  return KernelEvaluator(group, cfg).k_gp(z.vec(), w.vec());
}

double weight_sigma(const ReflectionGroup& group, const BallPoint& z, double p, double jac_constant_modulus) {
  // the formula makes sense for any real p, so p is not held to (1, inf) here
  if (!std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "p must be finite");
  KernelConfig cfg;
  cfg.jac_constant_modulus = jac_constant_modulus;
  const double e = 2.0 - p;
  if (e == 0.0) return 1.0;
  const double j = std::abs(KernelEvaluator(group, cfg).jacobian(z.vec()));
  if (e < 0.0 && j == 0.0) throw Error(ErrorKind::JacobianZero, "J(pi)(z) = 0 with p > 2");
  return std::pow(j, e);
}

double dominating_sum(const ReflectionGroup& group, const BallPoint& z, const BallPoint& w,
                      const KernelConfig& cfg) {
  return KernelEvaluator(group, cfg).dominating(z.vec(), w.vec());
}

Complex cyclic_closed_form(int m, const BallPoint& z, const BallPoint& w, int truncation) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "cyclic order must be positive");
  const Complex a = z.z1() * std::conj(w.z1());
  const Complex one_minus_b = 1.0 - z.z2() * std::conj(w.z2());
  if (!(std::abs(a) < 0.5 * std::abs(one_minus_b)))
    throw Error(ErrorKind::OutsideRegion, "need |z1 conj(w1)| < |1 - z2 conj(w2)| / 2");
  if (a == Complex{}) return {0.0, 0.0};

  // K = a^{m-1} (1-b)^{-(m+2)} sum_{l>=1} C(lm+1, 2) x^{(l-1)m}, x = a / (1-b)
  const Complex x = a / one_minus_b;
  const Complex xm = int_pow(x, m);
  const double r = std::abs(xm);
  auto coeff = [m](int l) {
    const double lm = static_cast<double>(l) * m;
    return 0.5 * (lm + 1.0) * lm;
  };
  Complex sum{0.0, 0.0};
  Complex power{1.0, 0.0};
  bool converged = false;
  for (int l = 1; l <= truncation; ++l) {
    sum += coeff(l) * power;
    power *= xm;
    // coefficient ratios decrease toward 1, so the tail is dominated by a geometric series
    const double next = coeff(l + 1) * std::abs(power);
    const double ratio = coeff(l + 2) / coeff(l + 1) * r;
    if (ratio < 1.0 && next / (1.0 - ratio) <= 1e-16 * std::abs(sum)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorKind::NotConverged, "series truncated before reaching 1e-16 relative tail");
  return int_pow(a, m - 1) * sum / int_pow(one_minus_b, m + 2);
}

}  // namespace rbq
