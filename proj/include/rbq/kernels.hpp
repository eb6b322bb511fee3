#pragma once

// Kernel evaluation on the unit ball of C^2.

#include <vector>

#include "rbq/groups.hpp"

namespace rbq {

/// A point of the closed unit ball (|z|^2 <= 1 + 1e-12).
class BallPoint {
public:
  BallPoint(Complex z1, Complex z2);
  explicit BallPoint(const Vec2& v);

  const Vec2& vec() const { return v_; }
  Complex z1() const { return v_(0); }
  Complex z2() const { return v_(1); }
  double norm() const { return v_.norm(); }

private:
  Vec2 v_;
};

struct KernelConfig {
  bool normalized = false;          // include 2/pi^2
  double p = 2.0;                   // exponent, strictly inside (1, inf)
  double jac_constant_modulus = 1.0;

  void validate() const;
};

/// <a, b> = a1 conj(b1) + a2 conj(b2).
inline Complex inner(const Vec2& a, const Vec2& b) { return a(0) * std::conj(b(0)) + a(1) * std::conj(b(1)); }

double kernel_constant(const KernelConfig& cfg);

Complex ball_kernel(const BallPoint& z, const BallPoint& w, const KernelConfig& cfg = {});
Complex averaged_kernel(const ReflectionGroup& group, const BallPoint& z, const BallPoint& w,
                        const KernelConfig& cfg = {});
Complex jacobian_product(const ReflectionGroup& group, const BallPoint& z, const KernelConfig& cfg = {});
Complex closed_form_jacobian_Gml(int m, int l, const BallPoint& z);
Complex k_gp(const ReflectionGroup& group, const BallPoint& z, const BallPoint& w, const KernelConfig& cfg);
double weight_sigma(const ReflectionGroup& group, const BallPoint& z, double p,
                    double jac_constant_modulus = 1.0);
double dominating_sum(const ReflectionGroup& group, const BallPoint& z, const BallPoint& w,
                      const KernelConfig& cfg = {});

/// Series form of the averaged kernel of the cyclic group generated by
/// diag(e^{2 pi i/m}, 1), valid where |z1 conj(w1)| < |1 - z2 conj(w2)| / 2.
Complex cyclic_closed_form(int m, const BallPoint& z, const BallPoint& w, int truncation = 10000);

/// Hot-loop evaluator: caches matrices, determinants and hyperplane roots and
/// skips BallPoint validation.
class KernelEvaluator {
public:
  KernelEvaluator(const ReflectionGroup& group, KernelConfig cfg = {});

  const KernelConfig& config() const { return cfg_; }
  std::size_t order() const { return mats_.size(); }
  const Mat2& matrix(std::size_t i) const { return mats_[i]; }
  Complex det(std::size_t i) const { return dets_[i]; }

  Complex ball(const Vec2& z, const Vec2& w) const;
  Complex averaged(const Vec2& z, const Vec2& w) const;
  /// Averaged kernel together with (1/|G|) sum |K_B(g.z, w)|, its uncancelled scale.
  Complex averaged(const Vec2& z, const Vec2& w, double& scale) const;
  Complex jacobian(const Vec2& z) const;
  Complex k_gp(const Vec2& z, const Vec2& w) const;
  double sigma(const Vec2& z) const;
  double dominating(const Vec2& z, const Vec2& w) const;

private:
  std::vector<Mat2> mats_;
  std::vector<Complex> dets_;
  std::vector<Vec2> roots_;
  std::vector<int> multiplicities_;
  KernelConfig cfg_;
  double c_;
};

}  // namespace rbq
