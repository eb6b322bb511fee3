#pragma once

// Numerical certification of the kernel estimates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbq/groups.hpp"
#include "rbq/kernels.hpp"
#include "rbq/regions.hpp"

namespace rbq {

inline constexpr int kMaxStratum = 12;

struct SampleStrategy {
  enum class Kind { Uniform, Boundary, NearSingular, Slab };
  Kind kind = Kind::Boundary;
  std::size_t count = 1;
  std::uint64_t seed = 42;
  int k_max = kMaxStratum;
  std::size_t element = 0;     // NearSingular: index of g
  std::size_t reflection = 0;  // Slab: index of r

  std::string describe() const;
};

struct StratumStat {
  int k = 0;
  double sup_ratio = 0.0;
  std::uint64_t count = 0;
  std::optional<PointPair> argmax;
};

struct BoundReport {
  std::string group;
  std::string region;  // "all" for the main bound
  double p = 2.0;
  std::vector<std::string> strategies;
  double sup_ratio = 0.0;
  std::optional<PointPair> argmax;
  std::vector<StratumStat> per_stratum;
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;  // singular or Jacobian-zero points skipped
  bool empty = false;

  void add(int k, double ratio, const PointPair& pair);
  void merge(const BoundReport& other);
  void finalize();
};

/// R(z,w) = |K_{G,p}(z,w)| / sum_g |K_B(g.z,w)|.
double bound_ratio(const KernelEvaluator& ev, const Vec2& z, const Vec2& w);

BoundReport bound_ratio_report(const ReflectionGroup& group, double p, const std::vector<SampleStrategy>& strategies,
                               const KernelConfig& cfg = {});

/// Boundary, near-singular for every g, and slab for every reflection, with
/// `total` samples split among them.
std::vector<SampleStrategy> default_strategies(const ReflectionGroup& group, std::size_t total, std::uint64_t seed);

struct InvarianceReport {
  std::uint64_t tested = 0;
  double group_residual = 0.0;          // R(g.z,w) vs R(z,w), relative to the uncancelled scale
  double constant_residual = 0.0;       // R under c_pi in {0.1, 10}, same scale
  double normalization_residual = 0.0;  // R with and without 2/pi^2, same scale
};

InvarianceReport r_invariance(const ReflectionGroup& group, double p, std::uint64_t samples, std::uint64_t seed);

struct SeriesResidual {
  int m = 0;
  std::uint64_t samples = 0;
  double max_residual = 0.0;
  std::optional<PointPair> argmax;
  std::uint64_t zero_points = 0;
  double zero_point_max_abs = 0.0;
};

/// Series form against a 50-digit direct m-term average on the region
/// |z1 conj(w1)| < |1 - z2 conj(w2)| / 2.
SeriesResidual series_residual(int m, std::uint64_t samples, std::uint64_t seed);

struct RegionBoundAudit {
  double epsilon = 0.0;
  std::vector<BoundReport> reports;
  std::vector<std::string> empty_regions;
};

/// Sup of |K_{G,p}| / |K_B(g.z,w)| on I_g(eps) and of R on U_r(eps) and
/// U_id(eps) and on U_g(eps) and U_h(eps) with h^{-1} g a reflection.
RegionBoundAudit region_bound_audit(const ReflectionGroup& group, double p, double eps, std::uint64_t samples,
                                    std::uint64_t seed);

/// Holomorphic test function: a polynomial in w times optional powers of
/// <w, rho> for given roots.
struct TestFunction {
  struct Term {
    Complex coeff;
    int a1;
    int a2;
  };
  std::string id;
  std::vector<Term> terms;
  std::vector<std::pair<Vec2, int>> factors;

  Complex operator()(const Vec2& w) const;
  int degree() const;
};

/// Monomials of degree <= 4 and three seeded random combinations.
std::vector<TestFunction> builtin_family(std::uint64_t seed = 42);
/// The family above times J(pi) for the group (roots of its hyperplanes).
std::vector<TestFunction> jacobian_family(const ReflectionGroup& group, std::uint64_t seed = 42);
const TestFunction& find_function(const std::vector<TestFunction>& family, const std::string& id);

struct QuadratureSpec {
  std::size_t nodes = 200000;
  std::uint64_t seed = 42;
  int scales = 6;
  double unstable_fraction = 0.1;
};

struct QuadratureResult {
  Complex value;
  double std_error = 0.0;
  double abs_integral = 0.0;  // estimate of the integral of |K_G f|
  std::size_t nodes = 0;
};

/// Monte Carlo estimate of the integral of K_G(z,w) f(w) dV(w) with the
/// normalized kernel. Throws QuadratureUnstable when the standard error
/// exceeds the configured fraction of max(|value|, abs_integral).
QuadratureResult operator_apply(const ReflectionGroup& group, const TestFunction& f, const Vec2& z,
                                const QuadratureSpec& spec = {});

/// (1/|G|) sum_g J(g) f(g.z): the projection of a holomorphic f.
Complex skew_symmetrize(const ReflectionGroup& group, const TestFunction& f, const Vec2& z);

struct ScanCell {
  double p = 2.0;
  std::string function;
  double norm_Qf = 0.0;
  double norm_f = 0.0;
  double ratio = 0.0;
  double rel_error = 0.0;  // larger relative standard error of the two integrals
  bool unstable = false;
  bool excluded = false;   // f is not in L^p(sigma)
};

struct ScanTable {
  std::string group;
  std::size_t nodes = 0;
  std::vector<ScanCell> cells;

  bool any_unstable() const;
  double max_ratio() const;
};

ScanTable weighted_norm_scan(const ReflectionGroup& group, const std::vector<double>& p_grid,
                             const std::vector<TestFunction>& family, const QuadratureSpec& spec = {});

struct SymmetryCheck {
  std::string name;
  std::uint64_t tested = 0;
  std::uint64_t violations = 0;
  double max_residual = 0.0;
};

struct SymmetryReport {
  std::string group;
  std::vector<SymmetryCheck> checks;
  bool mutation_detected = false;

  bool passed() const;
};

/// Two displayed forms of K_G, Hermitian symmetry, skew covariance, modulus
/// invariance of K_{G,p} and hyperplane vanishing, plus a harness self-test
/// that perturbs one J(g) by 1%.
SymmetryReport symmetry_suite(const ReflectionGroup& group, std::uint64_t samples, std::uint64_t seed);

}  // namespace rbq
