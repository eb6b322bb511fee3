#pragma once

// Boundary-diagonal regions U_g(eps) and S_g(eps) and audits of their geometry.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbq/groups.hpp"
#include "rbq/kernels.hpp"
#include "rbq/sampling.hpp"

namespace rbq {

struct RegionQuery {
  GroupElement g;
  double epsilon;
  BallPoint z;
  BallPoint w;
};

struct PointPair {
  Vec2 z;
  Vec2 w;
};

/// (1 - |z|) + (1 - |w|) + |g.z - w|
double u_value(const Mat2& g, const Vec2& z, const Vec2& w);
/// |1 - <g.z, w>|
double s_value(const Mat2& g, const Vec2& z, const Vec2& w);
inline bool in_U(const Mat2& g, double eps, const Vec2& z, const Vec2& w) { return u_value(g, z, w) < eps; }
inline bool in_S(const Mat2& g, double eps, const Vec2& z, const Vec2& w) { return s_value(g, z, w) < eps; }
bool in_U(const RegionQuery& q);
bool in_S(const RegionQuery& q);

/// Unit vector spanning the hyperplane orthogonal to `root`.
Vec2 hyperplane_direction(const Vec2& root);

// Samplers. Each returns points of the closed ball.
/// z at log-uniform boundary distance in [1e-6, eps], w = g.z + delta.
PointPair sample_near_U(Rng& rng, const Mat2& g, double eps);
/// Concentrated on S_g(eps): w near the unit vector of g.z with tangential
/// offsets up to 2 sqrt(2 eps), both points within eps of the sphere.
PointPair sample_near_S(Rng& rng, const Mat2& g, double eps);
/// z near the hyperplane of `root` and the boundary, w = l.z + delta.
PointPair sample_near_hyperplane(Rng& rng, const Vec2& root, const Mat2& l, double eps, double spread);

/// One inclusion or exclusion being tested; violations carry a margin (how
/// far outside the target the worst point lies) and its witness.
struct RegionCheck {
  RegionCheck() = default;
  RegionCheck(std::string check_name, bool is_binding = true) : name(std::move(check_name)), binding(is_binding) {}

  std::string name;
  std::uint64_t tested = 0;
  std::uint64_t violations = 0;
  double worst_margin = 0.0;
  std::optional<PointPair> witness;
  bool binding = true;  // counts toward passed()

  void record(double margin, const PointPair& pair);
  void merge(const RegionCheck& other);
};

struct RegionReport {
  std::string audit;
  std::string group;
  double epsilon = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<RegionCheck> checks;
  std::vector<std::string> notes;

  bool passed() const;
  const RegionCheck& check(const std::string& name) const;
};

RegionReport nesting_audit(const ReflectionGroup& group, double eps, std::uint64_t samples, std::uint64_t seed);

struct DisjointnessResult {
  std::optional<double> largest_clear_eps;
  std::vector<std::pair<double, std::uint64_t>> hits;  // (eps, common points found)
  std::optional<PointPair> witness;
  double witness_eps = 0.0;
};

inline const std::vector<double> kDefaultEpsGrid{0.2, 0.1, 0.05, 0.02, 0.01};

DisjointnessResult disjointness_search(const ReflectionGroup& group, std::size_t g, std::size_t l,
                                       const std::vector<double>& eps_grid, std::uint64_t samples,
                                       std::uint64_t seed);

/// z = (1 - eps/4) v with v spanning the hyperplane of r, w = l.z.
PointPair witness_pair(const GroupElement& l, const GroupElement& r, double eps);

RegionReport triple_intersection_audit(const ReflectionGroup& group, double eps, std::uint64_t samples,
                                       std::uint64_t seed);

struct DisplacementEntry {
  std::size_t index;
  double theta;
  double constant;  // 2 sin(theta / 2)
};

struct DisplacementConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  std::vector<DisplacementEntry> per_reflection;
};

/// |1 - e^{i theta}| = 2 sin(theta/2).
double displacement_constant(double theta);
DisplacementConstants displacement_constants(const ReflectionGroup& group);

/// Checks |<z,rho>|, |<w,rho>| <= (2/C1) eps on U_r(eps) and U_id(eps);
/// C1 defaults to the constant of r itself.
RegionReport slab_audit(const GroupElement& r, double eps, std::uint64_t samples, std::uint64_t seed,
                        std::optional<double> C1 = std::nullopt);

}  // namespace rbq
