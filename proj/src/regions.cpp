#include "rbq/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "rbq/errors.hpp"

namespace rbq {

namespace {

constexpr std::size_t kChunk = 4096;

double lower_scale(double eps) { return std::min(1e-6, eps * 1e-2); }

Vec2 clamp_to_ball(const Vec2& v) {
  const double n = v.norm();
  return n > 1.0 ? Vec2(v / n) : v;
}

auto lex_key(const PointPair& p) {
  return std::make_tuple(p.z(0).real(), p.z(0).imag(), p.z(1).real(), p.z(1).imag(), p.w(0).real(),
                         p.w(0).imag(), p.w(1).real(), p.w(1).imag());
}

std::vector<RegionCheck> merge_all(const std::vector<std::vector<RegionCheck>>& parts, std::vector<RegionCheck> acc) {
  for (const auto& part : parts)
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i].merge(part[i]);
  return acc;
}

}  // namespace

double u_value(const Mat2& g, const Vec2& z, const Vec2& w) {
  return (1.0 - z.norm()) + (1.0 - w.norm()) + (g * z - w).norm();
}

double s_value(const Mat2& g, const Vec2& z, const Vec2& w) { return std::abs(1.0 - inner(g * z, w)); }

bool in_U(const RegionQuery& q) {
  if (!(q.epsilon > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  return in_U(q.g.matrix(), q.epsilon, q.z.vec(), q.w.vec());
}

bool in_S(const RegionQuery& q) {
  if (!(q.epsilon > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  return in_S(q.g.matrix(), q.epsilon, q.z.vec(), q.w.vec());
}

Vec2 hyperplane_direction(const Vec2& root) {
  const Vec2 v(-std::conj(root(1)), std::conj(root(0)));
  return v / v.norm();
}

PointPair sample_near_U(Rng& rng, const Mat2& g, double eps) {
  const double lo = lower_scale(eps);
  const Vec2 z = (1.0 - rng.log_uniform(lo, eps)) * rng.sphere();
  const Vec2 w = clamp_to_ball(g * z + rng.log_uniform(lo, eps) * rng.sphere());
  return {z, w};
}

PointPair sample_near_S(Rng& rng, const Mat2& g, double eps) {
  const double lo = lower_scale(eps);
  const Vec2 z = (1.0 - rng.log_uniform(lo, eps)) * rng.sphere();
  const Vec2 a = g * z;
  const Vec2 shifted = a / a.norm() + rng.log_uniform(lo, 2.0 * std::sqrt(2.0 * eps)) * rng.sphere();
  const double dw = rng.uniform() < 0.25 ? 0.0 : rng.log_uniform(lo, eps);
  const Vec2 w = (1.0 - dw) * shifted / shifted.norm();
  return {z, w};
}

PointPair sample_near_hyperplane(Rng& rng, const Vec2& root, const Mat2& l, double eps, double spread) {
  const double lo = lower_scale(eps);
  const Vec2 v = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi)) * hyperplane_direction(root);
  const double phi = rng.log_uniform(1e-7, std::max(spread, 2e-7));
  const Vec2 dir = std::cos(phi) * v + std::sin(phi) * std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi)) * root;
  const Vec2 z = (1.0 - rng.log_uniform(lo, eps)) * dir;
  const Vec2 w = clamp_to_ball(l * z + rng.log_uniform(lo, eps) * rng.sphere());
  return {z, w};
}

void RegionCheck::record(double margin, const PointPair& pair) {
  ++violations;
  if (!witness || margin > worst_margin || (margin == worst_margin && lex_key(pair) < lex_key(*witness))) {
    worst_margin = margin;
    witness = pair;
  }
}

void RegionCheck::merge(const RegionCheck& other) {
  tested += other.tested;
  const std::uint64_t before = violations;
  if (other.witness) {
    record(other.worst_margin, *other.witness);
    violations = before;
  }
  violations += other.violations;
}

bool RegionReport::passed() const {
  for (const auto& c : checks)
    if (c.binding && c.violations > 0) return false;
  return true;
}

const RegionCheck& RegionReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error(ErrorKind::InvalidArgument, "no check named '" + name + "'");
}

RegionReport nesting_audit(const ReflectionGroup& group, double eps, std::uint64_t samples, std::uint64_t seed) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  RegionReport report{"nesting", group.label(), eps, samples, seed, {}, {}};
  const double corrected = std::max(12.0 * eps, std::sqrt(6.0 * eps));
  std::vector<RegionCheck> base{{"U(eps) in S(3eps)"}, {"S(3eps) in U(12eps)"}, {"S(3eps) in U(max(12eps,sqrt(6eps)))"}};
  std::vector<Mat2> mats;
  for (const auto& g : group.elements()) mats.push_back(g.matrix());

  auto test = [&](std::vector<RegionCheck>& c, const Mat2& g, const PointPair& p) {
    const double u = u_value(g, p.z, p.w);
    const double s = s_value(g, p.z, p.w);
    if (u < eps) {
      ++c[0].tested;
      if (!(s < 3 * eps)) c[0].record(s - 3 * eps, p);
    }
    if (s < 3 * eps) {
      ++c[1].tested;
      ++c[2].tested;
      if (!(u < 12 * eps)) c[1].record(u - 12 * eps, p);
      if (!(u < corrected)) c[2].record(u - corrected, p);
    }
  };

  const auto parts = run_chunks<std::vector<RegionCheck>>(samples, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Rng rng(derive_seed(seed, 1, chunk));
    std::vector<RegionCheck> c = base;
    for (std::size_t i = b; i < e; ++i) {
      const Mat2& g = mats[i % mats.size()];
      const PointPair p = ((i / mats.size()) % 2 == 0) ? sample_near_U(rng, g, eps) : sample_near_S(rng, g, 3 * eps);
      test(c, g, p);
    }
    return c;
  });
  report.checks = merge_all(parts, base);

  // adversarial corner: g.z = w on the sphere
  Rng corner(derive_seed(seed, 2, 0));
  for (const auto& g : mats) {
    const Vec2 z = corner.sphere();
    test(report.checks, g, {z, g * z});
  }
  report.notes.push_back("second inclusion also tested with the radius max(12eps, sqrt(6eps))");
  return report;
}

DisjointnessResult disjointness_search(const ReflectionGroup& group, std::size_t g, std::size_t l,
                                       const std::vector<double>& eps_grid, std::uint64_t samples,
                                       std::uint64_t seed) {
  const GroupElement& ge = group.element(g);
  const GroupElement& le = group.element(l);
  const GroupElement rel = le.inverse() * ge;
  if (rel.is_identity()) throw Error(ErrorKind::IsIdentity, "l^{-1} g is the identity");
  if (is_reflection(rel)) throw Error(ErrorKind::IsReflection, "l^{-1} g is a reflection; use witness_pair");

  // eigenvector of l^{-1} g whose eigenvalue is closest to 1: the direction of closest approach
  Eigen::ComplexEigenSolver<Mat2> solver(rel.matrix());
  const auto& vals = solver.eigenvalues();
  const int best = std::abs(vals(0) - 1.0) <= std::abs(vals(1) - 1.0) ? 0 : 1;
  const Vec2 near_dir = solver.eigenvectors().col(best).normalized();

  std::vector<double> grid = eps_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  DisjointnessResult out;
  const Mat2 gm = ge.matrix(), lm = le.matrix();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double eps = grid[k];
    struct Part {
      std::uint64_t hits = 0;
      std::optional<PointPair> first;
    };
    const auto parts = run_chunks<Part>(samples, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
      Rng rng(derive_seed(seed, 10 + k, chunk));
      Part part;
      for (std::size_t i = b; i < e; ++i) {
        PointPair p;
        if (i % 2 == 0) {
          p = sample_near_U(rng, gm, eps);
        } else {
          const double lo = lower_scale(eps);
          const Vec2 dir = (std::polar(1.0, rng.uniform(0.0, 2 * std::numbers::pi)) * near_dir +
                            rng.log_uniform(1e-7, 0.5) * rng.sphere())
                               .normalized();
          const Vec2 z = (1.0 - rng.log_uniform(lo, eps)) * dir;
          p = {z, clamp_to_ball(gm * z + rng.log_uniform(lo, eps) * rng.sphere())};
        }
        if (in_U(gm, eps, p.z, p.w) && in_U(lm, eps, p.z, p.w)) {
          ++part.hits;
          if (!part.first) part.first = p;
        }
      }
      return part;
    });
    std::uint64_t hits = 0;
    for (const auto& part : parts) {
      hits += part.hits;
      if (part.first && !out.witness) {
        out.witness = part.first;
        out.witness_eps = eps;
      }
    }
    out.hits.emplace_back(eps, hits);
    if (hits == 0 && !out.largest_clear_eps) out.largest_clear_eps = eps;
  }
  return out;
}

PointPair witness_pair(const GroupElement& l, const GroupElement& r, double eps) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  const auto info = is_reflection(r);
  if (!info) throw Error(ErrorKind::NotReflection, "witness_pair needs a reflection");
  const double radius = std::max(0.0, 1.0 - eps / 4.0);
  const Vec2 z = radius * hyperplane_direction(info->root);
  return {z, l.apply(z)};
}

RegionReport triple_intersection_audit(const ReflectionGroup& group, double eps, std::uint64_t samples,
                                       std::uint64_t seed) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  RegionReport report{"triple", group.label(), eps, samples, seed, {}, {}};
  bool high_order = false;
  for (const auto& h : group.hyperplanes()) high_order = high_order || h.multiplicity >= 3;

  RegionCheck witness{"order>=3 witness memberships"};
  for (const auto& h : group.hyperplanes()) {
    if (h.multiplicity < 3) continue;
    // a generator of the cyclic subgroup fixing the hyperplane
    std::size_t gen = h.members.front();
    for (auto idx : h.members)
      if (group.element(idx).order() == h.multiplicity) gen = idx;
    const GroupElement& r = group.element(gen);
    std::vector<GroupElement> powers{GroupElement::identity()};
    for (int j = 1; j < h.multiplicity; ++j) powers.push_back(powers.back() * r);
    for (int j = 0; j < h.multiplicity; ++j) {
      const PointPair p = witness_pair(powers[static_cast<std::size_t>(j)], r, eps);
      for (const auto& rk : powers) {
        ++witness.tested;
        const double u = u_value(rk.matrix(), p.z, p.w);
        if (!(u < eps)) witness.record(u - eps, p);
      }
    }
  }

  std::vector<Mat2> mats;
  for (const auto& g : group.elements()) mats.push_back(g.matrix());
  std::vector<Vec2> roots;
  for (const auto& h : group.hyperplanes()) roots.push_back(h.root);

  RegionCheck triples{"points in three or more regions"};
  triples.binding = !high_order;
  const std::vector<RegionCheck> base{triples};
  const auto parts = run_chunks<std::vector<RegionCheck>>(samples, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Rng rng(derive_seed(seed, 3, chunk));
    std::vector<RegionCheck> c = base;
    for (std::size_t i = b; i < e; ++i) {
      const Mat2& g = mats[rng.index(mats.size())];
      PointPair p;
      if (!roots.empty() && i % 2 == 1)
        p = sample_near_hyperplane(rng, roots[rng.index(roots.size())], g, eps, eps);
      else
        p = sample_near_U(rng, g, eps);
      ++c[0].tested;
      int inside = 0;
      double third = INFINITY;
      std::vector<double> values;
      for (const auto& m : mats) values.push_back(u_value(m, p.z, p.w));
      std::sort(values.begin(), values.end());
      for (double v : values) inside += v < eps ? 1 : 0;
      if (values.size() >= 3) third = values[2];
      if (inside >= 3) c[0].record(eps - third, p);
    }
    return c;
  });
  report.checks = merge_all(parts, base);
  if (high_order) {
    report.checks.push_back(witness);
    report.notes.push_back("group has a reflection of order >= 3: triple intersections are expected and the explicit witness is verified instead");
  } else {
    report.notes.push_back("all reflections have order 2: no sampled point may lie in three regions");
  }
  if (group.order() < 3) report.notes.push_back("fewer than three regions: vacuous");
  return report;
}

double displacement_constant(double theta) { return 2.0 * std::sin(theta / 2.0); }

DisplacementConstants displacement_constants(const ReflectionGroup& group) {
  if (group.reflections().empty()) throw Error(ErrorKind::NoReflections, "group has no reflections");
  DisplacementConstants out;
  out.C1 = INFINITY;
  for (auto idx : group.reflections()) {
    const double theta = group.reflection_info(idx)->angle;
    const double c = displacement_constant(theta);
    out.per_reflection.push_back({idx, theta, c});
    out.C1 = std::min(out.C1, c);
    out.C2 = std::max(out.C2, c);
  }
  return out;
}

RegionReport slab_audit(const GroupElement& r, double eps, std::uint64_t samples, std::uint64_t seed,
                        std::optional<double> C1) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  const auto info = is_reflection(r);
  if (!info) throw Error(ErrorKind::NotReflection, "slab_audit needs a reflection");
  const double C = C1 ? *C1 : displacement_constant(info->angle);
  const double bound = 2.0 * eps / C;
  const Vec2 rho = info->root;
  const Mat2 rm = r.matrix();
  const Mat2 id = Mat2::Identity();
  RegionReport report{"slab", "<r>", eps, samples, seed, {}, {}};
  report.notes.push_back("c = 2/C1 = " + std::to_string(2.0 / C));

  auto test = [&](RegionCheck& c, const PointPair& p) {
    if (!(in_U(rm, eps, p.z, p.w) && in_U(id, eps, p.z, p.w))) return;
    ++c.tested;
    const double worst = std::max(std::abs(inner(p.z, rho)), std::abs(inner(p.w, rho)));
    if (worst > bound) c.record(worst - bound, p);
  };
  const std::vector<RegionCheck> base{{"slab |<z,rho>|,|<w,rho>| <= (2/C1) eps"}};
  const auto parts = run_chunks<std::vector<RegionCheck>>(samples, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Rng rng(derive_seed(seed, 4, chunk));
    std::vector<RegionCheck> c = base;
    for (std::size_t i = b; i < e; ++i) {
      PointPair p;
      switch (i % 4) {
        case 0:
        case 1: p = sample_near_hyperplane(rng, rho, id, eps, 1.5 * bound); break;
        case 2: p = sample_near_hyperplane(rng, rho, rm, eps, 1.5 * bound); break;
        default: p = sample_near_U(rng, id, eps); break;
      }
      test(c[0], p);
    }
    return c;
  });
  report.checks = merge_all(parts, base);
  test(report.checks[0], witness_pair(GroupElement::identity(), r, eps));
  if (report.checks[0].tested == 0) report.notes.push_back("no sample landed in U_r(eps) and U_id(eps)");
  return report;
}

}  // namespace rbq
