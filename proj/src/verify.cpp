#include "rbq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "rbq/errors.hpp"
#include "rbq/sampling.hpp"

namespace rbq {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr double kBallVolume = std::numbers::pi * std::numbers::pi / 2.0;

auto lex_key(const PointPair& p) {
  return std::make_tuple(p.z(0).real(), p.z(0).imag(), p.z(1).real(), p.z(1).imag(), p.w(0).real(),
                         p.w(0).imag(), p.w(1).real(), p.w(1).imag());
}

bool better(double ratio, const PointPair& pair, double best, const std::optional<PointPair>& best_pair) {
  if (!best_pair) return true;
  if (ratio != best) return ratio > best;
  return lex_key(pair) < lex_key(*best_pair);
}

int stratum_of(double d, int k_max) {
  if (!(d > 0)) return k_max;
  const int k = static_cast<int>(std::floor(-std::log2(d)));
  return std::clamp(k, 0, k_max);
}

double stratum_distance(Rng& rng, int k) {
  return rng.log_uniform(std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k));
}

Vec2 unit_or(const Vec2& v, Rng& rng) {
  const double n = v.norm();
  return n > 1e-300 ? Vec2(v / n) : rng.sphere();
}

// w near x.z at the scales of stratum k: boundary distance ~ 2^-k, offsets
// from 1e-3 2^-k up to a few multiples of 2^{-k/2}.
Vec2 partner(Rng& rng, const Vec2& xz, int k) {
  const double d = std::ldexp(1.0, -k);
  const double offset = rng.log_uniform(1e-3 * d, std::min(2.0, 4.0 * std::sqrt(d)));
  const Vec2 dir = unit_or(xz + offset * rng.sphere(), rng);
  const double dw = std::min(1.0, rng.log_uniform(d / 16.0, 2.0 * d));
  return (1.0 - dw) * dir;
}

Complex int_pow(Complex x, int k) {
  Complex out{1.0, 0.0};
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

}  // namespace

// ------------------------------------------------------------------ reports

std::string SampleStrategy::describe() const {
  switch (kind) {
    case Kind::Uniform: return "uniform(" + std::to_string(count) + ")";
    case Kind::Boundary: return "boundary(k_max=" + std::to_string(k_max) + "," + std::to_string(count) + ")";
    case Kind::NearSingular: return "near_singular(g=" + std::to_string(element) + "," + std::to_string(count) + ")";
    case Kind::Slab: return "slab(r=" + std::to_string(reflection) + "," + std::to_string(count) + ")";
  }
  return "unknown";
}

void BoundReport::add(int k, double ratio, const PointPair& pair) {
  ++samples;
  if (per_stratum.size() <= static_cast<std::size_t>(k)) {
    const auto old = per_stratum.size();
    per_stratum.resize(static_cast<std::size_t>(k) + 1);
    for (auto i = old; i < per_stratum.size(); ++i) per_stratum[i].k = static_cast<int>(i);
  }
  auto& s = per_stratum[static_cast<std::size_t>(k)];
  ++s.count;
  if (better(ratio, pair, s.sup_ratio, s.argmax)) {
    s.sup_ratio = ratio;
    s.argmax = pair;
  }
}

void BoundReport::merge(const BoundReport& other) {
  samples += other.samples;
  failures += other.failures;
  if (per_stratum.size() < other.per_stratum.size()) {
    const auto old = per_stratum.size();
    per_stratum.resize(other.per_stratum.size());
    for (auto i = old; i < per_stratum.size(); ++i) per_stratum[i].k = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < other.per_stratum.size(); ++i) {
    const auto& o = other.per_stratum[i];
    auto& s = per_stratum[i];
    s.count += o.count;
    if (o.argmax && better(o.sup_ratio, *o.argmax, s.sup_ratio, s.argmax)) {
      s.sup_ratio = o.sup_ratio;
      s.argmax = o.argmax;
    }
  }
}

void BoundReport::finalize() {
  sup_ratio = 0.0;
  argmax.reset();
  for (const auto& s : per_stratum)
    if (s.argmax && better(s.sup_ratio, *s.argmax, sup_ratio, argmax)) {
      sup_ratio = s.sup_ratio;
      argmax = s.argmax;
    }
  empty = samples == 0;
}

double bound_ratio(const KernelEvaluator& ev, const Vec2& z, const Vec2& w) {
  return std::abs(ev.k_gp(z, w)) / ev.dominating(z, w);
}

// ---------------------------------------------------------------- main bound

std::vector<SampleStrategy> default_strategies(const ReflectionGroup& group, std::size_t total, std::uint64_t seed) {
  std::vector<SampleStrategy> out;
  using K = SampleStrategy::Kind;
  // half boundary, a quarter split over near_singular(g), a quarter over slab(r)
  const std::size_t refl = group.reflections().size();
  const std::size_t quarter = total / 4;
  const std::size_t per_g = std::max<std::size_t>(1, quarter / group.order());
  const std::size_t per_r = refl ? std::max<std::size_t>(1, quarter / refl) : 0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < group.order(); ++i) {
    out.push_back({K::NearSingular, per_g, seed, kMaxStratum, i, 0});
    used += per_g;
  }
  for (std::size_t j = 0; j < refl; ++j) {
    out.push_back({K::Slab, per_r, seed, kMaxStratum, 0, group.reflections()[j]});
    used += per_r;
  }
  out.insert(out.begin(), {K::Boundary, total > used ? total - used : 1, seed, kMaxStratum, 0, 0});
  return out;
}

BoundReport bound_ratio_report(const ReflectionGroup& group, double p, const std::vector<SampleStrategy>& strategies,
                               const KernelConfig& cfg) {
  KernelConfig c = cfg;
  c.p = p;
  const KernelEvaluator ev(group, c);
  BoundReport report;
  report.group = group.label();
  report.region = "all";
  report.p = p;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const auto& st = strategies[s];
    if (st.count < 1) throw Error(ErrorKind::InvalidArgument, "strategy count must be at least 1");
    report.strategies.push_back(st.describe());
    Vec2 slab_root(1, 0);
    Mat2 slab_r = Mat2::Identity();
    if (st.kind == SampleStrategy::Kind::Slab) {
      const auto& info = group.reflection_info(st.reflection);
      if (!info) throw Error(ErrorKind::NotReflection, "slab strategy needs a reflection");
      slab_root = info->root;
      slab_r = group.element(st.reflection).matrix();
    }
    const int strata = st.k_max + 1;
    const auto parts = run_chunks<BoundReport>(st.count, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
      Rng rng(derive_seed(st.seed, 100 + s, chunk));
      BoundReport part;
      for (std::size_t i = b; i < e; ++i) {
        int k = static_cast<int>(i % static_cast<std::size_t>(strata));
        PointPair pair;
        switch (st.kind) {
          case SampleStrategy::Kind::Uniform:
            pair = {rng.ball(), rng.ball()};
            k = stratum_of(1.0 - pair.z.norm(), st.k_max);
            break;
          case SampleStrategy::Kind::Boundary: {
            const Vec2 z = (1.0 - stratum_distance(rng, k)) * rng.sphere();
            pair = {z, partner(rng, ev.matrix(rng.index(ev.order())) * z, k)};
            break;
          }
          case SampleStrategy::Kind::NearSingular: {
            const Vec2 z = (1.0 - stratum_distance(rng, k)) * rng.sphere();
            pair = {z, partner(rng, ev.matrix(st.element) * z, k)};
            break;
          }
          case SampleStrategy::Kind::Slab: {
            const double d = std::ldexp(1.0, -k);
            const Vec2 v = std::polar(1.0, rng.uniform(0, 2 * std::numbers::pi)) * hyperplane_direction(slab_root);
            const double phi = rng.log_uniform(1e-3 * d, std::min(1.5, 4.0 * std::sqrt(d)));
            const Vec2 dir = std::cos(phi) * v + std::sin(phi) * std::polar(1.0, rng.uniform(0, 2 * std::numbers::pi)) * slab_root;
            const Vec2 z = (1.0 - stratum_distance(rng, k)) * dir;
            pair = {z, partner(rng, (rng.uniform() < 0.5 ? slab_r : Mat2::Identity()) * z, k)};
            break;
          }
        }
        try {
          part.add(k, bound_ratio(ev, pair.z, pair.w), pair);
        } catch (const Error&) {
          ++part.failures;
        }
      }
      return part;
    });
    for (const auto& part : parts) report.merge(part);
  }
  report.finalize();
  return report;
}

InvarianceReport r_invariance(const ReflectionGroup& group, double p, std::uint64_t samples, std::uint64_t seed) {
  KernelConfig base;
  base.p = p;
  KernelConfig small = base, large = base, normalized = base;
  small.jac_constant_modulus = 0.1;
  large.jac_constant_modulus = 10.0;
  normalized.normalized = true;
  const KernelEvaluator ev(group, base), ev_small(group, small), ev_large(group, large), ev_norm(group, normalized);
  const double a = 2.0 / p - 1.0;
  const double n = static_cast<double>(group.order());

  struct Part {
    InvarianceReport r;
  };
  const auto parts = run_chunks<Part>(samples, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Rng rng(derive_seed(seed, 7, chunk));
    Part part;
    for (std::size_t i = b; i < e; ++i) {
      const int k = static_cast<int>(i % (kMaxStratum + 1));
      const Vec2 z = (1.0 - stratum_distance(rng, k)) * rng.sphere();
      const Vec2 w = partner(rng, ev.matrix(rng.index(ev.order())) * z, k);
      double r0 = 0;
      try {
        r0 = bound_ratio(ev, z, w);
      } catch (const Error&) {
        continue;
      }
      ++part.r.tested;
      const double jz = std::abs(ev.jacobian(z)), jw = std::abs(ev.jacobian(w));
      const double uncancelled = (a == 0.0 ? 1.0 : std::pow(jz / jw, a)) / n;
      for (std::size_t g = 0; g < ev.order(); ++g) {
        const double rg = bound_ratio(ev, ev.matrix(g) * z, w);
        part.r.group_residual = std::max(part.r.group_residual, std::abs(rg - r0) / uncancelled);
      }
      auto relative = [r0, uncancelled](double other) { return std::abs(other - r0) / uncancelled; };
      part.r.constant_residual = std::max({part.r.constant_residual, relative(bound_ratio(ev_small, z, w)),
                                           relative(bound_ratio(ev_large, z, w))});
      part.r.normalization_residual = std::max(part.r.normalization_residual, relative(bound_ratio(ev_norm, z, w)));
    }
    return part;
  });
  InvarianceReport out;
  for (const auto& part : parts) {
    out.tested += part.r.tested;
    out.group_residual = std::max(out.group_residual, part.r.group_residual);
    out.constant_residual = std::max(out.constant_residual, part.r.constant_residual);
    out.normalization_residual = std::max(out.normalization_residual, part.r.normalization_residual);
  }
  return out;
}

// -------------------------------------------------------------------- series

SeriesResidual series_residual(int m, std::uint64_t samples, std::uint64_t seed) {
  // The m-term average cancels down to |a|^{m-1}; 200 digits keep the oracle
  // exact well below the smallest |a| the sampler draws.
  using F = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;
  using CF = boost::multiprecision::number<boost::multiprecision::complex_adaptor<boost::multiprecision::cpp_bin_float<200>>>;
  const F two_pi = 2 * boost::math::constants::pi<F>();
  std::vector<CF> roots;
  for (int k = 0; k < m; ++k) roots.emplace_back(cos(two_pi * k / m), sin(two_pi * k / m));

  auto direct = [&](Complex a, Complex b) {
    const CF A(F(a.real()), F(a.imag())), B(F(b.real()), F(b.imag()));
    CF acc(0);
    for (const auto& th : roots) {
      const CF d = CF(1) - th * A - B;
      acc += th / (d * d * d);
    }
    acc /= m;
    return Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  };

  struct Part {
    SeriesResidual r;
  };
  const auto parts = run_chunks<Part>(samples, kChunk / 4, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Rng rng(derive_seed(seed, 32, chunk));
    Part part;
    for (std::size_t i = b; i < e; ++i) {
      Vec2 z, w;
      Complex a, one_minus_b;
      do {
        if (i % 2 == 0) {
          z = rng.ball();
          w = rng.ball();
        } else {
          z = (1.0 - rng.log_uniform(1e-6, 1.0)) * rng.sphere();
          w = (1.0 - rng.log_uniform(1e-6, 1.0)) * rng.sphere();
        }
        if (i % 10 == 3) z(0) *= rng.log_uniform(1e-8, 1e-3);
        a = z(0) * std::conj(w(0));
        one_minus_b = 1.0 - z(1) * std::conj(w(1));
      } while (!(std::abs(a) < 0.5 * std::abs(one_minus_b)));
      if (i % 50 == 7) z(0) = 0.0;  // prefactor vanishes
      const Complex series = cyclic_closed_form(m, BallPoint(z), BallPoint(w));
      const Complex exact = direct(z(0) * std::conj(w(0)), z(1) * std::conj(w(1)));
      ++part.r.samples;
      if (z(0) == Complex{}) {
        ++part.r.zero_points;
        part.r.zero_point_max_abs = std::max({part.r.zero_point_max_abs, std::abs(series), std::abs(exact)});
        continue;
      }
      if (std::abs(exact) < 1e-300) continue;
      const double res = std::abs(exact - series) / std::abs(exact);
      if (!part.r.argmax || res > part.r.max_residual) {
        part.r.max_residual = res;
        part.r.argmax = PointPair{z, w};
      }
    }
    return part;
  });
  SeriesResidual out;
  out.m = m;
  for (const auto& part : parts) {
    out.samples += part.r.samples;
    out.zero_points += part.r.zero_points;
    out.zero_point_max_abs = std::max(out.zero_point_max_abs, part.r.zero_point_max_abs);
    if (part.r.argmax && (!out.argmax || part.r.max_residual > out.max_residual)) {
      out.max_residual = part.r.max_residual;
      out.argmax = part.r.argmax;
    }
  }
  return out;
}

// ------------------------------------------------------------- region bounds

RegionBoundAudit region_bound_audit(const ReflectionGroup& group, double p, double eps, std::uint64_t samples,
                                    std::uint64_t seed) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  KernelConfig cfg;
  cfg.p = p;
  const KernelEvaluator ev(group, cfg);
  const std::size_t n = group.order();
  RegionBoundAudit out;
  out.epsilon = eps;

  // reflection partner lists: rel[g] = { l : l^{-1} g is a reflection }
  std::vector<std::vector<std::size_t>> rel(n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t l = 0; l < n; ++l)
      if (l != g && group.reflection_info(group.product_index(group.inverse_index(l), g))) rel[g].push_back(l);

  std::uint64_t stream = 200;
  auto run = [&](const std::string& name, auto&& propose, auto&& accept, auto&& ratio) {
    const std::uint64_t my_stream = stream++;
    const auto parts = run_chunks<BoundReport>(samples, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
      Rng rng(derive_seed(seed, my_stream, chunk));
      BoundReport part;
      for (std::size_t i = b; i < e; ++i) {
        const PointPair pair = propose(rng);
        if (!accept(pair)) continue;
        try {
          part.add(stratum_of(1.0 - pair.z.norm(), kMaxStratum), ratio(pair), pair);
        } catch (const Error&) {
          ++part.failures;
        }
      }
      return part;
    });
    BoundReport report;
    report.group = group.label();
    report.region = name;
    report.p = p;
    report.strategies.push_back("targeted(" + std::to_string(samples) + ")");
    for (const auto& part : parts) report.merge(part);
    report.finalize();
    if (report.empty) out.empty_regions.push_back(name);
    out.reports.push_back(std::move(report));
  };

  for (std::size_t g = 0; g < n; ++g) {
    const Mat2 gm = ev.matrix(g);
    run(
        "I_g[" + std::to_string(g) + "]", [&](Rng& rng) { return sample_near_U(rng, gm, eps); },
        [&](const PointPair& q) {
          if (!in_U(gm, eps, q.z, q.w)) return false;
          for (auto l : rel[g])
            if (in_U(ev.matrix(l), eps, q.z, q.w)) return false;
          return true;
        },
        [&](const PointPair& q) { return std::abs(ev.k_gp(q.z, q.w)) / std::abs(ev.ball(gm * q.z, q.w)); });
  }
  const Mat2 id = Mat2::Identity();
  for (auto r : group.reflections()) {
    const Mat2 rm = ev.matrix(r);
    const Vec2 root = group.reflection_info(r)->root;
    run(
        "U_r[" + std::to_string(r) + "]&U_id",
        [&](Rng& rng) { return sample_near_hyperplane(rng, root, rng.uniform() < 0.5 ? id : rm, eps, eps); },
        [&](const PointPair& q) { return in_U(rm, eps, q.z, q.w) && in_U(id, eps, q.z, q.w); },
        [&](const PointPair& q) { return bound_ratio(ev, q.z, q.w); });
  }
  for (std::size_t g = 0; g < n; ++g)
    for (auto h : rel[g]) {
      // z near the hyperplane of r = h^{-1} g, w near h.z (then g.z = h r z is close too)
      const std::size_t r = group.product_index(group.inverse_index(h), g);
      const Vec2 root = group.reflection_info(r)->root;
      const Mat2 gm = ev.matrix(g), hm = ev.matrix(h);
      run(
          "U_g[" + std::to_string(g) + "]&U_h[" + std::to_string(h) + "]",
          [&](Rng& rng) { return sample_near_hyperplane(rng, root, rng.uniform() < 0.5 ? hm : gm, eps, eps); },
          [&](const PointPair& q) { return in_U(gm, eps, q.z, q.w) && in_U(hm, eps, q.z, q.w); },
          [&](const PointPair& q) { return bound_ratio(ev, q.z, q.w); });
    }
  return out;
}

// ---------------------------------------------------------- test functions

Complex TestFunction::operator()(const Vec2& w) const {
  Complex acc{0.0, 0.0};
  for (const auto& t : terms) acc += t.coeff * int_pow(w(0), t.a1) * int_pow(w(1), t.a2);
  for (const auto& [root, k] : factors) acc *= int_pow(inner(w, root), k);
  return acc;
}

int TestFunction::degree() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.a1 + t.a2);
  for (const auto& f : factors) d += f.second;
  return d;
}

std::vector<TestFunction> builtin_family(std::uint64_t seed) {
  std::vector<TestFunction> out;
  for (int deg = 0; deg <= 4; ++deg)
    for (int a1 = deg; a1 >= 0; --a1) {
      const int a2 = deg - a1;
      out.push_back({"w1^" + std::to_string(a1) + "w2^" + std::to_string(a2), {{Complex(1.0), a1, a2}}, {}});
    }
  Rng rng(derive_seed(seed, 900, 0));
  for (int c = 0; c < 3; ++c) {
    TestFunction f{"combo" + std::to_string(c), {}, {}};
    for (int deg = 0; deg <= 4; ++deg)
      for (int a1 = deg; a1 >= 0; --a1) f.terms.push_back({Complex(rng.normal(), rng.normal()), a1, deg - a1});
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<TestFunction> jacobian_family(const ReflectionGroup& group, std::uint64_t seed) {
  auto out = builtin_family(seed);
  for (auto& f : out) {
    f.id = "J*" + f.id;
    for (const auto& h : group.hyperplanes()) f.factors.emplace_back(h.root, h.multiplicity - 1);
  }
  return out;
}

const TestFunction& find_function(const std::vector<TestFunction>& family, const std::string& id) {
  for (const auto& f : family)
    if (f.id == id) return f;
  throw Error(ErrorKind::InvalidArgument, "unknown test function '" + id + "'");
}

Complex skew_symmetrize(const ReflectionGroup& group, const TestFunction& f, const Vec2& z) {
  Complex acc{0.0, 0.0};
  for (const auto& g : group.elements()) acc += g.det() * f(g.apply(z));
  return acc / static_cast<double>(group.order());
}

// ------------------------------------------------------------ quadrature

namespace {

// Involutive ball automorphism exchanging 0 and a.
Vec2 mobius(const Vec2& a, const Vec2& v) {
  const double a2 = a.squaredNorm();
  if (a2 == 0.0) return -v;
  const Complex va = inner(v, a);
  const Vec2 pv = (va / a2) * a;
  const Vec2 qv = v - pv;
  const double s = std::sqrt(1.0 - a2);
  return (a - pv - s * qv) / (1.0 - va);
}

double mobius_density(const Vec2& a, const Vec2& w) {
  const double t = (1.0 - a.squaredNorm()) / std::norm(1.0 - inner(w, a));
  return t * t * t / kBallVolume;
}

}  // namespace

QuadratureResult operator_apply(const ReflectionGroup& group, const TestFunction& f, const Vec2& z,
                                const QuadratureSpec& spec) {
  if (spec.nodes < 2) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least two nodes");
  KernelConfig cfg;
  cfg.normalized = true;
  const KernelEvaluator ev(group, cfg);

  // centres along each g.z at boundary distances geometric between 1 - |z|^2 and 1
  std::vector<Vec2> centres;
  const double delta_min = std::max(1.0 - z.squaredNorm(), 1e-12);
  const int scales = std::max(1, spec.scales);
  for (std::size_t g = 0; g < ev.order(); ++g) {
    const Vec2 gz = ev.matrix(g) * z;
    const double n = gz.norm();
    if (n == 0.0) break;
    for (int j = 0; j < scales; ++j) {
      const double delta = std::pow(delta_min, 1.0 - static_cast<double>(j) / scales);
      centres.push_back(std::sqrt(1.0 - delta) * gz / n);
    }
  }

  struct Acc {
    Complex sum{0.0, 0.0};
    double sq = 0.0;
    double abs_sum = 0.0;
  };
  const auto parts = run_chunks<Acc>(spec.nodes, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Rng rng(derive_seed(spec.seed, 500, chunk));
    Acc acc;
    for (std::size_t i = b; i < e; ++i) {
      Vec2 w;
      if (centres.empty() || rng.uniform() < 0.5)
        w = rng.ball();
      else
        w = mobius(centres[rng.index(centres.size())], rng.ball());
      double q = 1.0 / kBallVolume;
      if (!centres.empty()) {
        double mix = 0.0;
        for (const auto& c : centres) mix += mobius_density(c, w);
        q = 0.5 * q + 0.5 * mix / static_cast<double>(centres.size());
      }
      const Complex value = ev.averaged(z, w) * f(w) / q;
      acc.sum += value;
      acc.sq += std::norm(value);
      acc.abs_sum += std::abs(value);
    }
    return acc;
  });
  Acc total;
  for (const auto& a : parts) {
    total.sum += a.sum;
    total.sq += a.sq;
    total.abs_sum += a.abs_sum;
  }
  const double n = static_cast<double>(spec.nodes);
  QuadratureResult out;
  out.nodes = spec.nodes;
  out.value = total.sum / n;
  const double var = std::max(0.0, (total.sq / n - std::norm(out.value)) * n / (n - 1.0));
  out.std_error = std::sqrt(var / n);
  out.abs_integral = total.abs_sum / n;
  const double scale = std::max(std::abs(out.value), out.abs_integral);
  if (out.std_error > spec.unstable_fraction * scale)
    throw Error(ErrorKind::QuadratureUnstable, "standard error " + std::to_string(out.std_error) + " exceeds " +
                                                   std::to_string(spec.unstable_fraction) + " of " + std::to_string(scale));
  return out;
}

// ------------------------------------------------------------ weighted scan

namespace {

// Vanishing order of f along the hyperplane orthogonal to `root`.
int vanishing_order(const TestFunction& f, const Vec2& root) {
  const Vec2 v = std::polar(0.6, 0.37) * hyperplane_direction(root);
  const Complex s = std::polar(1.0, 1.1);
  const double t1 = 1e-3, t2 = 1e-4;
  const double f1 = std::abs(f(v + t1 * s * root)), f2 = std::abs(f(v + t2 * s * root));
  if (f1 == 0.0 && f2 == 0.0) return 1000;  // vanishes identically near this point
  if (f2 == 0.0) return 1000;
  return std::max(0, static_cast<int>(std::lround(std::log(f2 / f1) / std::log(t2 / t1))));
}

double slab_normalizer(double a) { return 4.0 * std::numbers::pi * std::numbers::pi / ((2.0 - a) * (4.0 - a)); }

// Sample z with density proportional to |<z, rho>|^{-a} on the ball.
Vec2 sample_slab(Rng& rng, const Vec2& root, double a) {
  double r = 0.0;
  do {
    r = std::pow(rng.uniform_open(), 1.0 / (2.0 - a));
  } while (rng.uniform() >= 1.0 - r * r);
  const Complex zeta1 = std::polar(r, rng.uniform(0, 2 * std::numbers::pi));
  const double rad = std::sqrt(std::max(0.0, 1.0 - r * r)) * std::sqrt(rng.uniform());
  const Complex zeta2 = std::polar(rad, rng.uniform(0, 2 * std::numbers::pi));
  return zeta1 * root + zeta2 * hyperplane_direction(root);
}

}  // namespace

bool ScanTable::any_unstable() const {
  for (const auto& c : cells)
    if (c.unstable) return true;
  return false;
}

double ScanTable::max_ratio() const {
  double m = 0.0;
  for (const auto& c : cells)
    if (!c.excluded) m = std::max(m, c.ratio);
  return m;
}

ScanTable weighted_norm_scan(const ReflectionGroup& group, const std::vector<double>& p_grid,
                             const std::vector<TestFunction>& family, const QuadratureSpec& spec) {
  const KernelEvaluator ev(group);
  ScanTable table;
  table.group = group.label();
  table.nodes = spec.nodes;
  const auto& hyperplanes = group.hyperplanes();
  std::vector<std::vector<int>> orders(family.size());
  for (std::size_t f = 0; f < family.size(); ++f)
    for (const auto& h : hyperplanes) orders[f].push_back(vanishing_order(family[f], h.root));

  for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
    const double p = p_grid[pi];
    if (!(p > 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in (1, inf)");
    std::vector<double> a;
    for (const auto& h : hyperplanes) a.push_back(std::clamp(-(h.multiplicity - 1) * (2.0 - p), 0.0, 1.95));

    struct Acc {
      std::vector<double> sf, sf2, sq, sq2;
    };
    const std::size_t nf = family.size();
    const auto parts = run_chunks<Acc>(spec.nodes, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
      Rng rng(derive_seed(spec.seed, 600 + pi, chunk));
      Acc acc{std::vector<double>(nf), std::vector<double>(nf), std::vector<double>(nf), std::vector<double>(nf)};
      for (std::size_t i = b; i < e; ++i) {
        Vec2 z;
        if (hyperplanes.empty() || rng.uniform() < 0.5) {
          z = rng.ball();
        } else {
          const std::size_t y = rng.index(hyperplanes.size());
          z = sample_slab(rng, hyperplanes[y].root, a[y]);
        }
        double q = 1.0 / kBallVolume;
        if (!hyperplanes.empty()) {
          double mix = 0.0;
          for (std::size_t y = 0; y < hyperplanes.size(); ++y)
            mix += std::pow(std::abs(inner(z, hyperplanes[y].root)), -a[y]) / slab_normalizer(a[y]);
          q = 0.5 * q + 0.5 * mix / static_cast<double>(hyperplanes.size());
        }
        const double j = std::abs(ev.jacobian(z));
        if (j == 0.0 && p > 2.0) continue;  // null set
        const double sigma = p == 2.0 ? 1.0 : std::pow(j, 2.0 - p);
        const double weight = sigma / q;
        for (std::size_t f = 0; f < nf; ++f) {
          const double vf = std::pow(std::abs(family[f](z)), p) * weight;
          const double vq = std::pow(std::abs(skew_symmetrize(group, family[f], z)), p) * weight;
          acc.sf[f] += vf;
          acc.sf2[f] += vf * vf;
          acc.sq[f] += vq;
          acc.sq2[f] += vq * vq;
        }
      }
      return acc;
    });
    std::vector<double> sf(nf), sf2(nf), sq(nf), sq2(nf);
    for (const auto& part : parts)
      for (std::size_t f = 0; f < nf; ++f) {
        sf[f] += part.sf[f];
        sf2[f] += part.sf2[f];
        sq[f] += part.sq[f];
        sq2[f] += part.sq2[f];
      }
    const double n = static_cast<double>(spec.nodes);
    auto rel_se = [n](double s, double s2) {
      if (s == 0.0) return 0.0;
      const double mean = s / n;
      const double var = std::max(0.0, (s2 / n - mean * mean) * n / (n - 1.0));
      return std::sqrt(var / n) / mean;
    };
    for (std::size_t f = 0; f < nf; ++f) {
      ScanCell cell;
      cell.p = p;
      cell.function = family[f].id;
      for (std::size_t y = 0; y < hyperplanes.size(); ++y) {
        const double e = orders[f][y] * p + (hyperplanes[y].multiplicity - 1) * (2.0 - p);
        if (e <= -2.0) cell.excluded = true;
      }
      if (cell.excluded) {
        table.cells.push_back(cell);
        continue;
      }
      cell.norm_f = std::pow(sf[f] / n, 1.0 / p);
      cell.norm_Qf = std::pow(sq[f] / n, 1.0 / p);
      cell.ratio = cell.norm_f > 0 ? cell.norm_Qf / cell.norm_f : 0.0;
      cell.rel_error = std::max(rel_se(sf[f], sf2[f]), rel_se(sq[f], sq2[f]));
      cell.unstable = !(cell.rel_error <= spec.unstable_fraction) || !std::isfinite(cell.ratio);
      table.cells.push_back(cell);
    }
  }
  return table;
}

// ----------------------------------------------------------- symmetry suite

bool SymmetryReport::passed() const {
  for (const auto& c : checks)
    if (c.violations > 0) return false;
  return mutation_detected;
}

SymmetryReport symmetry_suite(const ReflectionGroup& group, std::uint64_t samples, std::uint64_t seed) {
  constexpr double kTol = 1e-12;
  constexpr int kSymmetryStrata = 6;
  KernelConfig cfg4;
  cfg4.p = 4.0;
  const KernelEvaluator ev(group), ev4(group, cfg4);
  const std::size_t n = group.order();
  const double dn = static_cast<double>(n);
  const std::size_t mutated = n > 1 ? 1 : 0;

  auto second_form = [&](const Vec2& z, const Vec2& w, bool mutate) {
    Complex acc{0.0, 0.0};
    for (std::size_t g = 0; g < n; ++g) {
      Complex j = std::conj(ev.det(g));
      if (mutate && g == mutated) j *= 1.01;
      acc += ev.ball(z, ev.matrix(g) * w) * j;
    }
    return acc / dn;
  };

  const std::vector<std::string> names{"two forms", "hermitian symmetry", "skew covariance", "modulus invariance",
                                       "hyperplane vanishing"};
  struct Part {
    std::vector<SymmetryCheck> checks;
    std::uint64_t mutation_hits = 0;
  };
  auto note = [](SymmetryCheck& c, double residual) {
    ++c.tested;
    c.max_residual = std::max(c.max_residual, residual);
    if (!(residual <= kTol)) ++c.violations;
  };
  const auto parts = run_chunks<Part>(samples, kChunk, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Rng rng(derive_seed(seed, 800, chunk));
    Part part;
    for (const auto& name : names) part.checks.push_back({name});
    for (std::size_t i = b; i < e; ++i) {
      Vec2 z, w;
      if (i % 2 == 0) {
        z = rng.ball();
        w = rng.ball();
      } else {
        // past 2^-7 the rounding of g.z alone exceeds the 1e-12 tolerance
        const int k = static_cast<int>((i / 2) % (kSymmetryStrata + 1));
        z = (1.0 - stratum_distance(rng, k)) * rng.sphere();
        w = partner(rng, ev.matrix(rng.index(n)) * z, k);
      }
      try {
        double scale = 0;
        const Complex k = ev.averaged(z, w, scale);
        note(part.checks[0], std::abs(k - second_form(z, w, false)) / scale);
        if (std::abs(k - second_form(z, w, true)) / scale > kTol) ++part.mutation_hits;
        note(part.checks[1], std::abs(k - std::conj(ev.averaged(w, z))) / scale);
        double skew = 0.0;
        for (std::size_t g = 0; g < n; ++g)
          skew = std::max(skew, std::abs(ev.averaged(ev.matrix(g) * z, w) - k / ev.det(g)) / scale);
        note(part.checks[2], skew);
        const double jz = std::abs(ev4.jacobian(z)), jw = std::abs(ev4.jacobian(w));
        if (jz > 0 && jw > 0) {
          const double base = std::abs(ev4.k_gp(z, w));
          const double uncancelled = std::pow(jz / jw, 2.0 / cfg4.p - 1.0) * scale;
          double worst = 0.0;
          for (std::size_t g = 0; g < n; ++g)
            worst = std::max(worst, std::abs(std::abs(ev4.k_gp(ev.matrix(g) * z, w)) - base) / uncancelled);
          note(part.checks[3], worst);
        }
        for (const auto& h : group.hyperplanes()) {
          const Vec2 on = z - inner(z, h.root) * h.root;
          double s = 0;
          const Complex v = ev.averaged(on, w, s);
          note(part.checks[4], std::abs(v) / s);
        }
      } catch (const Error&) {
        // singular pairs have probability zero; skip
      }
    }
    return part;
  });
  SymmetryReport out;
  out.group = group.label();
  for (const auto& name : names) out.checks.push_back({name});
  std::uint64_t hits = 0, total = 0;
  for (const auto& part : parts) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      out.checks[c].tested += part.checks[c].tested;
      out.checks[c].violations += part.checks[c].violations;
      out.checks[c].max_residual = std::max(out.checks[c].max_residual, part.checks[c].max_residual);
    }
    hits += part.mutation_hits;
    total += part.checks[0].tested;
  }
  out.mutation_detected = total > 0 && hits * 2 > total;
  return out;
}

}  // namespace rbq
