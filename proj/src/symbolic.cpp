#include "rbq/symbolic.hpp"

#include <map>
#include <numeric>

#include "rbq/errors.hpp"
#include "rbq/sampling.hpp"

namespace rbq {

namespace {

void require_exact(const ReflectionGroup& group) {
  if (!group.is_exact())
    throw Error(ErrorKind::NotCyclotomic, "group '" + group.label() + "' has numeric-only entries");
}

MPoly::Linear to_linear(const ExactMat& m, bool conjugate) {
  MPoly::Linear out{{{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}};
  if (conjugate)
    for (auto& row : out)
      for (auto& c : row) c = c.conj();
  return out;
}

// Divides by (x1 - c x2) where x = (v1, v2); returns quotient, leaves remainder
// (free of v1) in `rem`.
MPoly divide_monic(const MPoly& p, const CycloNum& c, std::size_t v1, std::size_t v2, MPoly& rem) {
  const int n = p.conductor();
  // key: exponents of the two remaining variables plus the block degree d
  std::map<std::array<int, 3>, std::map<int, CycloNum>> blocks;
  std::array<std::size_t, 2> others{};
  {
    std::size_t k = 0;
    for (std::size_t i = 0; i < 4; ++i)
      if (i != v1 && i != v2) others[k++] = i;
  }
  for (const auto& [e, coeff] : p.terms()) {
    const int d = e[v1] + e[v2];
    blocks[{e[others[0]], e[others[1]], d}].emplace(e[v1], coeff);
  }
  MPoly quot(n);
  rem = MPoly(n);
  for (const auto& [key, h] : blocks) {
    const int d = key[2];
    auto exps = [&](int i1, int i2) {
      MPoly::Exps e{0, 0, 0, 0};
      e[others[0]] = key[0];
      e[others[1]] = key[1];
      e[v1] = i1;
      e[v2] = i2;
      return e;
    };
    auto coeff_at = [&](int i) {
      auto it = h.find(i);
      return it == h.end() ? CycloNum::zero(n) : it->second;
    };
    // synthetic division of sum_i h_i t^i by (t - c)
    CycloNum carry = CycloNum::zero(n);
    for (int i = d; i >= 1; --i) {
      carry = coeff_at(i) + c * carry;
      quot.add_term(exps(i - 1, d - i), carry);
    }
    const CycloNum r = coeff_at(0) + c * carry;
    rem.add_term(exps(0, d), r);
  }
  return quot;
}

DivisionResult divide_once(const MPoly& p, const CycloNum& a1, const CycloNum& a2, bool on_u) {
  const std::size_t v1 = on_u ? MPoly::U1 : MPoly::Z1;
  const std::size_t v2 = on_u ? MPoly::U2 : MPoly::Z2;
  const int n = p.conductor();
  DivisionResult out{MPoly(n), MPoly(n), false};
  if (!a1.is_zero()) {
    const CycloNum inv = a1.inverse();
    const CycloNum c = -(a2 * inv);
    out.quotient = divide_monic(p, c, v1, v2, out.remainder).scaled(inv);
  } else {
    // a2 x2 alone: peel one power of x2
    const CycloNum inv = a2.inverse();
    for (const auto& [e, coeff] : p.terms()) {
      if (e[v2] > 0) {
        MPoly::Exps q = e;
        --q[v2];
        out.quotient.add_term(q, coeff * inv);
      } else {
        out.remainder.add_term(e, coeff);
      }
    }
  }
  out.exact = out.remainder.is_zero();
  return out;
}

CycloNum lifted(const CycloNum& c, int n) { return c.conductor() == n ? c : c.lift(n); }

}  // namespace

MPoly kernel_factor(const GroupElement& g) {
  const auto& e = g.exact();
  const int n = g.conductor();
  MPoly f = MPoly::constant(CycloNum::one(n));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      MPoly::Exps ex{0, 0, 0, 0};
      ex[static_cast<std::size_t>(j)] = 1;      // z_j
      ex[2 + static_cast<std::size_t>(i)] = 1;  // u_i
      f.add_term(ex, -e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  return f;
}

MPoly expand_Q(const ReflectionGroup& group) {
  require_exact(group);
  const std::size_t n = group.order();
  const int cond = group.conductor();
  std::vector<MPoly> cubes;
  for (const auto& g : group.elements()) cubes.push_back(kernel_factor(g).pow(3));
  // prefix[i] = prod_{l < i}, suffix[i] = prod_{l >= i}
  std::vector<MPoly> prefix(n + 1, MPoly::constant(CycloNum::one(cond)));
  std::vector<MPoly> suffix(n + 1, MPoly::constant(CycloNum::one(cond)));
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * cubes[i];
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * cubes[i];
  const auto parts = run_chunks<MPoly>(n, 1, [&](std::size_t, std::size_t b, std::size_t) {
    return (prefix[b] * suffix[b + 1]).scaled(group.element(b).exact_det());
  });
  MPoly q(cond);
  for (const auto& part : parts) q += part;
  return q;
}

bool skew_check(const MPoly& p, const ReflectionGroup& g) { return skew_check(p, g, g); }

bool skew_check(const MPoly& p, const ReflectionGroup& g, const ReflectionGroup& h) {
  require_exact(g);
  require_exact(h);
  const int n = std::lcm(p.conductor(), std::lcm(g.conductor(), h.conductor()));
  const MPoly base = p.conductor() == n ? p : p.lift(n);
  for (const auto& gen : g.generators()) {
    const GroupElement e = gen.lift(n);
    const MPoly moved = base.substitute_linear(to_linear(e.exact(), false), false);
    if (!(moved == base.scaled(e.exact_det().conj()))) return false;
  }
  for (const auto& gen : h.generators()) {
    const GroupElement e = gen.lift(n);
    const MPoly moved = base.substitute_linear(to_linear(e.exact(), true), true);
    if (!(moved == base.scaled(e.exact_det()))) return false;
  }
  return true;
}

DivisionResult exact_divide(const MPoly& p, const CycloNum& a1, const CycloNum& a2, bool on_u, int power) {
  if (a1.is_zero() && a2.is_zero()) throw Error(ErrorKind::ZeroForm, "cannot divide by the zero form");
  if (power < 0) throw Error(ErrorKind::InvalidArgument, "division power must be nonnegative");
  const int n = std::lcm(p.conductor(), std::lcm(a1.conductor(), a2.conductor()));
  const CycloNum b1 = lifted(a1, n), b2 = lifted(a2, n);
  DivisionResult out{p.conductor() == n ? p : p.lift(n), MPoly(n), true};
  // dividend = q_k L^k + sum_i R_i L^{i-1}
  const MPoly form = MPoly::linear_form(b1, b2, on_u);
  MPoly form_power = MPoly::constant(CycloNum::one(n));
  for (int i = 0; i < power; ++i) {
    DivisionResult step = divide_once(out.quotient, b1, b2, on_u);
    if (!step.remainder.is_zero()) out.remainder += step.remainder * form_power;
    out.quotient = std::move(step.quotient);
    if (i + 1 < power) form_power *= form;
  }
  out.exact = out.remainder.is_zero();
  return out;
}

MPoly root_form_z(const ExactVec& v) { return MPoly::linear_form(v[0].conj(), v[1].conj(), false); }

MPoly root_form_u(const ExactVec& v) { return MPoly::linear_form(v[0], v[1], true); }

MPoly jacobian_polynomial(const ReflectionGroup& group, bool on_u) {
  require_exact(group);
  MPoly out = MPoly::constant(CycloNum::one(group.conductor()));
  for (const auto& h : group.hyperplanes()) {
    const MPoly form = on_u ? root_form_u(*h.exact_direction) : root_form_z(*h.exact_direction);
    out *= form.pow(h.multiplicity - 1);
  }
  return out;
}

MResult compute_M(const ReflectionGroup& group, const std::vector<std::size_t>& order) {
  return compute_M(group, expand_Q(group), order);
}

MResult compute_M(const ReflectionGroup& group, const MPoly& Q, const std::vector<std::size_t>& order) {
  require_exact(group);
  const auto& hyperplanes = group.hyperplanes();
  std::vector<std::size_t> seq = order;
  if (seq.empty()) {
    seq.resize(hyperplanes.size());
    std::iota(seq.begin(), seq.end(), std::size_t{0});
  }
  if (seq.size() != hyperplanes.size())
    throw Error(ErrorKind::InvalidArgument, "division order must list every hyperplane once");
  MResult out{Q, Q, 0};
  for (bool on_u : {false, true}) {
    for (std::size_t idx : seq) {
      const auto& h = hyperplanes.at(idx);
      const ExactVec& v = *h.exact_direction;
      const CycloNum a1 = on_u ? v[0] : v[0].conj();
      const CycloNum a2 = on_u ? v[1] : v[1].conj();
      auto div = exact_divide(out.M, a1, a2, on_u, h.multiplicity - 1);
      if (!div.exact)
        throw Error(ErrorKind::DivisionFailed, "root form of hyperplane " + std::to_string(idx) + " does not divide Q (" +
                                                   (on_u ? "u" : "z") + " side)");
      out.M = std::move(div.quotient);
      ++out.divisions;
    }
  }
  return out;
}

BFactorization compute_B_factorization(const ReflectionGroup& group, std::size_t reflection_index) {
  require_exact(group);
  if (reflection_index >= group.order())
    throw Error(ErrorKind::InvalidArgument, "reflection index out of range");
  if (!group.reflection_info(reflection_index))
    throw Error(ErrorKind::NotReflection, "element " + std::to_string(reflection_index) + " is not a reflection");
  const int cond = group.conductor();
  const GroupElement& r = group.element(reflection_index);
  const ReflectionGroup H = close_generators({r}, group.order(), "H");

  BFactorization out;
  out.reflection_index = reflection_index;
  out.power = r.order() - 1;
  out.direction = *group.hyperplanes()[group.hyperplane_of(reflection_index)].exact_direction;
  out.representatives = coset_representatives(group, H);

  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < group.order(); ++i)
    if (!H.index_of(group.element(i))) outside.push_back(i);

  std::vector<MPoly> cubes;
  for (auto i : outside) cubes.push_back(kernel_factor(group.element(i)).pow(3));
  const std::size_t k = outside.size();
  std::vector<MPoly> prefix(k + 1, MPoly::constant(CycloNum::one(cond)));
  std::vector<MPoly> suffix(k + 1, MPoly::constant(CycloNum::one(cond)));
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * cubes[i];
  for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] * cubes[i];

  out.denominator = prefix[k];
  out.numerator = MPoly(cond);
  const mpq_class inv_h(1, static_cast<long>(H.order()));
  for (std::size_t i = 0; i < k; ++i) {
    CycloNum c = group.element(outside[i]).exact_det();
    c *= inv_h;
    out.numerator += (prefix[i] * suffix[i + 1]).scaled(c);
  }

  const auto& v = out.direction;
  auto pz = exact_divide(out.numerator, v[0].conj(), v[1].conj(), false, out.power);
  if (!pz.exact) throw Error(ErrorKind::DivisionFailed, "<z,rho_r> power does not divide the B numerator");
  out.P_H = std::move(pz.quotient);
  auto pu = exact_divide(out.P_H, v[0], v[1], true, out.power);
  if (!pu.exact) throw Error(ErrorKind::DivisionFailed, "<u,conj rho_r> power does not divide P_H");
  out.Q_H = std::move(pu.quotient);
  return out;
}

Complex coset_sum_B(const ReflectionGroup& group, std::size_t reflection_index, const Vec2& z, const Vec2& w) {
  const ReflectionGroup H = close_generators({group.element(reflection_index)}, group.order(), "H");
  Complex acc{0.0, 0.0};
  for (const auto& x : group.elements()) {
    if (H.index_of(x)) continue;
    const Complex d = 1.0 - inner(x.apply(z), w);
    acc += x.det() / (d * d * d);
  }
  return acc / static_cast<double>(H.order());
}

bool hermitian_symmetry_check(const MPoly& p) { return p.conj_swap() == p; }

Complex eval_mpoly(const MPoly& p, const BallPoint& z, const BallPoint& w) {
  return p.evaluate(z.z1(), z.z2(), std::conj(w.z1()), std::conj(w.z2()));
}

}  // namespace rbq
