#pragma once

// Exact polynomial identities behind the averaged kernel: the numerator Q,
// its skew invariance, and the divisions producing M, P_H and Q_H.

#include <vector>

#include "rbq/groups.hpp"
#include "rbq/kernels.hpp"
#include "rbq/mpoly.hpp"

namespace rbq {

/// sum_m J(m) prod_{l != m} (1 - <l.z, w>)^3 with u = conj(w).
MPoly expand_Q(const ReflectionGroup& group);

/// The factor 1 - <g.z, w> = 1 - sum_ij g_ij z_j u_i.
MPoly kernel_factor(const GroupElement& g);

/// P(g.z, u) = conj(J(g)) P and P(z, conj(h).u) = J(h) P for all generators.
bool skew_check(const MPoly& p, const ReflectionGroup& g);
bool skew_check(const MPoly& p, const ReflectionGroup& g, const ReflectionGroup& h);

struct DivisionResult {
  MPoly quotient;
  MPoly remainder;
  bool exact = false;  // remainder is zero
};

/// Divides by (a1 x1 + a2 x2)^power with x = z or x = u, so that
/// dividend = quotient * form^power + remainder.
DivisionResult exact_divide(const MPoly& p, const CycloNum& a1, const CycloNum& a2, bool on_u, int power = 1);

/// <z, rho> as a form on z and <u, conj rho> as a form on u, for an exact
/// direction v (first nonzero entry 1).
MPoly root_form_z(const ExactVec& v);
MPoly root_form_u(const ExactVec& v);

/// Product over hyperplanes of <z, rho_Y>^{m_Y - 1} (on_u false) or of the
/// conjugate forms on u.
MPoly jacobian_polynomial(const ReflectionGroup& group, bool on_u);

struct MResult {
  MPoly Q;
  MPoly M;
  int divisions = 0;
};

/// Removes every <z,rho_Y>^{m_Y-1} and <u,conj rho_Y>^{m_Y-1} from Q in the
/// given hyperplane order (default: table order). Throws DivisionFailed.
MResult compute_M(const ReflectionGroup& group, const std::vector<std::size_t>& order = {});
MResult compute_M(const ReflectionGroup& group, const MPoly& Q, const std::vector<std::size_t>& order = {});

struct BFactorization {
  std::size_t reflection_index = 0;
  int power = 0;                       // ord(r) - 1 copies of each root form
  ExactVec direction;                  // exact root direction of r
  std::vector<GroupElement> representatives;  // left coset representatives of <r>
  MPoly numerator;                     // N_B, so that B = N_B / L
  MPoly denominator;                   // L = prod_{x not in H} (1 - <x.z,w>)^3
  MPoly P_H;
  MPoly Q_H;
};

/// B(z,w) = (1/|H|) sum_{x in G \ H} J(x) (1 - <x.z,w>)^{-3} for H = <r>.
BFactorization compute_B_factorization(const ReflectionGroup& group, std::size_t reflection_index);

/// Numeric B at (z, w), for cross-checks.
Complex coset_sum_B(const ReflectionGroup& group, std::size_t reflection_index, const Vec2& z, const Vec2& w);

/// P equals its conjugate-swap.
bool hermitian_symmetry_check(const MPoly& p);

Complex eval_mpoly(const MPoly& p, const BallPoint& z, const BallPoint& w);

}  // namespace rbq
