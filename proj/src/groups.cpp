#include "rbq/groups.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "rbq/errors.hpp"

namespace rbq {

namespace {

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

Mat2 embed(const ExactMat& e) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].embed();
  return m;
}

ExactMat exact_product(const ExactMat& a, const ExactMat& b) {
  ExactMat out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return out;
}

ExactMat lift_exact(const ExactMat& a, int conductor) {
  ExactMat out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out[i][j] = a[i][j].lift(conductor);
  return out;
}

void require_unitary(const Mat2& m) {
  const double defect = max_abs(m * m.adjoint() - Mat2::Identity());
  if (!(defect <= kUnitaryTolerance))
    throw Error(ErrorKind::NotUnitary, "matrix fails unitarity check (defect " + std::to_string(defect) + ")");
}

std::optional<CycloNum> recognize_entry(Complex x, int conductor) {
  if (std::abs(x) < 1e-12) return CycloNum::zero(conductor);
  for (int k = 0; k < conductor; ++k) {
    const double angle = -2.0 * std::numbers::pi * k / conductor;
    const Complex y = x * Complex(std::cos(angle), std::sin(angle));
    if (std::abs(y.imag()) > 1e-10 || y.real() <= 0) continue;
    for (long den = 1; den <= 64; ++den) {
      const double scaled = y.real() * static_cast<double>(den);
      const double num = std::round(scaled);
      if (std::abs(scaled - num) <= 1e-9 * static_cast<double>(den)) {
        mpq_class q(static_cast<long>(num), den);
        q.canonicalize();
        return CycloNum::zeta_power(conductor, k) * q;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------- GroupElement

GroupElement::GroupElement(const Mat2& matrix, std::optional<ExactMat> exact)
    : matrix_(matrix), det_(matrix.determinant()), exact_(std::move(exact)) {}

GroupElement::GroupElement(const Mat2& matrix) : GroupElement(matrix, std::nullopt) {
  require_unitary(matrix_);
}

GroupElement::GroupElement(const ExactMat& exact) : GroupElement(embed(exact), exact) {
  require_unitary(matrix_);
}

GroupElement GroupElement::exact_identity(int conductor) {
  ExactMat e{{{CycloNum::one(conductor), CycloNum::zero(conductor)},
               {CycloNum::zero(conductor), CycloNum::one(conductor)}}};
  return GroupElement(e);
}

CycloNum GroupElement::exact_det() const {
  const auto& e = exact();
  return e[0][0] * e[1][1] - e[0][1] * e[1][0];
}

int GroupElement::order() const {
  if (order_ > 0) return order_;
  GroupElement power = *this;
  for (std::size_t k = 1; k <= kDefaultClosureCap; ++k) {
    if (power.is_identity()) {
      order_ = static_cast<int>(k);
      return order_;
    }
    power = power * *this;
  }
  throw Error(ErrorKind::NotFinite, "element order exceeds closure cap");
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (exact_ && other.exact_) {
    const int a = conductor(), b = other.conductor();
    if (a == b) {
      ExactMat prod = exact_product(*exact_, *other.exact_);
      const Mat2 numeric = embed(prod);
      return GroupElement(numeric, std::move(prod));
    }
    const int common = std::lcm(a, b);
    return lift(common) * other.lift(common);
  }
  return GroupElement(matrix_ * other.matrix_, std::nullopt);
}

GroupElement GroupElement::inverse() const {
  if (exact_) {
    ExactMat adj;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) adj[i][j] = (*exact_)[j][i].conj();
    const Mat2 numeric = embed(adj);
      return GroupElement(numeric, std::move(adj));
  }
  return GroupElement(Mat2(matrix_.adjoint()), std::nullopt);
}

GroupElement GroupElement::lift(int target) const {
  if (!exact_) return *this;
  if (conductor() == target) return *this;
  ExactMat lifted = lift_exact(*exact_, target);
  const Mat2 numeric = embed(lifted);
      return GroupElement(numeric, std::move(lifted));
}

bool GroupElement::is_identity() const {
  if (exact_) {
    const auto& e = *exact_;
    return e[0][1].is_zero() && e[1][0].is_zero() && e[0][0] == CycloNum::one(conductor()) &&
           e[1][1] == CycloNum::one(conductor());
  }
  return max_abs(matrix_ - Mat2::Identity()) <= kElementTolerance;
}

bool GroupElement::same_as(const GroupElement& other) const {
  if (exact_ && other.exact_) {
    if (conductor() == other.conductor()) return *exact_ == *other.exact_;
    const int common = std::lcm(conductor(), other.conductor());
    return lift(common).same_as(other.lift(common));
  }
  return max_abs(matrix_ - other.matrix_) <= kElementTolerance;
}

// ----------------------------------------------------------------- reflections

Vec2 canonical_root(const Vec2& v) {
  Vec2 out = v / v.norm();
  for (int i = 0; i < 2; ++i) {
    if (std::abs(out(i)) > 1e-12) {
      const Complex phase = std::conj(out(i)) / std::abs(out(i));
      out *= phase;
      out(i) = Complex(out(i).real(), 0.0);
      break;
    }
  }
  return out;
}

std::optional<ReflectionInfo> is_reflection(const GroupElement& g) {
  if (g.is_identity()) return std::nullopt;
  const Mat2 d = g.matrix() - Mat2::Identity();
  if (std::abs(d.determinant()) > kElementTolerance) return std::nullopt;
  // g - I = (lambda - 1) rho rho^*, so any nonzero column spans the root line.
  const int col = d.col(0).norm() >= d.col(1).norm() ? 0 : 1;
  const Vec2 column = d.col(col);
  if (column.norm() <= kElementTolerance) return std::nullopt;
  double angle = std::arg(g.det());
  if (angle <= 0) angle += 2.0 * std::numbers::pi;
  return ReflectionInfo{canonical_root(column), angle};
}

// ------------------------------------------------------------- ReflectionGroup

ReflectionGroup::ReflectionGroup(std::vector<GroupElement> elements, std::vector<GroupElement> generators,
                                 std::string label)
    : elements_(std::move(elements)), generators_(std::move(generators)), label_(std::move(label)) {
  if (elements_.empty()) throw Error(ErrorKind::InvalidArgument, "empty group");
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].is_identity()) {
      std::swap(elements_[0], elements_[i]);
      break;
    }
  }
  if (!elements_[0].is_identity()) throw Error(ErrorKind::InvalidArgument, "group lacks the identity");

  exact_ = true;
  for (const auto& g : elements_) exact_ = exact_ && g.has_exact();
  if (exact_) {
    int common = 1;
    for (const auto& g : elements_) common = std::lcm(common, g.conductor());
    for (auto& g : elements_) g = g.lift(common);
    for (auto& g : generators_)
      if (g.has_exact()) g = g.lift(common);
  }

  exponent_ = 1;
  for (const auto& g : elements_) exponent_ = std::lcm(exponent_, g.order());

  const std::size_t n = elements_.size();
  if (n <= 1024) {
    table_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto idx = index_of(elements_[i] * elements_[j]);
        table_[i * n + j] = idx ? *idx : n;
      }
  }

  reflection_info_.resize(n);
  hyperplane_index_.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    reflection_info_[i] = is_reflection(elements_[i]);
    if (!reflection_info_[i]) continue;
    reflections_.push_back(i);
    const Vec2& root = reflection_info_[i]->root;
    std::size_t found = hyperplanes_.size();
    for (std::size_t h = 0; h < hyperplanes_.size(); ++h) {
      if (std::abs(hyperplanes_[h].root.dot(root)) > 1.0 - kElementTolerance) {
        found = h;
        break;
      }
    }
    if (found == hyperplanes_.size()) {
      HyperplaneData data;
      data.root = root;
      if (exact_) {
        // nonzero column of g - I, scaled so its first nonzero entry is 1
        const auto& e = elements_[i].exact();
        const int c = elements_[i].conductor();
        const CycloNum one = CycloNum::one(c);
        ExactVec col0{e[0][0] - one, e[1][0]};
        ExactVec col1{e[0][1], e[1][1] - one};
        ExactVec dir = (col0[0].is_zero() && col0[1].is_zero()) ? col1 : col0;
        const CycloNum lead = dir[0].is_zero() ? dir[1] : dir[0];
        const CycloNum inv = lead.inverse();
        dir[0] = dir[0] * inv;
        dir[1] = dir[1] * inv;
        data.exact_direction = dir;
      }
      hyperplanes_.push_back(std::move(data));
    }
    hyperplanes_[found].members.push_back(i);
    hyperplanes_[found].angles.push_back(reflection_info_[i]->angle);
    hyperplane_index_[i] = found;
  }
  for (auto& h : hyperplanes_) h.multiplicity = static_cast<int>(h.members.size()) + 1;
}

std::optional<std::size_t> ReflectionGroup::index_of(const GroupElement& g) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i].same_as(g)) return i;
  return std::nullopt;
}

std::size_t ReflectionGroup::product_index(std::size_t i, std::size_t j) const {
  const std::size_t n = elements_.size();
  if (!table_.empty()) {
    const std::size_t idx = table_[i * n + j];
    if (idx < n) return idx;
  } else if (auto idx = index_of(elements_[i] * elements_[j])) {
    return *idx;
  }
  throw Error(ErrorKind::InvalidArgument, "group is not closed under multiplication");
}

std::size_t ReflectionGroup::inverse_index(std::size_t i) const {
  for (std::size_t j = 0; j < elements_.size(); ++j)
    if (product_index(i, j) == 0) return j;
  throw Error(ErrorKind::InvalidArgument, "element has no inverse in the group");
}

std::size_t ReflectionGroup::hyperplane_of(std::size_t i) const {
  if (hyperplane_index_[i] >= hyperplanes_.size())
    throw Error(ErrorKind::NotReflection, "element " + std::to_string(i) + " is not a reflection");
  return hyperplane_index_[i];
}

bool ReflectionGroup::is_closed() const {
  const std::size_t n = elements_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_of(elements_[i].inverse())) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!table_.empty()) {
        if (table_[i * n + j] >= n) return false;
      } else if (!index_of(elements_[i] * elements_[j])) {
        return false;
      }
    }
  }
  return true;
}

bool ReflectionGroup::generated_by_reflections() const {
  std::vector<GroupElement> refl;
  for (auto i : reflections_) refl.push_back(elements_[i]);
  if (refl.empty()) return order() == 1;
  const auto closure = close_generators(refl, order() + 1);
  return closure.order() == order();
}

// ------------------------------------------------------------------ builders

ReflectionGroup close_generators(const std::vector<GroupElement>& generators, std::size_t cap,
                                 std::string label) {
  if (cap < 1) throw Error(ErrorKind::InvalidArgument, "closure cap must be at least 1");
  bool exact = !generators.empty();
  int common = 1;
  for (const auto& g : generators) {
    exact = exact && g.has_exact();
    if (g.has_exact()) common = std::lcm(common, g.conductor());
  }
  std::vector<GroupElement> gens;
  for (const auto& g : generators) gens.push_back(exact ? g.lift(common) : GroupElement(g.matrix()));

  std::vector<GroupElement> elements{exact ? GroupElement::exact_identity(common) : GroupElement::identity()};
  for (std::size_t frontier = 0; frontier < elements.size(); ++frontier) {
    for (const auto& g : gens) {
      GroupElement candidate = elements[frontier] * g;
      bool known = false;
      for (const auto& e : elements) {
        if (e.same_as(candidate)) {
          known = true;
          break;
        }
      }
      if (known) continue;
      if (elements.size() >= cap)
        throw Error(ErrorKind::NotFinite, "closure exceeds cap of " + std::to_string(cap) + " elements");
      elements.push_back(std::move(candidate));
    }
  }
  ReflectionGroup group(std::move(elements), gens, std::move(label));
  if (group.is_exact() && group.exponent() % group.conductor() != 0) {
    // re-express over Q(zeta_lcm) so the conductor is a multiple of the exponent
    const int target = std::lcm(group.exponent(), group.conductor());
    std::vector<GroupElement> lifted;
    for (const auto& g : group.elements()) lifted.push_back(g.lift(target));
    std::vector<GroupElement> lifted_gens;
    for (const auto& g : group.generators()) lifted_gens.push_back(g.lift(target));
    return ReflectionGroup(std::move(lifted), std::move(lifted_gens), group.label());
  }
  return group;
}

namespace {

void check_divisor(int m, int l) {
  if (m < 1 || l < 1 || m % l != 0)
    throw Error(ErrorKind::BadDivisor, "l = " + std::to_string(l) + " does not divide m = " + std::to_string(m));
}

GroupElement monomial_element(int conductor, int m, int nu1, int nu2, bool swap) {
  const int step = conductor / m;
  const CycloNum zero = CycloNum::zero(conductor);
  ExactMat e{{{zero, zero}, {zero, zero}}};
  const std::size_t c1 = swap ? 1 : 0;
  const std::size_t c2 = swap ? 0 : 1;
  e[0][c1] = CycloNum::zeta_power(conductor, static_cast<long>(nu1) * step);
  e[1][c2] = CycloNum::zeta_power(conductor, static_cast<long>(nu2) * step);
  return GroupElement(e);
}

}  // namespace

std::vector<GroupElement> family_G_generators(int m, int l) {
  check_divisor(m, l);
  const int conductor = std::lcm(m, 2);
  std::vector<GroupElement> gens{monomial_element(conductor, m, 0, 0, true)};
  if (m > 1) gens.push_back(monomial_element(conductor, m, 1, m - 1, true));
  if (l < m) gens.push_back(monomial_element(conductor, m, l, 0, false));
  return gens;
}

ReflectionGroup family_G(int m, int l) {
  check_divisor(m, l);
  const int conductor = std::lcm(m, 2);
  std::vector<GroupElement> elements;
  for (int swap = 0; swap < 2; ++swap)
    for (int nu1 = 0; nu1 < m; ++nu1)
      for (int nu2 = 0; nu2 < m; ++nu2)
        if ((nu1 + nu2) % l == 0) elements.push_back(monomial_element(conductor, m, nu1, nu2, swap == 1));
  const std::string label = "G(" + std::to_string(m) + "," + std::to_string(l) + ",2)";
  ReflectionGroup group(std::move(elements), family_G_generators(m, l), label);
  if (group.exponent() % group.conductor() == 0 && group.exponent() == group.conductor()) return group;
  const int target = std::lcm(group.exponent(), group.conductor());
  std::vector<GroupElement> lifted;
  for (const auto& g : group.elements()) lifted.push_back(g.lift(target));
  std::vector<GroupElement> gens;
  for (const auto& g : group.generators()) gens.push_back(g.lift(target));
  return ReflectionGroup(std::move(lifted), std::move(gens), label);
}

std::optional<GroupElement> recognize_exact(const GroupElement& g, int conductor) {
  ExactMat e;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      auto entry = recognize_entry(g.matrix()(static_cast<int>(i), static_cast<int>(j)), conductor);
      if (!entry) return std::nullopt;
      e[i][j] = *entry;
    }
  const Mat2 numeric = embed(e);
  if (max_abs(numeric - g.matrix()) > kElementTolerance) return std::nullopt;
  if (max_abs(numeric * numeric.adjoint() - Mat2::Identity()) > kUnitaryTolerance) return std::nullopt;
  return GroupElement(e);
}

ReflectionGroup cyclic_reflection_group(int m, const Vec2& root) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "cyclic order must be positive");
  if (root.norm() < 1e-12) throw Error(ErrorKind::InvalidArgument, "zero root");
  const Vec2 rho = root / root.norm();
  const std::string label = "cyclic(" + std::to_string(m) + ")";
  const double angle = 2.0 * std::numbers::pi / m;
  const Complex lambda(std::cos(angle), std::sin(angle));
  Mat2 r = Mat2::Identity() + (lambda - 1.0) * rho * rho.adjoint();
  // clean round-off so that unitarity holds to the element tolerance
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Complex& x = r(i, j);
      if (std::abs(x.real()) < 1e-15) x = Complex(0.0, x.imag());
      if (std::abs(x.imag()) < 1e-15) x = Complex(x.real(), 0.0);
    }
  const GroupElement gen(r);
  for (int factor : {1, 2, 4, 6, 8, 12}) {
    if (auto exact = recognize_exact(gen, m * factor)) return close_generators({*exact}, kDefaultClosureCap, label);
  }
  return close_generators({gen}, kDefaultClosureCap, label);
}

std::vector<HyperplaneData> reflecting_hyperplanes(const ReflectionGroup& group) { return group.hyperplanes(); }

ReflectionGroup conjugate_group(const ReflectionGroup& group, const GroupElement& u) {
  const GroupElement u_inv = u.inverse();
  std::vector<GroupElement> elements;
  for (const auto& g : group.elements()) elements.push_back(u * g * u_inv);
  std::vector<GroupElement> gens;
  for (const auto& g : group.generators()) gens.push_back(u * g * u_inv);
  return ReflectionGroup(std::move(elements), std::move(gens), group.label() + "^u");
}

std::vector<GroupElement> coset_representatives(const ReflectionGroup& group, const ReflectionGroup& subgroup) {
  std::vector<std::size_t> sub_idx;
  for (const auto& h : subgroup.elements()) {
    auto idx = group.index_of(h);
    if (!idx) throw Error(ErrorKind::NotSubgroup, "subgroup element not found in group");
    sub_idx.push_back(*idx);
  }
  std::vector<bool> covered(group.order(), false);
  std::vector<GroupElement> reps;
  for (std::size_t i = 0; i < group.order(); ++i) {
    if (covered[i]) continue;
    reps.push_back(group.element(i));
    for (auto h : sub_idx) covered[group.product_index(i, h)] = true;
  }
  return reps;
}

}  // namespace rbq
