#pragma once

// Finite unitary reflection groups in U(2).

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rbq/cyclotomic.hpp"

namespace rbq {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;
using ExactMat = std::array<std::array<CycloNum, 2>, 2>;
using ExactVec = std::array<CycloNum, 2>;

inline constexpr double kUnitaryTolerance = 1e-12;
inline constexpr double kElementTolerance = 1e-10;
inline constexpr std::size_t kDefaultClosureCap = 10000;

/// A unitary 2x2 matrix, optionally carrying exact cyclotomic entries from
/// which the numeric entries are derived.
class GroupElement {
public:
  /// Validates unitarity (NotUnitary otherwise).
  explicit GroupElement(const Mat2& matrix);
  explicit GroupElement(const ExactMat& exact);

  static GroupElement identity() { return GroupElement(Mat2::Identity()); }
  static GroupElement exact_identity(int conductor);

  const Mat2& matrix() const { return matrix_; }
  Complex det() const { return det_; }
  /// Least k >= 1 with g^k = I (NotFinite past the closure cap).
  int order() const;

  bool has_exact() const { return exact_.has_value(); }
  const ExactMat& exact() const { return *exact_; }
  int conductor() const { return exact_ ? (*exact_)[0][0].conductor() : 0; }
  CycloNum exact_det() const;

  Vec2 apply(const Vec2& v) const { return matrix_ * v; }

  GroupElement operator*(const GroupElement& other) const;
  GroupElement inverse() const;
  GroupElement lift(int conductor) const;

  bool is_identity() const;
  /// Exact comparison when both sides are exact, else max-norm within 1e-10.
  bool same_as(const GroupElement& other) const;

private:
  GroupElement(const Mat2& matrix, std::optional<ExactMat> exact);

  Mat2 matrix_;
  Complex det_;
  std::optional<ExactMat> exact_;
  mutable int order_ = 0;
};

struct ReflectionInfo {
  Vec2 root;     // unit, first nonzero coordinate real positive
  double angle;  // argument of the non-unit eigenvalue, in (0, 2 pi)
};

/// Returns root and angle iff g fixes exactly a complex line pointwise.
std::optional<ReflectionInfo> is_reflection(const GroupElement& g);

/// Makes the first nonzero coordinate real positive and normalizes.
Vec2 canonical_root(const Vec2& v);

struct HyperplaneData {
  Vec2 root;
  int multiplicity = 1;
  std::vector<std::size_t> members;  // indices of the reflections fixing this hyperplane
  std::vector<double> angles;        // matching `members`
  /// Exact root direction (not normalized; first nonzero coordinate 1), when
  /// the group is exact.
  std::optional<ExactVec> exact_direction;
};

class ReflectionGroup {
public:
  ReflectionGroup() = default;
  ReflectionGroup(std::vector<GroupElement> elements, std::vector<GroupElement> generators,
                  std::string label);

  std::size_t order() const { return elements_.size(); }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const GroupElement& element(std::size_t i) const { return elements_[i]; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  const std::vector<HyperplaneData>& hyperplanes() const { return hyperplanes_; }
  /// Indices of the elements that are reflections.
  const std::vector<std::size_t>& reflections() const { return reflections_; }
  const std::optional<ReflectionInfo>& reflection_info(std::size_t i) const { return reflection_info_[i]; }
  int exponent() const { return exponent_; }
  bool is_exact() const { return exact_; }
  int conductor() const { return exact_ ? elements_.front().conductor() : 0; }
  const std::string& label() const { return label_; }

  std::optional<std::size_t> index_of(const GroupElement& g) const;
  /// Index of elements[i] * elements[j].
  std::size_t product_index(std::size_t i, std::size_t j) const;
  std::size_t inverse_index(std::size_t i) const;
  /// Index of the hyperplane of reflection element i.
  std::size_t hyperplane_of(std::size_t i) const;

  bool is_closed() const;
  /// Closure of the reflection subset equals the whole group.
  bool generated_by_reflections() const;

private:
  std::vector<GroupElement> elements_;
  std::vector<GroupElement> generators_;
  std::vector<std::optional<ReflectionInfo>> reflection_info_;
  std::vector<std::size_t> reflections_;
  std::vector<std::size_t> hyperplane_index_;
  std::vector<HyperplaneData> hyperplanes_;
  std::vector<std::size_t> table_;  // multiplication table, order x order
  int exponent_ = 1;
  bool exact_ = false;
  std::string label_;
};

ReflectionGroup close_generators(const std::vector<GroupElement>& generators,
                                 std::size_t cap = kDefaultClosureCap, std::string label = "closure");

/// G(m, l, 2) by direct enumeration of (theta^nu1 z_tau(1), theta^nu2 z_tau(2)).
ReflectionGroup family_G(int m, int l);

/// Reflection generators of G(m, l, 2) (exact).
std::vector<GroupElement> family_G_generators(int m, int l);

/// Cyclic group generated by the order-m reflection with the given root.
ReflectionGroup cyclic_reflection_group(int m, const Vec2& root);

std::vector<HyperplaneData> reflecting_hyperplanes(const ReflectionGroup& group);

ReflectionGroup conjugate_group(const ReflectionGroup& group, const GroupElement& u);

/// Representatives g with G the disjoint union of the cosets gH, in
/// element order of G; the identity represents H itself.
std::vector<GroupElement> coset_representatives(const ReflectionGroup& group,
                                                const ReflectionGroup& subgroup);

/// Attempts to write every entry as q * zeta_N^k with q rational of small
/// denominator.
std::optional<GroupElement> recognize_exact(const GroupElement& g, int conductor);

}  // namespace rbq
