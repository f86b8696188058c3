#pragma once

#include <cstdint>
#include <utility>
#include <variant>

#include "doublequad/mat2.hpp"

namespace dq {

/// Inputs whose invariant residual is at most this are projected back onto
/// the group; anything larger is rejected.
inline constexpr double kRenormalizeTolerance = 1e-8;

/// Element of SU(2): [[alpha, -conj(nu)], [nu, conj(alpha)]], |alpha|^2 + |nu|^2 = 1.
class SU2Element {
 public:
  SU2Element() = default;
  /// Normalizes when | |alpha|^2 + |nu|^2 - 1 | <= 1e-8, throws InvariantViolation otherwise.
  SU2Element(Complex alpha, Complex nu);

  static SU2Element identity() { return {}; }
  /// Reads alpha and nu from the first column; checks unitarity.
  static SU2Element from_matrix(const Mat2& m);

  Complex alpha() const { return alpha_; }
  Complex nu() const { return nu_; }
  Mat2 matrix() const;
  /// | |alpha|^2 + |nu|^2 - 1 |
  double membership_error() const;

  SU2Element operator*(const SU2Element& o) const;
  SU2Element inverse() const;

 private:
  Complex alpha_{1.0};
  Complex nu_{0.0};
};

/// Element of SB(2,C): [[r, gamma], [0, 1/r]], r > 0.
class SB2Element {
 public:
  SB2Element() = default;
  SB2Element(double r, Complex gamma);

  static SB2Element identity() { return {}; }
  /// Accepts a matrix that is upper triangular with real positive diagonal
  /// of unit determinant, up to 1e-8.
  static SB2Element from_matrix(const Mat2& m);

  double r() const { return r_; }
  Complex gamma() const { return gamma_; }
  Mat2 matrix() const;
  /// Worst of |lower-left|, |Im diagonal| and |r * d - 1| for the matrix form;
  /// zero for a constructed element.
  static double membership_error(const Mat2& m);

  SB2Element operator*(const SB2Element& o) const;
  SB2Element inverse() const;

 private:
  double r_ = 1.0;
  Complex gamma_{0.0};
};

/// Element of SL(2,C): [[z1, z2], [z3, z4]], z1 z4 - z2 z3 = 1.
class SL2Element {
 public:
  SL2Element() = default;
  /// Rescales by 1/sqrt(det) when |det - 1| <= 1e-8, throws otherwise.
  SL2Element(Complex z1, Complex z2, Complex z3, Complex z4);
  static SL2Element from_matrix(const Mat2& m);

  Complex z1() const { return m_(0, 0); }
  Complex z2() const { return m_(0, 1); }
  Complex z3() const { return m_(1, 0); }
  Complex z4() const { return m_(1, 1); }
  const Mat2& matrix() const { return m_; }
  double membership_error() const;

 private:
  Mat2 m_ = Mat2::identity();
};

/// Membership residuals for raw matrices, used by property tests and re-ingestion.
double su2_membership_error(const Mat2& m);
double sl2_membership_error(const Mat2& m);

enum class AlgebraKind { su2, sb2, sl2c, so3 };

const char* to_string(AlgebraKind kind);

/// A Lie algebra element tagged with the algebra it is meant to live in.
struct AlgebraElement {
  AlgebraKind kind = AlgebraKind::su2;
  std::variant<Mat2, Vec3> value = Mat2::zero();

  static AlgebraElement su2(const Mat2& m) { return {AlgebraKind::su2, m}; }
  static AlgebraElement sb2(const Mat2& m) { return {AlgebraKind::sb2, m}; }
  static AlgebraElement sl2c(const Mat2& m) { return {AlgebraKind::sl2c, m}; }
  static AlgebraElement so3(const Vec3& p) { return {AlgebraKind::so3, p}; }

  const Mat2& mat() const;
  const Vec3& vec() const;
  /// Residual of the kind check; 0 for so3.
  double kind_residual() const;
};

AlgebraElement operator*(double s, const AlgebraElement& x);
AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);

/// Tolerance for AlgebraElement kind checks.
inline constexpr double kAlgebraTolerance = 1e-12;

/// a = g u with g unitary and u upper triangular:
///   s = 1/sqrt(|z1|^2 + |z3|^2), g = [[s z1, -s conj(z3)], [s z3, s conj(z1)]],
///   u = [[1/s, s (conj(z1) z2 + conj(z3) z4)], [0, s]].
std::pair<SU2Element, SB2Element> iwasawa_gu(const SL2Element& a);

/// a = u g with u upper triangular and g unitary:
///   t = 1/sqrt(|z3|^2 + |z4|^2), u = [[t, t (z1 conj(z3) + z2 conj(z4))], [0, 1/t]],
///   g = [[t conj(z4), -t conj(z3)], [t z3, t z4]].
std::pair<SB2Element, SU2Element> iwasawa_ug(const SL2Element& a);

SL2Element compose(const SU2Element& g, const SB2Element& u);
SL2Element compose(const SB2Element& u, const SU2Element& g);

using GroupElement = std::variant<SU2Element, SB2Element, Mat2, Mat3R>;

/// Exponential onto the matching subgroup: su2 -> SU2Element, sb2 -> SB2Element,
/// sl2c -> Mat2, so3 -> Mat3R. Throws InvariantViolation on a failed kind check.
GroupElement exp_group(const AlgebraElement& x);
SU2Element exp_su2(const Mat2& x);
SB2Element exp_sb2(const Mat2& x);

enum class GroupKind { su2, sb2, sl2 };

/// Deterministic per seed. SU(2): normalized 4-component Gaussian.
/// SB(2,C): r log-normal (sigma 0.5), gamma complex Gaussian. SL(2,C): g u.
SU2Element random_su2(std::uint64_t seed);
SB2Element random_sb2(std::uint64_t seed);
SL2Element random_sl2(std::uint64_t seed);

using RandomElement = std::variant<SU2Element, SB2Element, SL2Element>;
RandomElement random_element(GroupKind kind, std::uint64_t seed);

}  // namespace dq
