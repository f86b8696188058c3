#include "doublequad/groups.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "doublequad/errors.hpp"

namespace dq {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string fmt(double x) { return std::to_string(x); }

Complex complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

SU2Element sample_su2(std::mt19937_64& rng) {
  for (;;) {
    const Complex a = complex_gaussian(rng);
    const Complex b = complex_gaussian(rng);
    const double len = std::sqrt(std::norm(a) + std::norm(b));
    if (len > 1e-6) return SU2Element(a / len, b / len);
  }
}

SB2Element sample_sb2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 0.5);
  const double r = std::exp(n(rng));
  return SB2Element(r, complex_gaussian(rng));
}

}  // namespace

SU2Element::SU2Element(Complex alpha, Complex nu) : alpha_(alpha), nu_(nu) {
  if (!finite(alpha) || !finite(nu)) throw InvariantViolation("SU2Element: non-finite input");
  const double n2 = std::norm(alpha) + std::norm(nu);
  if (std::abs(n2 - 1.0) > kRenormalizeTolerance) {
    throw InvariantViolation("SU2Element: |alpha|^2 + |nu|^2 = " + fmt(n2) + ", expected 1");
  }
  const double s = 1.0 / std::sqrt(n2);
  alpha_ *= s;
  nu_ *= s;
}

SU2Element SU2Element::from_matrix(const Mat2& m) {
  const double err = su2_membership_error(m);
  if (!(err <= kRenormalizeTolerance)) {
    throw InvariantViolation("SU2Element::from_matrix: membership residual " + fmt(err));
  }
  return SU2Element(m(0, 0), m(1, 0));
}

Mat2 SU2Element::matrix() const {
  return Mat2::of(alpha_, -std::conj(nu_), nu_, std::conj(alpha_));
}

double SU2Element::membership_error() const {
  return std::abs(std::norm(alpha_) + std::norm(nu_) - 1.0);
}

SU2Element SU2Element::operator*(const SU2Element& o) const {
  const Mat2 p = matrix() * o.matrix();
  return SU2Element(p(0, 0), p(1, 0));
}

SU2Element SU2Element::inverse() const { return SU2Element(std::conj(alpha_), -nu_); }

SB2Element::SB2Element(double r, Complex gamma) : r_(r), gamma_(gamma) {
  if (!std::isfinite(r) || !finite(gamma)) throw InvariantViolation("SB2Element: non-finite input");
  if (!(r > 0.0)) throw InvariantViolation("SB2Element: r = " + fmt(r) + " must be positive");
}

double SB2Element::membership_error(const Mat2& m) {
  double err = std::abs(m(1, 0));
  err = std::max(err, std::abs(m(0, 0).imag()));
  err = std::max(err, std::abs(m(1, 1).imag()));
  err = std::max(err, std::abs(m(0, 0).real() * m(1, 1).real() - 1.0));
  return err;
}

SB2Element SB2Element::from_matrix(const Mat2& m) {
  const double err = membership_error(m);
  if (!(err <= kRenormalizeTolerance) || !(m(0, 0).real() > 0.0)) {
    throw InvariantViolation("SB2Element::from_matrix: membership residual " + fmt(err));
  }
  return SB2Element(m(0, 0).real(), m(0, 1));
}

Mat2 SB2Element::matrix() const { return Mat2::of(r_, gamma_, 0.0, 1.0 / r_); }

SB2Element SB2Element::operator*(const SB2Element& o) const {
  return SB2Element(r_ * o.r_, r_ * o.gamma_ + gamma_ / o.r_);
}

SB2Element SB2Element::inverse() const { return SB2Element(1.0 / r_, -gamma_); }

SL2Element::SL2Element(Complex z1, Complex z2, Complex z3, Complex z4)
    : m_(Mat2::of(z1, z2, z3, z4)) {
  if (!m_.is_finite()) throw InvariantViolation("SL2Element: non-finite input");
  const Complex d = det(m_);
  if (std::abs(d - 1.0) > kRenormalizeTolerance) {
    throw InvariantViolation("SL2Element: det = (" + fmt(d.real()) + ", " + fmt(d.imag()) +
                             "), expected 1");
  }
  m_ *= 1.0 / std::sqrt(d);
}

SL2Element SL2Element::from_matrix(const Mat2& m) {
  return SL2Element(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
}

double SL2Element::membership_error() const { return sl2_membership_error(m_); }

double su2_membership_error(const Mat2& m) {
  return max_abs_diff(m * adjoint(m), Mat2::identity()) + std::abs(det(m) - 1.0);
}

double sl2_membership_error(const Mat2& m) { return std::abs(det(m) - 1.0); }

const char* to_string(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::su2: return "su2";
    case AlgebraKind::sb2: return "sb2";
    case AlgebraKind::sl2c: return "sl2c";
    case AlgebraKind::so3: return "so3";
  }
  return "?";
}

const Mat2& AlgebraElement::mat() const {
  if (const auto* m = std::get_if<Mat2>(&value)) return *m;
  throw InvariantViolation(std::string("AlgebraElement: ") + to_string(kind) +
                           " element has no matrix value");
}

const Vec3& AlgebraElement::vec() const {
  if (const auto* p = std::get_if<Vec3>(&value)) return *p;
  throw InvariantViolation(std::string("AlgebraElement: ") + to_string(kind) +
                           " element has no vector value");
}

double AlgebraElement::kind_residual() const {
  if (kind == AlgebraKind::so3) return std::holds_alternative<Vec3>(value) ? 0.0 : INFINITY;
  if (!std::holds_alternative<Mat2>(value)) return INFINITY;
  const Mat2& m = std::get<Mat2>(value);
  const double tr = std::abs(trace(m));
  switch (kind) {
    case AlgebraKind::su2:
      // anti-Hermitian: m + m^* = 0
      return std::max(tr, frobenius_norm(m + adjoint(m)));
    case AlgebraKind::sb2:
      return std::max({tr, std::abs(m(1, 0)), std::abs(m(0, 0).imag()),
                       std::abs(m(1, 1).imag())});
    case AlgebraKind::sl2c:
      return tr;
    case AlgebraKind::so3:
      break;
  }
  return 0.0;
}

AlgebraElement operator*(double s, const AlgebraElement& x) {
  if (x.kind == AlgebraKind::so3) return {x.kind, s * x.vec()};
  return {x.kind, Complex{s} * x.mat()};
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.kind != b.kind) throw InvariantViolation("AlgebraElement: adding elements of different kinds");
  if (a.kind == AlgebraKind::so3) return {a.kind, a.vec() + b.vec()};
  return {a.kind, a.mat() + b.mat()};
}

std::pair<SU2Element, SB2Element> iwasawa_gu(const SL2Element& a) {
  const Complex z1 = a.z1(), z2 = a.z2(), z3 = a.z3(), z4 = a.z4();
  const double s = 1.0 / std::sqrt(std::norm(z1) + std::norm(z3));
  SU2Element g(s * z1, s * z3);
  SB2Element u(1.0 / s, s * (std::conj(z1) * z2 + std::conj(z3) * z4));
  return {g, u};
}

std::pair<SB2Element, SU2Element> iwasawa_ug(const SL2Element& a) {
  const Complex z1 = a.z1(), z2 = a.z2(), z3 = a.z3(), z4 = a.z4();
  const double t = 1.0 / std::sqrt(std::norm(z3) + std::norm(z4));
  SB2Element u(t, t * (z1 * std::conj(z3) + z2 * std::conj(z4)));
  // [[t conj(z4), -t conj(z3)], [t z3, t z4]] has alpha = t conj(z4), nu = t z3.
  SU2Element g(t * std::conj(z4), t * z3);
  return {u, g};
}

SL2Element compose(const SU2Element& g, const SB2Element& u) {
  return SL2Element::from_matrix(g.matrix() * u.matrix());
}

SL2Element compose(const SB2Element& u, const SU2Element& g) {
  return SL2Element::from_matrix(u.matrix() * g.matrix());
}

SU2Element exp_su2(const Mat2& x) {
  const AlgebraElement el = AlgebraElement::su2(x);
  const double res = el.kind_residual();
  if (!(res <= kAlgebraTolerance * std::max(1.0, frobenius_norm(x)))) {
    throw InvariantViolation("exp_group: su2 kind check failed, residual " + fmt(res));
  }
  const Mat2 e = expm2(x);
  return SU2Element(e(0, 0), e(1, 0));
}

SB2Element exp_sb2(const Mat2& x) {
  const AlgebraElement el = AlgebraElement::sb2(x);
  const double res = el.kind_residual();
  if (!(res <= kAlgebraTolerance * std::max(1.0, frobenius_norm(x)))) {
    throw InvariantViolation("exp_group: sb2 kind check failed, residual " + fmt(res));
  }
  // [[d, y], [0, -d]] -> [[e^d, y sinhc(d)], [0, e^-d]]
  const double d = 0.5 * (x(0, 0).real() - x(1, 1).real());
  return SB2Element(std::exp(d), x(0, 1) * sinhc(Complex{d}).real());
}

GroupElement exp_group(const AlgebraElement& x) {
  switch (x.kind) {
    case AlgebraKind::su2: return exp_su2(x.mat());
    case AlgebraKind::sb2: return exp_sb2(x.mat());
    case AlgebraKind::sl2c: {
      const double res = x.kind_residual();
      if (!(res <= kAlgebraTolerance * std::max(1.0, frobenius_norm(x.mat())))) {
        throw InvariantViolation("exp_group: sl2c kind check failed, residual " + fmt(res));
      }
      return expm2(x.mat());
    }
    case AlgebraKind::so3: return rodrigues3(x.vec(), 1.0);
  }
  throw InvariantViolation("exp_group: unknown algebra kind");
}

SU2Element random_su2(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_su2(rng);
}

SB2Element random_sb2(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_sb2(rng);
}

SL2Element random_sl2(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const SU2Element g = sample_su2(rng);
  const SB2Element u = sample_sb2(rng);
  return compose(g, u);
}

RandomElement random_element(GroupKind kind, std::uint64_t seed) {
  switch (kind) {
    case GroupKind::su2: return random_su2(seed);
    case GroupKind::sb2: return random_sb2(seed);
    case GroupKind::sl2: return random_sl2(seed);
  }
  return random_sl2(seed);
}

}  // namespace dq
