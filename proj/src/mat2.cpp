#include "doublequad/mat2.hpp"

#include <algorithm>
#include <cmath>

#include "doublequad/errors.hpp"

namespace dq {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

bool Mat2::is_finite() const {
  return std::all_of(e.begin(), e.end(), finite);
}

Mat2& Mat2::operator+=(const Mat2& o) {
  for (int k = 0; k < 4; ++k) e[k] += o.e[k];
  return *this;
}

Mat2& Mat2::operator-=(const Mat2& o) {
  for (int k = 0; k < 4; ++k) e[k] -= o.e[k];
  return *this;
}

Mat2& Mat2::operator*=(Complex s) {
  for (auto& x : e) x *= s;
  return *this;
}

Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
Mat2 operator-(const Mat2& a) { return Complex{-1.0} * a; }
Mat2 operator*(Complex s, Mat2 a) { return a *= s; }
Mat2 operator*(Mat2 a, Complex s) { return a *= s; }

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return Mat2::of(a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0),
                  a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
                  a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0),
                  a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1));
}

Complex det(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

Complex trace(const Mat2& m) { return m(0, 0) + m(1, 1); }

Mat2 adjoint(const Mat2& m) {
  return Mat2::of(std::conj(m(0, 0)), std::conj(m(1, 0)), std::conj(m(0, 1)),
                  std::conj(m(1, 1)));
}

Mat2 conj(const Mat2& m) {
  return Mat2::of(std::conj(m(0, 0)), std::conj(m(0, 1)), std::conj(m(1, 0)),
                  std::conj(m(1, 1)));
}

Mat2 inverse(const Mat2& m) {
  const Complex d = det(m);
  if (!(std::abs(d) > 1e-14)) {
    throw SingularMatrixError("inverse: |det| = " + std::to_string(std::abs(d)) +
                              " is below 1e-14");
  }
  return (1.0 / d) * Mat2::of(m(1, 1), -m(0, 1), -m(1, 0), m(0, 0));
}

double frobenius_norm(const Mat2& m) {
  double s = 0.0;
  for (const auto& x : m.e) s += std::norm(x);
  return std::sqrt(s);
}

double max_abs_diff(const Mat2& a, const Mat2& b) {
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a.e[k] - b.e[k]));
  return worst;
}

Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

Complex sinhc(Complex z) {
  if (std::abs(z) < 1e-6) {
    const Complex z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

Mat2 expm2(const Mat2& m) {
  const Complex half_tr = 0.5 * trace(m);
  const Mat2 traceless = m - half_tr * Mat2::identity();
  // cosh and sinhc are even, so either square root of d^2 works.
  const Complex d = std::sqrt(-det(traceless));
  Mat2 out = std::cosh(d) * Mat2::identity() + sinhc(d) * traceless;
  return std::exp(half_tr) * out;
}

bool Vec3::is_finite() const {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Vec3 operator*(double s, const Vec3& a) { return {{s * a[0], s * a[1], s * a[2]}}; }
Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {{a[0] + b[0], a[1] + b[1], a[2] + b[2]}};
}
double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

bool Mat3R::is_finite() const {
  return std::all_of(e.begin(), e.end(), [](double x) { return std::isfinite(x); });
}

Mat3R operator*(const Mat3R& a, const Mat3R& b) {
  Mat3R out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

Mat3R operator+(const Mat3R& a, const Mat3R& b) {
  Mat3R out;
  for (int k = 0; k < 9; ++k) out.e[k] = a.e[k] + b.e[k];
  return out;
}

Mat3R operator*(double s, const Mat3R& a) {
  Mat3R out;
  for (int k = 0; k < 9; ++k) out.e[k] = s * a.e[k];
  return out;
}

Mat3R transpose(const Mat3R& m) {
  Mat3R out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = m(j, i);
  return out;
}

double det(const Mat3R& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double max_abs_diff(const Mat3R& a, const Mat3R& b) {
  double worst = 0.0;
  for (int k = 0; k < 9; ++k) worst = std::max(worst, std::abs(a.e[k] - b.e[k]));
  return worst;
}

double orthogonality_error(const Mat3R& m) {
  return max_abs_diff(m * transpose(m), Mat3R::identity());
}

Mat3R hat(const Vec3& p) {
  return {{0.0, -p[2], p[1], p[2], 0.0, -p[0], -p[1], p[0], 0.0}};
}

Mat3R rodrigues3(const Vec3& p, double t) {
  const Mat3R k = t * hat(p);
  const Mat3R k2 = k * k;
  const double theta = norm(p) * std::abs(t);
  if (theta < 1e-8) return Mat3R::identity() + k + 0.5 * k2;
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3R::identity() + a * k + b * k2;
}

}  // namespace dq
