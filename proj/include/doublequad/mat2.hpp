#pragma once

#include <array>
#include <complex>

namespace dq {

using Complex = std::complex<double>;

/// 2x2 complex matrix stored row-major: [[m(0,0), m(0,1)], [m(1,0), m(1,1)]].
struct Mat2 {
  std::array<Complex, 4> e{};

  constexpr Complex& operator()(int i, int j) { return e[2 * i + j]; }
  constexpr const Complex& operator()(int i, int j) const { return e[2 * i + j]; }

  static constexpr Mat2 identity() { return {{Complex{1.0}, {}, {}, Complex{1.0}}}; }
  static constexpr Mat2 zero() { return {}; }
  static constexpr Mat2 diag(Complex a, Complex d) { return {{a, {}, {}, d}}; }
  static constexpr Mat2 of(Complex a, Complex b, Complex c, Complex d) {
    return {{a, b, c, d}};
  }

  bool is_finite() const;

  Mat2& operator+=(const Mat2& o);
  Mat2& operator-=(const Mat2& o);
  Mat2& operator*=(Complex s);
};

Mat2 operator+(Mat2 a, const Mat2& b);
Mat2 operator-(Mat2 a, const Mat2& b);
Mat2 operator-(const Mat2& a);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex s, Mat2 a);
Mat2 operator*(Mat2 a, Complex s);

Complex det(const Mat2& m);
Complex trace(const Mat2& m);
/// Conjugate transpose.
Mat2 adjoint(const Mat2& m);
/// Entrywise complex conjugate.
Mat2 conj(const Mat2& m);
/// Throws SingularMatrixError when |det| <= 1e-14.
Mat2 inverse(const Mat2& m);
double frobenius_norm(const Mat2& m);
double max_abs_diff(const Mat2& a, const Mat2& b);
Mat2 commutator(const Mat2& a, const Mat2& b);

/// sinh(z)/z, with a Taylor fallback near zero.
Complex sinhc(Complex z);

/// Closed-form exponential of a 2x2 matrix:
///   exp(m) = e^{tr/2} (cosh(d) I + sinhc(d) (m - tr/2 I)),  d^2 = -det(m - tr/2 I).
Mat2 expm2(const Mat2& m);

struct Vec3 {
  std::array<double, 3> v{};

  constexpr double& operator[](int i) { return v[i]; }
  constexpr const double& operator[](int i) const { return v[i]; }
  bool is_finite() const;
};

Vec3 operator*(double s, const Vec3& a);
Vec3 operator+(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

/// 3x3 real matrix stored row-major.
struct Mat3R {
  std::array<double, 9> e{};

  constexpr double& operator()(int i, int j) { return e[3 * i + j]; }
  constexpr const double& operator()(int i, int j) const { return e[3 * i + j]; }

  static constexpr Mat3R identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  bool is_finite() const;
};

Mat3R operator*(const Mat3R& a, const Mat3R& b);
Mat3R operator+(const Mat3R& a, const Mat3R& b);
Mat3R operator*(double s, const Mat3R& a);
Mat3R transpose(const Mat3R& m);
double det(const Mat3R& m);
double max_abs_diff(const Mat3R& a, const Mat3R& b);
/// max |(m m^T - I)_{ij}|
double orthogonality_error(const Mat3R& m);

/// Skew matrix with hat(p) x = p cross x; basis X_i of so(3).
Mat3R hat(const Vec3& p);

/// Rotation by angle |p| t about p/|p|.
Mat3R rodrigues3(const Vec3& p, double t);

}  // namespace dq
