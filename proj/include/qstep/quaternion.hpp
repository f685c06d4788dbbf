#pragma once

#include <cmath>
#include <complex>

namespace qstep {

using cplx = std::complex<double>;

/*
 * Real quaternion in symplectic form q = z1 + j*z2 with z1, z2 complex.
 *
 * Conventions (fixed once, used everywhere):
 *   - i is the complex unit inside z1, z2.
 *   - j*c = conj(c)*j for complex c, equivalently e^{i a} j = j e^{-i a}.
 *   - k = i*j, which in this representation is (z1, z2) = (0, -i).
 *   - Four-real components a + b i + c j + d k  <->  z1 = a + b i, z2 = c - d i.
 *
 * Complex scalars act differently from the left and from the right:
 *   c * q = (c*z1, conj(c)*z2)     q * c = (z1*c, z2*c)
 * Only right multiplication commutes with the j-slot, which is why the
 * time phase e^{-iEt} multiplies wavefunctions from the right.
 */
struct Quaternion {
  cplx z1{0.0, 0.0};
  cplx z2{0.0, 0.0};

  constexpr Quaternion() = default;
  constexpr Quaternion(cplx a, cplx b) : z1(a), z2(b) {}

  static Quaternion from_components(double a, double b, double c, double d) {
    return {cplx(a, b), cplx(c, -d)};
  }

  // (a, b, c, d) of a + b i + c j + d k.
  struct Components {
    double a, b, c, d;
  };
  Components components() const {
    return {z1.real(), z1.imag(), z2.real(), -z2.imag()};
  }

  static constexpr Quaternion zero() { return {}; }
  static Quaternion one() { return {cplx(1.0, 0.0), cplx(0.0, 0.0)}; }
  static Quaternion unit_i() { return {cplx(0.0, 1.0), cplx(0.0, 0.0)}; }
  static Quaternion unit_j() { return {cplx(0.0, 0.0), cplx(1.0, 0.0)}; }
  static Quaternion unit_k() { return {cplx(0.0, 0.0), cplx(0.0, -1.0)}; }

  double norm_sq() const { return std::norm(z1) + std::norm(z2); }
  double abs() const { return std::sqrt(norm_sq()); }

  Quaternion conj() const { return {std::conj(z1), -z2}; }

  Quaternion& operator+=(const Quaternion& o) {
    z1 += o.z1;
    z2 += o.z2;
    return *this;
  }
  Quaternion& operator-=(const Quaternion& o) {
    z1 -= o.z1;
    z2 -= o.z2;
    return *this;
  }
};

inline Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
inline Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
inline Quaternion operator-(const Quaternion& a) { return {-a.z1, -a.z2}; }

// Hamilton product in symplectic form:
//   (z1 + j z2)(w1 + j w2) = (z1 w1 - conj(z2) w2) + j (conj(z1) w2 + z2 w1)
inline Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.z1 * q.z1 - std::conj(p.z2) * q.z2,
          std::conj(p.z1) * q.z2 + p.z2 * q.z1};
}

inline Quaternion left_mul(cplx c, const Quaternion& q) {
  return {c * q.z1, std::conj(c) * q.z2};
}
inline Quaternion right_mul(const Quaternion& q, cplx c) {
  return {q.z1 * c, q.z2 * c};
}

inline Quaternion operator*(cplx c, const Quaternion& q) { return left_mul(c, q); }
inline Quaternion operator*(const Quaternion& q, cplx c) { return right_mul(q, c); }
inline Quaternion operator*(double s, const Quaternion& q) {
  return {s * q.z1, s * q.z2};
}
inline Quaternion operator*(const Quaternion& q, double s) { return s * q; }

// Tolerance-based comparison (componentwise, mixed absolute + relative).
// Exact operator== is intentionally not provided.
inline bool approx_equal(const Quaternion& p, const Quaternion& q,
                         double tol = 1e-12) {
  const double scale = std::max({1.0, p.abs(), q.abs()});
  return std::abs(p.z1 - q.z1) <= tol * scale &&
         std::abs(p.z2 - q.z2) <= tol * scale;
}

}  // namespace qstep
