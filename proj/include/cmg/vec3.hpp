#pragma once

// Minimal 3-vector / 3x3 matrix algebra templated over the scalar type, so the
// same geometry code runs on doubles and on derivative-carrying duals.

#include <array>
#include <cmath>

#include "cmg/dual.hpp"

namespace cmg {

template <class T>
struct Vec3 {
  T x{}, y{}, z{};

  Vec3() = default;
  Vec3(T xx, T yy, T zz) : x(std::move(xx)), y(std::move(yy)), z(std::move(zz)) {}

  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(const Vec3& a, const T& s) { return {a.x * s, a.y * s, a.z * s}; }
  friend Vec3 operator*(const T& s, const Vec3& a) { return a * s; }
  friend Vec3 operator/(const Vec3& a, const T& s) { return {a.x / s, a.y / s, a.z / s}; }
  Vec3& operator+=(const Vec3& o) { return *this = *this + o; }
  Vec3& operator-=(const Vec3& o) { return *this = *this - o; }
};

using Vec3d = Vec3<double>;

template <class T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T>
T norm_sq(const Vec3<T>& a) {
  return dot(a, a);
}

template <class T>
T norm(const Vec3<T>& a) {
  using std::sqrt;
  return sqrt(norm_sq(a));
}

// v / sqrt(tau + |v|^2): bounded by 1 in norm and smooth through v = 0.
template <class T>
Vec3<T> normalize_smooth(const Vec3<T>& v, double tau) {
  using std::sqrt;
  const T scale = T(1) / sqrt(T(tau) + norm_sq(v));
  return v * scale;
}

template <class T, class U>
Vec3<T> vec_cast(const Vec3<U>& v) {
  return {T(v.x), T(v.y), T(v.z)};
}

template <class T>
Vec3<double> vec_primal(const Vec3<T>& v) {
  return {primal(v.x), primal(v.y), primal(v.z)};
}

template <class T>
struct Mat3 {
  // Row-major.
  std::array<T, 9> m{};

  static Mat3 identity() {
    Mat3 r;
    r.m = {T(1), T(0), T(0), T(0), T(1), T(0), T(0), T(0), T(1)};
    return r;
  }

  T& operator()(int r, int c) { return m[3 * r + c]; }
  const T& operator()(int r, int c) const { return m[3 * r + c]; }

  friend Vec3<T> operator*(const Mat3& A, const Vec3<T>& v) {
    return {A.m[0] * v.x + A.m[1] * v.y + A.m[2] * v.z,
            A.m[3] * v.x + A.m[4] * v.y + A.m[5] * v.z,
            A.m[6] * v.x + A.m[7] * v.y + A.m[8] * v.z};
  }

  friend Mat3 operator*(const Mat3& A, const Mat3& B) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        T s = A(i, 0) * B(0, j);
        s += A(i, 1) * B(1, j);
        s += A(i, 2) * B(2, j);
        r(i, j) = s;
      }
    return r;
  }

  friend Mat3 operator+(const Mat3& A, const Mat3& B) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = A.m[i] + B.m[i];
    return r;
  }

  friend Mat3 operator*(const Mat3& A, const T& s) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = A.m[i] * s;
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  // R^T v without materializing the transpose.
  Vec3<T> t_mul(const Vec3<T>& v) const {
    return {m[0] * v.x + m[3] * v.y + m[6] * v.z,
            m[1] * v.x + m[4] * v.y + m[7] * v.z,
            m[2] * v.x + m[5] * v.y + m[8] * v.z};
  }
};

using Mat3d = Mat3<double>;

template <class T, class U>
Mat3<T> mat_cast(const Mat3<U>& a) {
  Mat3<T> r;
  for (int i = 0; i < 9; ++i) r.m[i] = T(a.m[i]);
  return r;
}

}  // namespace cmg
