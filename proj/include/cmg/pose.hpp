#pragma once

// SE(3) pose algebra. Poses are 6-vectors [translation; axis-angle rotation]
// (meters / radians), mapped to rigid transforms through the exponential map.
// exp is templated so pose tangents flow into everything downstream; log is
// double-only (it is used for state bookkeeping, never differentiated).

#include <array>
#include <cmath>

#include "cmg/dual.hpp"
#include "cmg/vec3.hpp"

namespace cmg {

template <class T>
using Pose6 = std::array<T, 6>;
using Pose6d = Pose6<double>;

template <class T>
struct Transform {
  Mat3<T> R = Mat3<T>::identity();
  Vec3<T> t{};

  Vec3<T> apply(const Vec3<T>& p) const { return R * p + t; }
  // Inverse map (world -> body for a body-to-world transform).
  Vec3<T> apply_inverse(const Vec3<T>& p) const { return R.t_mul(p - t); }
};

using Transformd = Transform<double>;

template <class T>
Mat3<T> skew(const Vec3<T>& w) {
  Mat3<T> r;
  r.m = {T(0), -w.z, w.y, w.z, T(0), -w.x, -w.y, w.x, T(0)};
  return r;
}

namespace detail {

// Coefficients A = sin(t)/t, B = (1-cos(t))/t^2, C = (t-sin(t))/t^3 with a
// series fallback below t^2 = 1e-8. The two branches agree (with derivatives)
// to far better than double precision at the switch, so the branch is exact
// for practical purposes and deliberately allowed on dual scalars.
template <class T>
void exp_coeffs(const T& theta_sq, T& a, T& b, T& c) {
  bool tiny;
  {
    HardBranchScope scope;
    tiny = primal(theta_sq) < 1e-8;
  }
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (tiny) {
    a = T(1) - theta_sq / T(6) + theta_sq * theta_sq / T(120);
    b = T(0.5) - theta_sq / T(24) + theta_sq * theta_sq / T(720);
    c = T(1.0 / 6.0) - theta_sq / T(120) + theta_sq * theta_sq / T(5040);
  } else {
    const T theta = sqrt(theta_sq);
    a = sin(theta) / theta;
    b = (T(1) - cos(theta)) / theta_sq;
    c = (T(1) - a) / theta_sq;
  }
}

}  // namespace detail

template <class T>
Mat3<T> so3_exp(const Vec3<T>& w) {
  const T theta_sq = norm_sq(w);
  T a, b, c;
  detail::exp_coeffs(theta_sq, a, b, c);
  const Mat3<T> wx = skew(w);
  return Mat3<T>::identity() + wx * a + (wx * wx) * b;
}

template <class T>
Transform<T> se3_exp(const Pose6<T>& xi) {
  const Vec3<T> rho{xi[0], xi[1], xi[2]};
  const Vec3<T> w{xi[3], xi[4], xi[5]};
  const T theta_sq = norm_sq(w);
  T a, b, c;
  detail::exp_coeffs(theta_sq, a, b, c);
  const Mat3<T> wx = skew(w);
  Transform<T> out;
  out.R = Mat3<T>::identity() + wx * a + (wx * wx) * b;
  const Mat3<T> v_mat = Mat3<T>::identity() + wx * b + (wx * wx) * c;
  out.t = v_mat * rho;
  return out;
}

// Log map, defined for rotation angles in [0, pi). Inverse of se3_exp there.
Pose6d se3_log(const Transformd& tf);

// Rotation-only helpers used by the integrator.
Mat3d so3_exp_d(const Vec3d& w);
Vec3d so3_log(const Mat3d& r);

}  // namespace cmg
