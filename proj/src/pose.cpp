#include "cmg/pose.hpp"

#include <algorithm>
#include <cmath>

namespace cmg {

Mat3d so3_exp_d(const Vec3d& w) { return so3_exp<double>(w); }

Vec3d so3_log(const Mat3d& r) {
  const double trace = r(0, 0) + r(1, 1) + r(2, 2);
  const double cos_theta = std::clamp(0.5 * (trace - 1.0), -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  const Vec3d vee{r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
  if (theta < 1e-8) {
    return vee * 0.5;
  }
  if (theta > M_PI - 1e-6) {
    // Angle pinned just below pi; axis from the dominant diagonal of
    // (R + I) / 2. Good enough for state bookkeeping, not differentiated.
    Mat3d s = r;
    s(0, 0) += 1.0;
    s(1, 1) += 1.0;
    s(2, 2) += 1.0;
    int k = 0;
    if (s(1, 1) > s(k, k)) k = 1;
    if (s(2, 2) > s(k, k)) k = 2;
    Vec3d axis{s(0, k), s(1, k), s(2, k)};
    axis = axis / norm(axis);
    return axis * theta;
  }
  return vee * (0.5 * theta / std::sin(theta));
}

Pose6d se3_log(const Transformd& tf) {
  const Vec3d w = so3_log(tf.R);
  const double theta_sq = norm_sq(w);
  Mat3d v_inv = Mat3d::identity();
  const Mat3d wx = skew(w);
  if (theta_sq < 1e-8) {
    v_inv = v_inv + wx * (-0.5) + (wx * wx) * (1.0 / 12.0);
  } else {
    const double theta = std::sqrt(theta_sq);
    const double half = 0.5 * theta;
    const double cot_coeff = (1.0 - half * std::cos(half) / std::sin(half)) / theta_sq;
    v_inv = v_inv + wx * (-0.5) + (wx * wx) * cot_coeff;
  }
  const Vec3d rho = v_inv * tf.t;
  return {rho.x, rho.y, rho.z, w.x, w.y, w.z};
}

}  // namespace cmg
