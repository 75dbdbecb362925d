#pragma once

// Smoothly differentiable witness points.
//
// The edge-edge case reduces to a 2x2 box-constrained QP
//   min 0.5 a'Qa + c'a  s.t.  a in [0,1]^2,
// solved by a branchless analytical active-set scheme: unconstrained
// minimizer, the four clipped box-edge minimizers, a soft argmin over their
// costs, and a soft inside-box indicator blending the two. L2 regularization
// (weight lambda, centering at alpha = 0.5) keeps the quadratic term positive
// definite and removes the witness jump at parallel edges.
//
// The vertex-triangle projection follows the same pattern: three clipped edge
// projections, soft argmin, barycentric inside test, blend with the plane
// projection.

#include <array>
#include <cassert>

#include "cmg/config.hpp"
#include "cmg/smooth_ops.hpp"
#include "cmg/vec3.hpp"

namespace cmg {

template <class T>
struct BoxQp2 {
  // Symmetric positive definite after regularization: [[q11, q12], [q12, q22]].
  T q11{}, q12{}, q22{};
  T c1{}, c2{};

  T cost(const T& a1, const T& a2) const {
    return T(0.5) * (q11 * a1 * a1 + T(2) * q12 * a1 * a2 + q22 * a2 * a2) + c1 * a1 + c2 * a2;
  }
};

template <class T>
struct BoxQpSolution {
  std::array<T, 2> alpha{};
  T gamma_con{};  // soft indicator that the unconstrained minimizer is feasible
};

namespace detail {

template <class T>
T clip01(const T& x, const SmoothingConfig& cfg) {
  if (cfg.hard_ops) {
    if constexpr (std::is_same_v<T, double>) return clip_hard(x, 0.0, 1.0);
    assert(false && "hard operators are not differentiable; use the smooth mode");
  }
  return clip_s(x, 0.0, 1.0, cfg.tau_clip);
}

template <class T>
T within01(const T& x, const SmoothingConfig& cfg) {
  if (cfg.hard_ops) {
    if constexpr (std::is_same_v<T, double>) return within_hard(x, 0.0, 1.0);
    assert(false && "hard operators are not differentiable; use the smooth mode");
  }
  return within_s(x, 0.0, 1.0, cfg.tau_comp);
}

template <class T>
std::array<T, 4> pick_min(const std::array<T, 4>& costs, const SmoothingConfig& cfg) {
  if (cfg.hard_ops) {
    if constexpr (std::is_same_v<T, double>) return argmin_hard(costs);
    assert(false && "hard operators are not differentiable; use the smooth mode");
  }
  return argmin_s(costs, cfg.tau_min);
}

}  // namespace detail

template <class T>
BoxQpSolution<T> solve_box_qp_2(const BoxQp2<T>& qp, const SmoothingConfig& cfg) {
  const T q1 = qp.q11, q2 = qp.q12, q3 = qp.q22;
  const T c1 = qp.c1, c2 = qp.c2;

  const T q2_over_q1 = q2 / q1;
  const T q2_over_q3 = q2 / q3;
  const T c1_over_q1 = c1 / q1;
  const T c2_over_q3 = c2 / q3;

  // Unconstrained minimizer -Q^{-1} c, written with divisions that stay finite
  // for near-singular Q thanks to the regularization on the diagonal.
  const T a1_u = (q2 * c2_over_q3 - c1) / (q1 - q2 * q2_over_q3);
  const T a2_u = (q2 * c1_over_q1 - c2) / (q3 - q2 * q2_over_q1);

  // Minimizers along the four edges of the box, clipped into [0, 1].
  const T a1_1_a2 = detail::clip01(-(q2_over_q3 + c2_over_q3), cfg);  // alpha1 = 1
  const T a1_0_a2 = detail::clip01(-c2_over_q3, cfg);                 // alpha1 = 0
  const T a2_1_a1 = detail::clip01(-(q2_over_q1 + c1_over_q1), cfg);  // alpha2 = 1
  const T a2_0_a1 = detail::clip01(-c1_over_q1, cfg);                 // alpha2 = 0

  const std::array<T, 4> costs{
      T(0.5) * (q1 + T(2) * q2 * a1_1_a2 + q3 * a1_1_a2 * a1_1_a2) + c1 + c2 * a1_1_a2,
      T(0.5) * q3 * a1_0_a2 * a1_0_a2 + c2 * a1_0_a2,
      T(0.5) * (q1 * a2_1_a1 * a2_1_a1 + T(2) * q2 * a2_1_a1 + q3) + c1 * a2_1_a1 + c2,
      T(0.5) * q1 * a2_0_a1 * a2_0_a1 + c1 * a2_0_a1,
  };
  const std::array<std::array<T, 2>, 4> candidates{{
      {T(1), a1_1_a2},
      {T(0), a1_0_a2},
      {a2_1_a1, T(1)},
      {a2_0_a1, T(0)},
  }};

  const std::array<T, 4> weight = detail::pick_min(costs, cfg);
  std::array<T, 2> constrained{T(0), T(0)};
  for (int i = 0; i < 4; ++i) {
    constrained[0] += candidates[i][0] * weight[i];
    constrained[1] += candidates[i][1] * weight[i];
  }

  const T inside = detail::within01(a1_u, cfg) * detail::within01(a2_u, cfg);
  BoxQpSolution<T> out;
  out.gamma_con = inside;
  out.alpha[0] = a1_u * inside + constrained[0] * (T(1) - inside);
  out.alpha[1] = a2_u * inside + constrained[1] * (T(1) - inside);
  return out;
}

template <class T>
struct EeWitness {
  Vec3<T> p1{}, p2{};       // witness points on edge 1 / edge 2
  std::array<T, 2> alpha{}; // interpolation parameters (softclip overshoot allowed)
  T gamma_con{};            // soft "colliding" indicator
};

template <class T>
Vec3<T> edge_point(const Vec3<T>& a, const Vec3<T>& b, const T& alpha) {
  return a + (b - a) * alpha;
}

// Witness points of an edge-edge pair. Degenerate (zero-length) edges are fine:
// lambda keeps the quadratic term invertible.
template <class T>
EeWitness<T> ee_witness(const Vec3<T>& e1a, const Vec3<T>& e1b, const Vec3<T>& e2a,
                        const Vec3<T>& e2b, const SmoothingConfig& cfg) {
  const Vec3<T> t1 = e1b - e1a;
  const Vec3<T> t2n = e2a - e2b;  // second column of A is -t2
  const Vec3<T> b = e1a - e2a;

  BoxQp2<T> qp;
  qp.q11 = dot(t1, t1) + T(cfg.lambda);
  qp.q12 = dot(t1, t2n);
  qp.q22 = dot(t2n, t2n) + T(cfg.lambda);
  qp.c1 = dot(b, t1) - T(0.5 * cfg.lambda);
  qp.c2 = dot(b, t2n) - T(0.5 * cfg.lambda);

  const BoxQpSolution<T> sol = solve_box_qp_2(qp, cfg);
  EeWitness<T> out;
  out.alpha = sol.alpha;
  out.gamma_con = sol.gamma_con;
  out.p1 = edge_point(e1a, e1b, sol.alpha[0]);
  out.p2 = edge_point(e2a, e2b, sol.alpha[1]);
  return out;
}

// Closest point on a triangle to a vertex. Edge projections are clipped over
// the full edge length so the hard limit is the exact closest point for any
// triangle size.
template <class T>
Vec3<T> vf_witness(const Vec3<T>& v, const Vec3<T>& t0, const Vec3<T>& t1, const Vec3<T>& t2,
                   const SmoothingConfig& cfg) {
  using std::sqrt;
  const Vec3<T> d10 = t1 - t0;
  const Vec3<T> d21 = t2 - t1;
  const Vec3<T> d20 = t2 - t0;
  const Vec3<T> dv0 = v - t0;
  const Vec3<T> dv1 = v - t1;

  const double guard = SmoothingConfig::kEdgeNormalEps;
  const T len10 = sqrt(norm_sq(d10) + T(guard));
  const T len21 = sqrt(norm_sq(d21) + T(guard));
  const T len20 = sqrt(norm_sq(d20) + T(guard));
  const Vec3<T> u10 = d10 / len10;
  const Vec3<T> u21 = d21 / len21;
  const Vec3<T> u20 = d20 / len20;

  auto clip_len = [&](const T& s, const T& len) -> T {
    if (cfg.hard_ops) {
      if constexpr (std::is_same_v<T, double>) return clip_hard(s, 0.0, primal(len));
      assert(false && "hard operators are not differentiable; use the smooth mode");
    }
    // clip_s over [0, len]: same softplus composition with the upper bound at
    // the edge length (arc-length parameterization).
    return softplus_s(s, cfg.tau_clip) - softplus_s(s - len, cfg.tau_clip);
  };

  const Vec3<T> on_e1 = t0 + u10 * clip_len(dot(dv0, u10), len10);
  const Vec3<T> on_e2 = t1 + u21 * clip_len(dot(dv1, u21), len21);
  const Vec3<T> on_e3 = t0 + u20 * clip_len(dot(dv0, u20), len20);

  const std::array<T, 3> costs{norm(v - on_e1), norm(v - on_e2), norm(v - on_e3)};
  std::array<T, 3> w;
  if (cfg.hard_ops) {
    if constexpr (std::is_same_v<T, double>) {
      w = {0.0, 0.0, 0.0};
      int best = 0;
      for (int i = 1; i < 3; ++i)
        if (costs[i] < costs[best]) best = i;
      w[best] = 1.0;
    } else {
      assert(false && "hard operators are not differentiable; use the smooth mode");
    }
  } else {
    w = argmin_s(costs, cfg.tau_min);
  }
  const Vec3<T> constrained = on_e1 * w[0] + on_e2 * w[1] + on_e3 * w[2];

  // Unconstrained minimizer: orthogonal projection onto the triangle plane.
  const Vec3<T> n_raw = cross(d10, d20);
  const T n_norm = sqrt(norm_sq(n_raw) + T(guard));
  const Vec3<T> n = n_raw / n_norm;
  const Vec3<T> dvp0 = dv0 - n * dot(dv0, n);
  const Vec3<T> plane_pt = t0 + dvp0;

  // Barycentric inside test for the projected point.
  const T bv = dot(cross(d10, dvp0), n) / n_norm;
  const T bu = dot(cross(dvp0, d20), n) / n_norm;
  const T bw = T(1) - bu - bv;
  const T inside =
      detail::within01(bu, cfg) * detail::within01(bv, cfg) * detail::within01(bw, cfg);

  return plane_pt * inside + constrained * (T(1) - inside);
}

}  // namespace cmg
