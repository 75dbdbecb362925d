#pragma once

// Shared test utilities: RNG wrappers, finite-difference helpers, and the
// independent brute-force oracles (grid + polish) used to pin down expected
// values for the witness solvers.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "cmg/dual.hpp"
#include "cmg/vec3.hpp"
#include "cmg/witness.hpp"

namespace test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cmg::Vec3d random_vec(Rng& rng, double lo, double hi) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

// Central finite difference of a scalar function of one variable.
template <class F>
double fd_central(F f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Forward-mode derivative of f at x via a 1-wide dual.
template <class F>
double forward_derivative(F f, double x) {
  using D = cmg::Dual<1>;
  return f(D::seeded(x, 0)).d[0];
}

inline bool rel_close(double got, double want, double rel_tol, double abs_tol = 1e-7) {
  return std::abs(got - want) <= std::max(abs_tol, rel_tol * std::abs(want));
}

// --- box QP oracle ---------------------------------------------------------------
// Independent of the analytical active-set path: dense grid seed followed by
// exact coordinate descent (globally convergent on a strictly convex quadratic
// over a box), iterated to machine precision.

inline std::array<double, 2> box_qp_oracle(const cmg::BoxQp2<double>& qp, int grid = 201) {
  double best_a = 0.0, best_b = 0.0;
  double best = qp.cost(0.0, 0.0);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double a = double(i) / (grid - 1);
      const double b = double(j) / (grid - 1);
      const double c = qp.cost(a, b);
      if (c < best) {
        best = c;
        best_a = a;
        best_b = b;
      }
    }
  }
  for (int it = 0; it < 200; ++it) {
    best_a = std::clamp(-(qp.c1 + qp.q12 * best_b) / qp.q11, 0.0, 1.0);
    best_b = std::clamp(-(qp.c2 + qp.q12 * best_a) / qp.q22, 0.0, 1.0);
  }
  return {best_a, best_b};
}

// --- point-triangle oracle ---------------------------------------------------------
// Classic Voronoi-region closest point (vertex / edge / face cases), a route
// entirely separate from the clipped-projection + soft-argmin construction.

inline cmg::Vec3d closest_point_triangle_oracle(const cmg::Vec3d& p, const cmg::Vec3d& a,
                                                const cmg::Vec3d& b, const cmg::Vec3d& c) {
  using cmg::Vec3d;
  const Vec3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3d bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

  const Vec3d cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + (c - b) * w;
  }

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

// Dense barycentric grid cross-check for the oracle above (coarse; used on a
// subsample to validate the region-based route).
inline cmg::Vec3d closest_point_triangle_grid(const cmg::Vec3d& p, const cmg::Vec3d& a,
                                              const cmg::Vec3d& b, const cmg::Vec3d& c,
                                              int grid = 400) {
  cmg::Vec3d best = a;
  double best_d = norm_sq(p - a);
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid - i; ++j) {
      const double u = double(i) / grid;
      const double v = double(j) / grid;
      const cmg::Vec3d q = a + (b - a) * u + (c - a) * v;
      const double d = norm_sq(p - q);
      if (d < best_d) {
        best_d = d;
        best = q;
      }
    }
  }
  return best;
}

}  // namespace test
