// Temporary development probe for the 45-degree box-on-box scene.

#include <cmath>
#include <cstdio>
#include <vector>

#include "cmg/manifold.hpp"

using namespace cmg;

int main(int argc, char** argv) {
  double pen = argc > 1 ? atof(argv[1]) : 0.04;
  double dx = argc > 2 ? atof(argv[2]) : 0.02;
  double dy = argc > 3 ? atof(argv[3]) : 0.035;
  double tau_pen = argc > 4 ? atof(argv[4]) : 0.005;
  double tau_nn = argc > 5 ? atof(argv[5]) : 0.002;
  double lambda = argc > 6 ? atof(argv[6]) : 0.02;
  int trace = argc > 7 ? atoi(argv[7]) : 5;
  double rx = argc > 8 ? atof(argv[8]) : 0.0;
  double ry = argc > 9 ? atof(argv[9]) : 0.0;
  double tau_clash = argc > 10 ? atof(argv[10]) : 0.05;

  SuperquadricParams sq;
  sq.eps1 = sq.eps2 = 0.1;
  sq.axes = {0.5, 0.5, 0.5};
  SurfaceModel box = build_surface(make_box_mesh({0.5, 0.5, 0.5}, 1, true),
                                   SmoothSdf::superquadric(sq), 0, 12);

  SmoothingConfig cfg;
  cfg.lambda = lambda;
  cfg.tau_clip = cfg.tau_min = cfg.tau_comp = 1e-3;
  cfg.tau_sign = 0.05;
  cfg.tau_pen = tau_pen;
  cfg.tau_nn = tau_nn;
  cfg.tau_clash = tau_clash;
  cfg.tau_topk_verts = cfg.tau_topk_edges = 1e-4;
  cfg.sphere_trace = trace > 0;
  cfg.sphere_trace_iters = trace;

  Pose6d p_bottom{0, 0, 0.5, 0, 0, 0};
  // Axis-angle of Rx(rx) * Ry(ry) * Rz(theta); theta detuned from 45 degrees
  // splits the eight rim crossings into two C4 orbits with distinct witness
  // distances.
  const double theta = M_PI / 4 + (argc > 11 ? atof(argv[11]) : 0.0);
  Mat3d r_tilt = so3_exp_d({rx, 0, 0}) * so3_exp_d({0, ry, 0}) * so3_exp_d({0, 0, theta});
  Vec3d aa = so3_log(r_tilt);
  Pose6d p_top{dx, dy, 1.5 - pen, aa.x, aa.y, aa.z};

  auto m = generate_manifold(box, box, p_bottom, p_top, cfg);

  int active_ee = 0, active_vs = 0;
  printf("EE contacts with activity > 0.3:\n");
  for (const auto& c : m.contacts) {
    if (c.kind == ContactKind::kEdgeEdge && primal(c.activity) > 0.3) {
      Vec3d n = vec_primal(c.normal);
      double nz_angle = std::acos(std::min(1.0, std::abs(n.z) / (norm(n) + 1e-300))) * 180 / M_PI;
      printf(
          "  side %d (edges %2d,%2d) p=(%+.3f, %+.3f, %.3f) act=%.3f dist=%+.4f |n|=%.3f "
          "angle(n,z)=%.1f deg nz=%+.3f\n",
          c.side, c.src_a, c.src_b, primal(c.point.x), primal(c.point.y), primal(c.point.z),
          primal(c.activity), primal(c.dist), norm(n), nz_angle, n.z);
      if (primal(c.activity) > 0.5) active_ee++;
    }
    if (c.kind == ContactKind::kVertexSdf && primal(c.activity) > 0.5) active_vs++;
  }
  printf("active EE (>0.5): %d, active VS (>0.5): %d\n", active_ee, active_vs);

  // Factor breakdown for the most active pairs.
  printf("\npair factors (act1 > 0.1):\n");
  const auto& ee = m.ee;
  for (size_t k = 0; k < ee.m1; ++k)
    for (size_t l = 0; l < ee.m2; ++l) {
      size_t i = k * ee.m2 + l;
      if (primal(ee.act1[i]) > 0.1 || primal(ee.act2[i]) > 0.1)
        printf("  (%2zu,%2zu) d=%.4f con=%.3f pen1=%.3f pen2=%.3f nn1=%.3f nn2=%.3f cl=%.3f -> "
               "a1=%.3f a2=%.3f\n",
               k, l, primal(ee.dist[i]), primal(ee.con[i]), primal(ee.pen1[i]),
               primal(ee.pen2[i]), primal(ee.nn1[i]), primal(ee.nn2[i]), primal(ee.clash[i]),
               primal(ee.act1[i]), primal(ee.act2[i]));
    }
  return 0;
}
