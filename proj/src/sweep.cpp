#include "cmg/sweep.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "cmg/witness.hpp"

namespace cmg {

namespace {
// Edge 1: endpoints +/- (sin t, cos t, 0), length 2, centered at the origin;
// parallel to edge 2 at t = pi/2. Edge 2: x in [-2, 2] at y = -1.2.
constexpr double kEdge2HalfLength = 2.0;
constexpr double kEdge2Y = -1.2;
}  // namespace

SmoothingConfig sweep_config(SweepVariant variant) {
  SmoothingConfig cfg;
  switch (variant) {
    case SweepVariant::kNoSmoothing:
      cfg = SmoothingConfig::no_smoothing();
      break;
    case SweepVariant::kRegularizedOnly:
      cfg = SmoothingConfig::no_smoothing();
      cfg.lambda = 0.01;
      break;
    case SweepVariant::kSmooth:
      cfg.lambda = 0.01;
      cfg.tau_clip = cfg.tau_min = cfg.tau_comp = 0.1;
      break;
  }
  return cfg;
}

Vec3d rotating_edge_witness(double theta, const SmoothingConfig& cfg) {
  const Vec3d dir{std::sin(theta), std::cos(theta), 0.0};
  const Vec3d e1a = -dir;
  const Vec3d e1b = dir;
  const Vec3d e2a{-kEdge2HalfLength, kEdge2Y, 0.0};
  const Vec3d e2b{kEdge2HalfLength, kEdge2Y, 0.0};
  return ee_witness(e1a, e1b, e2a, e2b, cfg).p1;
}

std::vector<SweepSample> rotating_edge_sweep(SweepVariant variant, int n_samples) {
  const SmoothingConfig cfg = sweep_config(variant);
  std::vector<SweepSample> out(n_samples);
  const double h = 1e-7;
  for (int i = 0; i < n_samples; ++i) {
    const double theta = M_PI * i / (n_samples - 1);
    out[i].theta = theta;
    out[i].p1 = rotating_edge_witness(theta, cfg);
    const Vec3d plus = rotating_edge_witness(theta + h, cfg);
    const Vec3d minus = rotating_edge_witness(theta - h, cfg);
    out[i].dp1_dtheta = (plus - minus) / (2.0 * h);
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepSample>& ns,
                     const std::vector<SweepSample>& l2, const std::vector<SweepSample>& smooth) {
  os << "theta,ns_px,ns_py,ns_dpx,ns_dpy,l2_px,l2_py,l2_dpx,l2_dpy,smooth_px,smooth_py,"
        "smooth_dpx,smooth_dpy\n";
  os << std::setprecision(17);
  for (size_t i = 0; i < ns.size(); ++i) {
    os << ns[i].theta << ',' << ns[i].p1.x << ',' << ns[i].p1.y << ',' << ns[i].dp1_dtheta.x
       << ',' << ns[i].dp1_dtheta.y << ',' << l2[i].p1.x << ',' << l2[i].p1.y << ','
       << l2[i].dp1_dtheta.x << ',' << l2[i].dp1_dtheta.y << ',' << smooth[i].p1.x << ','
       << smooth[i].p1.y << ',' << smooth[i].dp1_dtheta.x << ',' << smooth[i].dp1_dtheta.y
       << '\n';
  }
}

}  // namespace cmg
