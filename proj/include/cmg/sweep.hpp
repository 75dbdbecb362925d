#pragma once

// Didactic rotating-edge sweep: edge 2 is fixed along x at y = -1.2, edge 1
// spins in the plane about the origin, passing through the pathological
// parallel configuration at theta = pi/2. Traces the edge-1 witness point and
// its finite-difference theta-derivative for three solver configurations.

#include <iosfwd>
#include <vector>

#include "cmg/config.hpp"
#include "cmg/vec3.hpp"

namespace cmg {

enum class SweepVariant {
  kNoSmoothing,      // hard operators, lambda = 1e-6
  kRegularizedOnly,  // hard operators, lambda = 0.01
  kSmooth,           // smooth operators (tau = 0.1), lambda = 0.01
};

struct SweepSample {
  double theta = 0.0;
  Vec3d p1{};          // witness point on the rotating edge
  Vec3d dp1_dtheta{};  // central finite difference
};

SmoothingConfig sweep_config(SweepVariant variant);

// n_samples points over theta in [0, pi].
std::vector<SweepSample> rotating_edge_sweep(SweepVariant variant, int n_samples);

// Witness point for one angle (exposed for tests).
Vec3d rotating_edge_witness(double theta, const SmoothingConfig& cfg);

void write_sweep_csv(std::ostream& os, const std::vector<SweepSample>& ns,
                     const std::vector<SweepSample>& l2, const std::vector<SweepSample>& smooth);

}  // namespace cmg
