#pragma once

// Minimal penalty-force rigid-body integrator driven by contact manifolds:
// per contact, a spring-damper normal force scaled by the activity indicator
// plus Coulomb-capped viscous friction, applied action-reaction at the witness
// point. Semi-implicit Euler stepping on SE(3). This exists to validate the
// manifolds end to end (boxes settle, stacks stand, nothing tunnels), not to
// compete with a real dynamics engine.

#include <optional>
#include <vector>

#include "cmg/manifold.hpp"
#include "cmg/scene.hpp"

namespace cmg {

struct RigidBodyState {
  Pose6d pose{0, 0, 0, 0, 0, 0};
  std::array<double, 6> velocity{0, 0, 0, 0, 0, 0};  // world [linear; angular]
};

struct PenaltyParams {
  double stiffness = 1e4;         // N/m
  double damping = 100.0;         // N*s/m along the contact normal
  double friction = 0.5;          // Coulomb coefficient
  double friction_viscous = 100.0;  // N*s/m tangential, capped by friction * |Fn|
  double tau_force = 1e-4;        // softplus temperature of max_s(-dist, 0) (m)
  Vec3d gravity{0.0, 0.0, -9.81};
};

struct Wrench {
  Vec3d force{};
  Vec3d torque{};  // about the body's center of mass
};

// Accumulates the contact wrenches a manifold exerts on its two bodies.
// Forces are equal and opposite at each witness point by construction.
std::pair<Wrench, Wrench> penalty_forces(const ContactManifold<double>& manifold,
                                         const Vec3d& com1, const std::array<double, 6>& vel1,
                                         const Vec3d& com2, const std::array<double, 6>& vel2,
                                         const PenaltyParams& params);

class DemoSim {
 public:
  DemoSim(const Scene& scene, PenaltyParams params = {});

  // One semi-implicit Euler step; returns false if the state went non-finite.
  bool step(double dt);

  const std::vector<RigidBodyState>& states() const { return states_; }
  std::vector<RigidBodyState>& states() { return states_; }
  double time() const { return time_; }
  double kinetic_energy() const;
  std::array<double, 3> linear_momentum() const;

  // Deepest signed contact distance of the last step's manifolds (0 if none).
  double deepest_penetration() const { return deepest_penetration_; }

 private:
  const Scene* scene_;
  PenaltyParams params_;
  std::vector<RigidBodyState> states_;
  std::vector<Vec3d> inertia_diag_;
  double time_ = 0.0;
  double deepest_penetration_ = 0.0;
};

// Runs a scene for a duration, recording one CSV row per sample_every steps:
// time, then per body pose (6) and velocity (6). Returns false on NaN blowup.
bool run_demosim_csv(const Scene& scene, double duration, double dt, std::ostream& os,
                     const PenaltyParams& params = {}, int sample_every = 10);

}  // namespace cmg
