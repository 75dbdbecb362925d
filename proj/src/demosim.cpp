#include "cmg/demosim.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace cmg {

namespace {

Vec3d point_velocity(const std::array<double, 6>& vel, const Vec3d& com, const Vec3d& p) {
  const Vec3d v{vel[0], vel[1], vel[2]};
  const Vec3d w{vel[3], vel[4], vel[5]};
  return v + cross(w, p - com);
}

Vec3d box_inertia_diag(double mass, const CollisionMesh& mesh) {
  const Vec3d lo = mesh.aabb_min();
  const Vec3d hi = mesh.aabb_max();
  const Vec3d s = hi - lo;  // full extents
  return {mass / 12.0 * (s.y * s.y + s.z * s.z), mass / 12.0 * (s.x * s.x + s.z * s.z),
          mass / 12.0 * (s.x * s.x + s.y * s.y)};
}

bool finite(const Vec3d& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace

std::pair<Wrench, Wrench> penalty_forces(const ContactManifold<double>& manifold,
                                         const Vec3d& com1, const std::array<double, 6>& vel1,
                                         const Vec3d& com2, const std::array<double, 6>& vel2,
                                         const PenaltyParams& params) {
  Wrench w1, w2;
  for (const auto& c : manifold.contacts) {
    if (c.activity < 1e-12) continue;
    const double pressure = params.stiffness * softplus_s(-c.dist, params.tau_force);
    const Vec3d n_hat = normalize_smooth(c.normal, 1e-12);

    // Relative velocity of the owning side against the other body at the
    // witness point; the normal force is clamped to stay repulsive.
    const bool side1 = c.side == 1;
    const Vec3d v_own = point_velocity(side1 ? vel1 : vel2, side1 ? com1 : com2, c.point);
    const Vec3d v_other = point_velocity(side1 ? vel2 : vel1, side1 ? com2 : com1, c.point);
    const Vec3d v_rel = v_own - v_other;
    const double v_n = dot(v_rel, n_hat);
    const double fn = std::max(c.activity * (pressure - params.damping * v_n), 0.0);

    const Vec3d v_t = v_rel - n_hat * v_n;
    const double v_t_norm = norm(v_t);
    const double ft = std::min(params.friction * fn, params.friction_viscous * v_t_norm);
    const Vec3d t_hat = v_t / (v_t_norm + 1e-12);

    const Vec3d force_on_owner = n_hat * fn - t_hat * ft;
    Wrench& owner = side1 ? w1 : w2;
    Wrench& other = side1 ? w2 : w1;
    const Vec3d& com_owner = side1 ? com1 : com2;
    const Vec3d& com_other = side1 ? com2 : com1;
    owner.force += force_on_owner;
    owner.torque += cross(c.point - com_owner, force_on_owner);
    other.force -= force_on_owner;
    other.torque -= cross(c.point - com_other, force_on_owner);
  }
  return {w1, w2};
}

DemoSim::DemoSim(const Scene& scene, PenaltyParams params)
    : scene_(&scene), params_(params) {
  states_.resize(scene.bodies.size());
  inertia_diag_.resize(scene.bodies.size());
  for (size_t i = 0; i < scene.bodies.size(); ++i) {
    states_[i].pose = scene.bodies[i].pose;
    const Vec3d given = scene.bodies[i].inertia_diag;
    inertia_diag_[i] = (given.x > 0.0 && given.y > 0.0 && given.z > 0.0)
                           ? given
                           : box_inertia_diag(scene.bodies[i].mass, scene.bodies[i].surface.mesh);
  }
}

bool DemoSim::step(double dt) {
  const size_t n = scene_->bodies.size();
  std::vector<Wrench> wrenches(n);
  std::vector<Transformd> transforms(n);
  for (size_t i = 0; i < n; ++i) transforms[i] = se3_exp(states_[i].pose);

  deepest_penetration_ = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (scene_->bodies[i].is_static && scene_->bodies[j].is_static) continue;
      const auto manifold =
          generate_manifold(scene_->bodies[i].surface, scene_->bodies[j].surface,
                            states_[i].pose, states_[j].pose, scene_->smoothing);
      for (const auto& c : manifold.contacts)
        if (c.activity > 0.5) deepest_penetration_ = std::min(deepest_penetration_, c.dist);
      const auto [wi, wj] =
          penalty_forces(manifold, transforms[i].t, states_[i].velocity, transforms[j].t,
                         states_[j].velocity, params_);
      wrenches[i].force += wi.force;
      wrenches[i].torque += wi.torque;
      wrenches[j].force += wj.force;
      wrenches[j].torque += wj.torque;
    }
  }

  for (size_t i = 0; i < n; ++i) {
    if (scene_->bodies[i].is_static) continue;
    auto& st = states_[i];
    const double mass = scene_->bodies[i].mass;
    const Vec3d accel = wrenches[i].force / mass + params_.gravity;
    st.velocity[0] += dt * accel.x;
    st.velocity[1] += dt * accel.y;
    st.velocity[2] += dt * accel.z;

    // I_world = R diag(I) R^T; angular update without the gyroscopic term
    // (adequate at demo spin rates).
    const Mat3d r = transforms[i].R;
    Vec3d tau_body = r.t_mul(wrenches[i].torque);
    const Vec3d wdot_body{tau_body.x / inertia_diag_[i].x, tau_body.y / inertia_diag_[i].y,
                          tau_body.z / inertia_diag_[i].z};
    const Vec3d wdot = r * wdot_body;
    st.velocity[3] += dt * wdot.x;
    st.velocity[4] += dt * wdot.y;
    st.velocity[5] += dt * wdot.z;

    Transformd tf = transforms[i];
    tf.t += Vec3d{st.velocity[0], st.velocity[1], st.velocity[2]} * dt;
    const Vec3d w{st.velocity[3], st.velocity[4], st.velocity[5]};
    tf.R = so3_exp_d(w * dt) * tf.R;
    st.pose = se3_log(tf);

    if (!finite(tf.t) || !std::isfinite(st.velocity[3]) || !std::isfinite(st.velocity[4]) ||
        !std::isfinite(st.velocity[5]) || !std::isfinite(st.velocity[0]))
      return false;
  }
  time_ += dt;
  return true;
}

double DemoSim::kinetic_energy() const {
  double e = 0.0;
  for (size_t i = 0; i < states_.size(); ++i) {
    if (scene_->bodies[i].is_static) continue;
    const auto& v = states_[i].velocity;
    const double mass = scene_->bodies[i].mass;
    e += 0.5 * mass * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    const Mat3d r = se3_exp(states_[i].pose).R;
    const Vec3d w_body = r.t_mul({v[3], v[4], v[5]});
    e += 0.5 * (inertia_diag_[i].x * w_body.x * w_body.x +
                inertia_diag_[i].y * w_body.y * w_body.y +
                inertia_diag_[i].z * w_body.z * w_body.z);
  }
  return e;
}

std::array<double, 3> DemoSim::linear_momentum() const {
  std::array<double, 3> p{0, 0, 0};
  for (size_t i = 0; i < states_.size(); ++i) {
    if (scene_->bodies[i].is_static) continue;
    const double mass = scene_->bodies[i].mass;
    for (int k = 0; k < 3; ++k) p[k] += mass * states_[i].velocity[k];
  }
  return p;
}

bool run_demosim_csv(const Scene& scene, double duration, double dt, std::ostream& os,
                     const PenaltyParams& params, int sample_every) {
  DemoSim sim(scene, params);
  os << "time";
  for (const auto& b : scene.bodies)
    os << ',' << b.name << "_tx," << b.name << "_ty," << b.name << "_tz," << b.name << "_rx,"
       << b.name << "_ry," << b.name << "_rz," << b.name << "_vx," << b.name << "_vy," << b.name
       << "_vz," << b.name << "_wx," << b.name << "_wy," << b.name << "_wz";
  os << '\n' << std::setprecision(17);

  const int steps = static_cast<int>(std::llround(duration / dt));
  for (int s = 0; s <= steps; ++s) {
    if (s % sample_every == 0) {
      os << sim.time();
      for (const auto& st : sim.states()) {
        for (double v : st.pose) os << ',' << v;
        for (double v : st.velocity) os << ',' << v;
      }
      os << '\n';
    }
    if (s < steps && !sim.step(dt)) return false;
  }
  return true;
}

}  // namespace cmg
