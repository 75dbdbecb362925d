#include <doctest.h>

#include <cmath>

#include "cmg/sdf.hpp"
#include "test_helpers.hpp"

using namespace cmg;

namespace {

SuperquadricParams unit_sphere() { return {}; }

SuperquadricParams boxy_sq(double eps, const Vec3d& axes) {
  SuperquadricParams q;
  q.eps1 = q.eps2 = eps;
  q.axes = axes;
  return q;
}

ConvexPolyhedronParams unit_cube_planes(double tau) {
  ConvexPolyhedronParams cp;
  cp.tau = tau;
  const Vec3d axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int a = 0; a < 3; ++a)
    for (double s : {1.0, -1.0}) {
      cp.normals.push_back(axes[a] * s);
      cp.points.push_back(axes[a] * (0.5 * s));
    }
  return cp;
}

// Metric sphere field for the sphere-tracing fixed-point checks.
struct MetricSphere {
  double radius = 1.0;
  SdfSample<double> value_and_gradient(const Vec3d& p) const {
    const double r = norm(p);
    return {r - radius, p / r};
  }
};

}  // namespace

TEST_CASE("sq inside-outside: sphere surface, quadratic growth, sharp corner") {
  const auto sphere = unit_sphere();
  CHECK(sq_inside_outside_canonical<double>({0, 0, 1}, sphere) == doctest::Approx(1.0));
  CHECK(sq_inside_outside_canonical<double>({0, 0, 2}, sphere) == doctest::Approx(4.0));
  // f = r^2 for the sphere: radius 2 in any direction.
  CHECK(sq_inside_outside_canonical<double>({2 / std::sqrt(2.0), 2 / std::sqrt(2.0), 0}, sphere) ==
        doctest::Approx(4.0));

  const auto cube = boxy_sq(0.1, {1, 1, 1});
  CHECK(sq_inside_outside_canonical<double>({1, 1, 1}, cube) > 1.0);
}

TEST_CASE("sq sdf: sphere case analytic values") {
  const auto sphere = unit_sphere();
  CHECK(sq_sdf_canonical<double>({0, 0, 1}, sphere) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sq_sdf_canonical<double>({0, 0, 2}, sphere) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(sq_sdf_canonical<double>({0, 0, 0.5}, sphere) == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("sq sdf: center floor keeps value and derivative finite") {
  const auto sphere = unit_sphere();
  const SmoothSdf sdf = SmoothSdf::superquadric(sphere);
  const auto at_center = sdf.value_and_gradient<double>({0, 0, 0});
  CHECK(std::isfinite(at_center.value));
  CHECK(std::isfinite(at_center.grad.x));
}

TEST_CASE("sq normal: radial direction, bounded norm, vanishes at center") {
  const SmoothSdf sdf = SmoothSdf::superquadric(unit_sphere());
  const auto s = sdf.value_and_normal_source<double>({0, 0, 2});
  const Vec3d n = normalize_smooth(s.grad, 1e-9);
  CHECK(n.z == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(n.x) < 1e-9);
  CHECK(norm(n) <= 1.0 + 1e-9);

  const auto center = sdf.value_and_normal_source<double>({0, 0, 0});
  CHECK(norm(normalize_smooth(center.grad, 1e-9)) < 1e-3);
}

TEST_CASE("cp sdf: halfspace exact, cube values, tau->0 convergence") {
  ConvexPolyhedronParams half;
  half.normals = {{0, 0, 1}};
  half.points = {{0, 0, 0}};
  half.tau = 0.05;
  test::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3d p = test::random_vec(rng, -2.0, 2.0);
    CHECK(cp_sdf(p, half) == doctest::Approx(p.z).epsilon(1e-12));
  }

  const auto cube = unit_cube_planes(1e-6);
  CHECK(cp_sdf<double>({0, 0, 0}, cube) == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(cp_sdf<double>({2, 0, 0}, cube) == doctest::Approx(1.5).epsilon(1e-5));

  // Exact-max convergence on random queries.
  const auto cube_sharp = unit_cube_planes(1e-6);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3d p = test::random_vec(rng, -1.5, 1.5);
    double exact = -1e300;
    for (size_t i = 0; i < cube_sharp.normals.size(); ++i)
      exact = std::max(exact, dot(cube_sharp.normals[i], p - cube_sharp.points[i]));
    CHECK(cp_sdf(p, cube_sharp) == doctest::Approx(exact).epsilon(1e-5));
  }
}

TEST_CASE("opc sdf: single point reduces to its plane") {
  OrientedPointcloudParams pc;
  pc.points = {{0, 0, 0}};
  pc.normals = {{0, 0, 1}};
  pc.lengthscales = {0.5};
  test::Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3d p = test::random_vec(rng, -1.0, 1.0);
    CHECK(opc_sdf(p, pc) == doctest::Approx(p.z).epsilon(1e-9));
  }
}

TEST_CASE("opc sdf: coplanar points with a common normal still give the plane") {
  OrientedPointcloudParams pc;
  pc.points = {{0, 0, 0}, {0.4, -0.2, 0}, {-0.3, 0.5, 0}};
  pc.normals = {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
  pc.lengthscales = {0.5, 0.4, 0.6};
  test::Rng rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3d p = test::random_vec(rng, -0.8, 0.8);
    CHECK(opc_sdf(p, pc) == doctest::Approx(p.z).epsilon(1e-9));
  }
}

TEST_CASE("opc sdf: sphere samples give signed field with zero crossing near r=1") {
  OrientedPointcloudParams pc;
  test::Rng rng(37);
  for (int i = 0; i < 200; ++i) {
    Vec3d dir = test::random_vec(rng, -1.0, 1.0);
    const double len = norm(dir);
    if (len < 1e-3) {
      dir = {1, 0, 0};
    } else {
      dir = dir / len;
    }
    pc.points.push_back(dir);
    pc.normals.push_back(dir);
    pc.lengthscales.push_back(0.3);
  }
  const SmoothSdf sdf = SmoothSdf::oriented_pointcloud(pc);
  for (int trial = 0; trial < 50; ++trial) {
    Vec3d dir = test::random_vec(rng, -1.0, 1.0);
    const double len = norm(dir);
    if (len < 1e-3) continue;
    dir = dir / len;
    CHECK(sdf.value(dir * 1.2) > 0.0);
    CHECK(sdf.value(dir * 0.8) < 0.0);
    // Bisect the zero crossing along the ray.
    double lo = 0.8, hi = 1.2;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (sdf.value(dir * mid) < 0.0 ? lo : hi) = mid;
    }
    CHECK(std::abs(0.5 * (lo + hi) - 1.0) < 0.05);
  }
}

TEST_CASE("union: single child identity, twin-shift bound, min bracketing") {
  const SmoothSdf sphere = SmoothSdf::superquadric(unit_sphere());
  const SmoothSdf single = SmoothSdf::smooth_union({sphere}, 0.01);
  test::Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec3d p = test::random_vec(rng, -2.0, 2.0);
    CHECK(single.value(p) == doctest::Approx(sphere.value(p)).epsilon(1e-12));
  }

  const double tau = 0.01;
  const SmoothSdf twins = SmoothSdf::smooth_union({sphere, sphere}, tau);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec3d p = test::random_vec(rng, -2.0, 2.0);
    const double child = sphere.value(p);
    CHECK(twins.value(p) == doctest::Approx(child - tau * std::log(2.0)).epsilon(1e-9));
    CHECK(twins.value(p) <= child + 1e-12);
  }

  // -lse(-phi) lies in [min phi - tau log L, min phi] for distinct children.
  SuperquadricParams other = unit_sphere();
  other.pose = {1.5, 0.2, -0.3, 0, 0, 0};
  const SmoothSdf pair = SmoothSdf::smooth_union(
      {sphere, SmoothSdf::superquadric(other)}, tau);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3d p = test::random_vec(rng, -2.5, 2.5);
    const double child_min =
        std::min(sphere.value(p), SmoothSdf::superquadric(other).value(p));
    const double composed = pair.value(p);
    CHECK(composed <= child_min + 1e-12);
    CHECK(composed >= child_min - tau * std::log(2.0) - 1e-12);
  }
}

TEST_CASE("subtraction: cavity interior becomes positive") {
  SuperquadricParams small = unit_sphere();
  small.axes = {0.4, 0.4, 0.4};
  const SmoothSdf hollow = SmoothSdf::subtraction(SmoothSdf::superquadric(unit_sphere()),
                                                  SmoothSdf::superquadric(small), 0.005);
  // Inside the carved cavity: phi+ < 0 but -phi- > 0 wins.
  CHECK(hollow.value<double>({0.1, 0, 0}) > 0.0);
  // In the shell between radius 0.4 and 1: negative (inside the solid).
  CHECK(hollow.value<double>({0.7, 0, 0}) < 0.0);
  // Outside everything: positive.
  CHECK(hollow.value<double>({1.5, 0, 0}) > 0.0);
}

TEST_CASE("zero-level sign consistency for all primitives") {
  test::Rng rng(43);
  const SmoothSdf shapes[] = {
      SmoothSdf::superquadric(boxy_sq(0.3, {0.6, 0.4, 0.5})),
      SmoothSdf::convex_polyhedron(unit_cube_planes(1e-4)),
  };
  for (const auto& sdf : shapes) {
    for (int trial = 0; trial < 1000; ++trial) {
      Vec3d dir = test::random_vec(rng, -1.0, 1.0);
      const double len = norm(dir);
      if (len < 1e-3) continue;
      dir = dir / len;
      // Points generated inside / outside by construction (shapes contain the
      // 0.2-ball and lie within the 2-ball).
      CHECK(sdf.value(dir * 0.1) < 0.0);
      CHECK(sdf.value(dir * 3.0) > 0.0);
    }
  }
}

TEST_CASE("gradients match finite differences for primitives and compositions") {
  test::Rng rng(47);
  SuperquadricParams posed = boxy_sq(0.4, {0.7, 0.5, 0.6});
  posed.pose = {0.2, -0.1, 0.3, 0.3, 0.2, 0.1};

  OrientedPointcloudParams pc;
  for (int i = 0; i < 50; ++i) {
    Vec3d dir = test::random_vec(rng, -1.0, 1.0);
    const double len = norm(dir) + 1e-9;
    dir = dir / len;
    pc.points.push_back(dir);
    pc.normals.push_back(dir);
    pc.lengthscales.push_back(0.4);
  }

  std::vector<SmoothSdf> shapes;
  shapes.push_back(SmoothSdf::superquadric(posed));
  shapes.push_back(SmoothSdf::convex_polyhedron(unit_cube_planes(0.01)));
  shapes.push_back(SmoothSdf::oriented_pointcloud(pc));
  shapes.push_back(SmoothSdf::smooth_union(
      {shapes[0], SmoothSdf::convex_polyhedron(unit_cube_planes(0.01))}, 0.02));
  shapes.push_back(SmoothSdf::subtraction(shapes[1], SmoothSdf::superquadric(boxy_sq(1.0, {0.3, 0.3, 0.3})), 0.02));

  for (const auto& sdf : shapes) {
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const Vec3d p = test::random_vec(rng, -1.2, 1.2);
      if (std::abs(sdf.value(p)) < 1e-4) continue;  // avoid exact surface-kink queries
      ++checked;
      const auto sample = sdf.value_and_gradient(p);
      for (int axis = 0; axis < 3; ++axis) {
        auto value_along = [&](double h) {
          Vec3d q = p;
          q[axis] += h;
          return sdf.value(q);
        };
        const double fd = (value_along(1e-5) - value_along(-1e-5)) / 2e-5;
        CHECK(test::rel_close(sample.grad[axis], fd, 1e-4, 1e-6));
      }
    }
    CHECK(checked > 150);
  }
}

TEST_CASE("posed sdf: translation equivariance and rotated gradients") {
  const SmoothSdf sphere = SmoothSdf::superquadric(unit_sphere());
  test::Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3d t = test::random_vec(rng, -1.0, 1.0);
    PosedSdf<double> posed;
    posed.body = &sphere;
    posed.world_from_body = se3_exp<double>({t.x, t.y, t.z, 0, 0, 0});
    const Vec3d p = test::random_vec(rng, -2.0, 2.0);
    CHECK(posed.value(p) == doctest::Approx(sphere.value(p - t)).epsilon(1e-12));
  }

  // Rotation: world gradient is the rotated body gradient; check against
  // finite differences of the posed field.
  for (int trial = 0; trial < 20; ++trial) {
    Pose6d pose;
    for (auto& v : pose) v = test::uniform(rng, -1.0, 1.0);
    PosedSdf<double> posed;
    posed.body = &sphere;
    posed.world_from_body = se3_exp(pose);
    const Vec3d p = test::random_vec(rng, -2.0, 2.0);
    if (norm(posed.world_from_body.apply_inverse(p)) < 0.2) continue;
    const auto sample = posed.value_and_gradient(p);
    for (int axis = 0; axis < 3; ++axis) {
      auto value_along = [&](double h) {
        Vec3d q = p;
        q[axis] += h;
        return posed.value(q);
      };
      const double fd = (value_along(1e-5) - value_along(-1e-5)) / 2e-5;
      CHECK(test::rel_close(sample.grad[axis], fd, 1e-5, 1e-7));
    }
  }
}

TEST_CASE("posed sphere zero level set sits at radius under any pose") {
  const SmoothSdf sphere = SmoothSdf::superquadric(unit_sphere());
  test::Rng rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    Pose6d pose;
    for (auto& v : pose) v = test::uniform(rng, -1.2, 1.2);
    PosedSdf<double> posed;
    posed.body = &sphere;
    posed.world_from_body = se3_exp(pose);
    Vec3d dir = test::random_vec(rng, -1.0, 1.0);
    dir = dir / (norm(dir) + 1e-12);
    const Vec3d on_surface = posed.world_from_body.apply(dir);
    CHECK(posed.value(on_surface) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("sphere tracing: on-surface fixed point and metric-sphere convergence") {
  const MetricSphere metric;
  const Vec3d on_surface{0, 0, 1};
  const Vec3d projected = sphere_trace_project(metric, on_surface, 5);
  CHECK(norm(projected - on_surface) < 1e-12);

  // Metric field: lands on the surface immediately, stays for 5 iterations.
  const Vec3d from_outside = sphere_trace_project(metric, Vec3d{0, 0, 2}, 5);
  CHECK(std::abs(norm(from_outside) - 1.0) < 1e-3);
}

TEST_CASE("sphere tracing: nonmetric sq sphere follows the closed-form recurrence") {
  const SmoothSdf sphere = SmoothSdf::superquadric(unit_sphere());
  // phi(r) = (r - 1) / r^2 along a radial ray; unit gradient direction, so the
  // iterate recurrence is r <- r - phi(r).
  double r = 2.0;
  for (int k = 0; k < 5; ++k) r = r - (r - 1.0) / (r * r);
  const Vec3d traced = sphere_trace_project(sphere, Vec3d{0, 0, 2}, 5);
  CHECK(norm(traced) == doctest::Approx(r).epsilon(1e-6));
  // The nonmetric field needs a couple more iterations for 1e-3.
  const Vec3d traced7 = sphere_trace_project(sphere, Vec3d{0, 0, 2}, 7);
  CHECK(std::abs(norm(traced7) - 1.0) < 1e-3);
}

TEST_CASE("sphere tracing: cp cube face projection") {
  const SmoothSdf cube = SmoothSdf::convex_polyhedron(unit_cube_planes(1e-4));
  const Vec3d traced = sphere_trace_project(cube, Vec3d{0.1, -0.05, 0.65}, 5);
  CHECK(traced.z == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(traced.x == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("sphere tracing: |phi| shrinks for 90% of near-surface seeds") {
  const SmoothSdf shape = SmoothSdf::superquadric(boxy_sq(0.3, {0.6, 0.5, 0.7}));
  test::Rng rng(61);
  int improved = 0, total = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Vec3d dir = test::random_vec(rng, -1.0, 1.0);
    const double len = norm(dir);
    if (len < 1e-3) continue;
    dir = dir / len;
    const Vec3d seed = dir * test::uniform(rng, 0.75, 1.35);  // near the surface
    const double before = std::abs(shape.value(seed));
    const double after = std::abs(shape.value(sphere_trace_project(shape, seed, 5)));
    ++total;
    if (after <= before + 1e-12) ++improved;
  }
  CHECK(improved >= total * 9 / 10);
}
