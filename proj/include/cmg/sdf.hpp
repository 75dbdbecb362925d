#pragma once

// Analytical signed distance primitives (superquadric, convex polyhedron,
// oriented pointcloud) composed under smooth union / subtraction. Evaluation
// is templated over the scalar type; spatial gradients are obtained by
// seeding a 3-wide dual over the query point, so any scalar T (including
// pose-tangent duals) nests cleanly.
//
// Two gradient flavors are exposed:
//   value_and_gradient      - true gradient of the composed field phi,
//   value_and_normal_source - per-leaf normal field: superquadrics contribute
//                             grad f (their inside-outside function) instead
//                             of grad phi, which is non-monotonic away from
//                             the surface and can invert normals.

#include <cassert>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "cmg/dual.hpp"
#include "cmg/pose.hpp"
#include "cmg/smooth_ops.hpp"
#include "cmg/vec3.hpp"

namespace cmg {

// Floors documented by the library: far below any physical scale (meters),
// present only to keep derivatives finite at exact singular points.
inline constexpr double kSquaredCoordFloor = 1e-30;  // superquadric powers of 0
inline constexpr double kRadiusGuard = 1e-20;        // superquadric 1/|x| guard
inline constexpr double kWeightFloor = 1e-30;        // pointcloud far-field denominator

struct SuperquadricParams {
  double eps1 = 1.0;  // boxiness along z; (0, 2]
  double eps2 = 1.0;  // boxiness in the xy cross-section; (0, 2]
  Vec3d axes{1.0, 1.0, 1.0};
  Pose6d pose{0, 0, 0, 0, 0, 0};  // primitive frame within the body frame

  void validate() const {
    if (!(eps1 > 0.0 && eps1 <= 2.0 && eps2 > 0.0 && eps2 <= 2.0))
      throw std::invalid_argument("superquadric: eps1, eps2 must lie in (0, 2]");
    if (!(axes.x > 0.0 && axes.y > 0.0 && axes.z > 0.0))
      throw std::invalid_argument("superquadric: axis lengths must be positive");
  }
};

struct ConvexPolyhedronParams {
  std::vector<Vec3d> normals;  // unit
  std::vector<Vec3d> points;   // a point on each plane
  double tau = 1e-3;           // logsumexp temperature (meters)

  void validate() const {
    if (normals.empty() || normals.size() != points.size())
      throw std::invalid_argument("convex polyhedron: need matching normals/points, N >= 1");
    for (const auto& n : normals)
      if (std::abs(norm(n) - 1.0) > 1e-9)
        throw std::invalid_argument("convex polyhedron: normals must be unit length");
    if (!(tau > 0.0)) throw std::invalid_argument("convex polyhedron: tau > 0");
  }
};

struct OrientedPointcloudParams {
  std::vector<Vec3d> points;
  std::vector<Vec3d> normals;        // unit
  std::vector<double> lengthscales;  // per-point Gaussian basis widths (meters)

  void validate() const {
    if (points.empty() || points.size() != normals.size() ||
        points.size() != lengthscales.size())
      throw std::invalid_argument("oriented pointcloud: need matching arrays, N >= 1");
    for (const auto& n : normals)
      if (std::abs(norm(n) - 1.0) > 1e-9)
        throw std::invalid_argument("oriented pointcloud: normals must be unit length");
    for (double th : lengthscales)
      if (!(th > 0.0)) throw std::invalid_argument("oriented pointcloud: lengthscales > 0");
  }
};

// --- primitive evaluation -----------------------------------------------------

// Inside-outside function on normalized coordinates; 1 on the surface,
// > 1 outside. Query point is in the primitive's canonical frame.
template <class T>
T sq_inside_outside_canonical(const Vec3<T>& p, const SuperquadricParams& q) {
  using std::pow;
  const T xn = p.x / T(q.axes.x);
  const T yn = p.y / T(q.axes.y);
  const T zn = p.z / T(q.axes.z);
  const T x2 = xn * xn + T(kSquaredCoordFloor);
  const T y2 = yn * yn + T(kSquaredCoordFloor);
  const T z2 = zn * zn + T(kSquaredCoordFloor);
  const T g = pow(x2, 1.0 / q.eps2) + pow(y2, 1.0 / q.eps2);
  return pow(g, q.eps2 / q.eps1) + pow(z2, 1.0 / q.eps1);
}

// Approximate signed distance (1 - f^(-eps1/2)) / |x~|: zero exactly on the
// surface, negative inside, metric only near the surface.
template <class T>
T sq_sdf_canonical(const Vec3<T>& p, const SuperquadricParams& q) {
  using std::pow;
  using std::sqrt;
  const T f = sq_inside_outside_canonical(p, q);
  const Vec3<T> pn{p.x / T(q.axes.x), p.y / T(q.axes.y), p.z / T(q.axes.z)};
  const T r = sqrt(norm_sq(pn) + T(kRadiusGuard));
  return (T(1) - pow(f, -q.eps1 / 2.0)) / r;
}

template <class T>
T cp_sdf(const Vec3<T>& p, const ConvexPolyhedronParams& cp) {
  const size_t n = cp.normals.size();
  std::vector<T> dists(n);
  for (size_t i = 0; i < n; ++i)
    dists[i] = dot(vec_cast<T>(cp.normals[i]), p - vec_cast<T>(cp.points[i]));
  return lse_max(dists.data(), n, cp.tau);
}

template <class T>
T opc_sdf(const Vec3<T>& p, const OrientedPointcloudParams& pc) {
  using std::exp;
  T num = T(0);
  T den = T(kWeightFloor);
  for (size_t i = 0; i < pc.points.size(); ++i) {
    const Vec3<T> r = p - vec_cast<T>(pc.points[i]);
    const double th = pc.lengthscales[i];
    const T w = exp(-norm_sq(r) / T(2.0 * th * th));
    num += w * dot(vec_cast<T>(pc.normals[i]), r);
    den += w;
  }
  return num / den;
}

// --- composition tree ----------------------------------------------------------

class SmoothSdf;

struct SdfLeaf {
  std::variant<SuperquadricParams, ConvexPolyhedronParams, OrientedPointcloudParams> primitive;
  Transformd body_from_prim;  // cached from the primitive pose where applicable
};

struct SdfUnion {
  std::vector<SmoothSdf> children;
  double tau = 0.01;  // meters
};

struct SdfSubtraction {
  std::unique_ptr<SmoothSdf> positive;
  std::unique_ptr<SmoothSdf> negative;
  double tau = 0.01;  // meters
};

template <class T>
struct SdfSample {
  T value{};
  Vec3<T> grad{};
};

class SmoothSdf {
 public:
  SmoothSdf() = default;  // unit sphere (default superquadric leaf)

  static SmoothSdf superquadric(SuperquadricParams q);
  static SmoothSdf convex_polyhedron(ConvexPolyhedronParams cp);
  static SmoothSdf oriented_pointcloud(OrientedPointcloudParams pc);
  static SmoothSdf smooth_union(std::vector<SmoothSdf> children, double tau);
  static SmoothSdf subtraction(SmoothSdf positive, SmoothSdf negative, double tau);

  SmoothSdf(const SmoothSdf& o) { *this = o; }
  SmoothSdf& operator=(const SmoothSdf& o);
  SmoothSdf(SmoothSdf&&) = default;
  SmoothSdf& operator=(SmoothSdf&&) = default;

  size_t leaf_count() const;

  template <class T>
  T value(const Vec3<T>& p_body) const {
    return eval_value(p_body);
  }

  // True gradient of the composed field, via a nested 3-wide dual.
  template <class T>
  SdfSample<T> value_and_gradient(const Vec3<T>& p_body) const {
    using D3 = Dual<3, T>;
    const Vec3<D3> seeded{D3::seeded(p_body.x, 0), D3::seeded(p_body.y, 1),
                          D3::seeded(p_body.z, 2)};
    const D3 out = eval_value(seeded);
    return {out.v, Vec3<T>{out.d[0], out.d[1], out.d[2]}};
  }

  // Composed normal field: same softmax weighting as the value, but each
  // superquadric leaf contributes grad f instead of grad phi.
  template <class T>
  SdfSample<T> value_and_normal_source(const Vec3<T>& p_body) const;

 private:
  std::variant<SdfLeaf, SdfUnion, SdfSubtraction> node_;

  template <class T>
  T eval_value(const Vec3<T>& p_body) const;
};

template <class T>
T SmoothSdf::eval_value(const Vec3<T>& p_body) const {
  if (const auto* leaf = std::get_if<SdfLeaf>(&node_)) {
    return std::visit(
        [&](const auto& prim) -> T {
          using P = std::decay_t<decltype(prim)>;
          if constexpr (std::is_same_v<P, SuperquadricParams>) {
            const Transform<T> tf = {mat_cast<T>(leaf->body_from_prim.R),
                                     vec_cast<T>(leaf->body_from_prim.t)};
            return sq_sdf_canonical(tf.apply_inverse(p_body), prim);
          } else if constexpr (std::is_same_v<P, ConvexPolyhedronParams>) {
            return cp_sdf(p_body, prim);
          } else {
            return opc_sdf(p_body, prim);
          }
        },
        leaf->primitive);
  }
  if (const auto* u = std::get_if<SdfUnion>(&node_)) {
    std::vector<T> neg(u->children.size());
    for (size_t i = 0; i < u->children.size(); ++i)
      neg[i] = -u->children[i].eval_value(p_body);
    return -lse_max(neg.data(), neg.size(), u->tau);
  }
  const auto& s = std::get<SdfSubtraction>(node_);
  std::array<T, 2> args{s.positive->eval_value(p_body), -s.negative->eval_value(p_body)};
  return lse_max(args.data(), 2, s.tau);
}

template <class T>
SdfSample<T> SmoothSdf::value_and_normal_source(const Vec3<T>& p_body) const {
  using D3 = Dual<3, T>;
  auto seeded = [&] {
    return Vec3<D3>{D3::seeded(p_body.x, 0), D3::seeded(p_body.y, 1), D3::seeded(p_body.z, 2)};
  };
  if (const auto* leaf = std::get_if<SdfLeaf>(&node_)) {
    return std::visit(
        [&](const auto& prim) -> SdfSample<T> {
          using P = std::decay_t<decltype(prim)>;
          if constexpr (std::is_same_v<P, SuperquadricParams>) {
            const Transform<D3> tf = {mat_cast<D3>(leaf->body_from_prim.R),
                                      vec_cast<D3>(leaf->body_from_prim.t)};
            const Vec3<D3> local = tf.apply_inverse(seeded());
            const D3 f = sq_inside_outside_canonical(local, prim);
            const D3 phi = sq_sdf_canonical(local, prim);
            return {phi.v, Vec3<T>{f.d[0], f.d[1], f.d[2]}};
          } else if constexpr (std::is_same_v<P, ConvexPolyhedronParams>) {
            const D3 phi = cp_sdf(seeded(), prim);
            return {phi.v, Vec3<T>{phi.d[0], phi.d[1], phi.d[2]}};
          } else {
            const D3 phi = opc_sdf(seeded(), prim);
            return {phi.v, Vec3<T>{phi.d[0], phi.d[1], phi.d[2]}};
          }
        },
        leaf->primitive);
  }
  if (const auto* u = std::get_if<SdfUnion>(&node_)) {
    const size_t n = u->children.size();
    std::vector<SdfSample<T>> child(n);
    std::vector<T> values(n);
    for (size_t i = 0; i < n; ++i) {
      child[i] = u->children[i].value_and_normal_source(p_body);
      values[i] = child[i].value;
    }
    // d(union)/d(child_i) is the softmin weight of child i -- the same chain
    // rule factor the true gradient uses, applied to the leaf normal sources.
    const std::vector<T> w = argmin_s(values, u->tau);
    SdfSample<T> out;
    std::vector<T> neg(n);
    for (size_t i = 0; i < n; ++i) neg[i] = -values[i];
    out.value = -lse_max(neg.data(), n, u->tau);
    for (size_t i = 0; i < n; ++i) out.grad += child[i].grad * w[i];
    return out;
  }
  const auto& s = std::get<SdfSubtraction>(node_);
  const SdfSample<T> pos = s.positive->value_and_normal_source(p_body);
  const SdfSample<T> neg = s.negative->value_and_normal_source(p_body);
  const std::array<T, 2> args{pos.value, -neg.value};
  const std::array<T, 2> neg_args{-pos.value, neg.value};
  const std::array<T, 2> w = argmin_s(neg_args, s.tau);
  SdfSample<T> out;
  out.value = lse_max(args.data(), 2, s.tau);
  out.grad = pos.grad * w[0] - neg.grad * w[1];
  return out;
}

// --- posed evaluation -----------------------------------------------------------

// World-frame view of a body-frame SDF: queries are pulled back through the
// inverse pose, gradients rotated forward.
template <class T>
struct PosedSdf {
  const SmoothSdf* body = nullptr;
  Transform<T> world_from_body;

  T value(const Vec3<T>& p_world) const {
    return body->value(world_from_body.apply_inverse(p_world));
  }
  SdfSample<T> value_and_gradient(const Vec3<T>& p_world) const {
    SdfSample<T> s = body->value_and_gradient(world_from_body.apply_inverse(p_world));
    s.grad = world_from_body.R * s.grad;
    return s;
  }
  SdfSample<T> value_and_normal_source(const Vec3<T>& p_world) const {
    SdfSample<T> s = body->value_and_normal_source(world_from_body.apply_inverse(p_world));
    s.grad = world_from_body.R * s.grad;
    return s;
  }
};

// Fixed-count sphere tracing toward the zero level set:
//   p <- p - phi(p) * g / sqrt(tau_dir + |g|^2).
// Unrolled with no convergence branch so the projection stays differentiable;
// a vanishing gradient degrades to a near-zero step instead of NaN.
template <class Field, class T>
Vec3<T> sphere_trace_project(const Field& field, Vec3<T> p, int n_iters,
                             double tau_dir = 1e-9) {
  for (int k = 0; k < n_iters; ++k) {
    const auto s = field.value_and_gradient(p);
    p -= normalize_smooth(s.grad, tau_dir) * s.value;
  }
  return p;
}

}  // namespace cmg
