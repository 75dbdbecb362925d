#include "cmg/sdf.hpp"

namespace cmg {

SmoothSdf SmoothSdf::superquadric(SuperquadricParams q) {
  q.validate();
  SmoothSdf s;
  SdfLeaf leaf;
  leaf.body_from_prim = se3_exp(q.pose);
  leaf.primitive = std::move(q);
  s.node_ = std::move(leaf);
  return s;
}

SmoothSdf SmoothSdf::convex_polyhedron(ConvexPolyhedronParams cp) {
  cp.validate();
  SmoothSdf s;
  SdfLeaf leaf;
  leaf.primitive = std::move(cp);
  s.node_ = std::move(leaf);
  return s;
}

SmoothSdf SmoothSdf::oriented_pointcloud(OrientedPointcloudParams pc) {
  pc.validate();
  SmoothSdf s;
  SdfLeaf leaf;
  leaf.primitive = std::move(pc);
  s.node_ = std::move(leaf);
  return s;
}

SmoothSdf SmoothSdf::smooth_union(std::vector<SmoothSdf> children, double tau) {
  if (children.empty()) throw std::invalid_argument("smooth_union: need at least one child");
  if (!(tau > 0.0)) throw std::invalid_argument("smooth_union: tau > 0");
  SmoothSdf s;
  s.node_ = SdfUnion{std::move(children), tau};
  return s;
}

SmoothSdf SmoothSdf::subtraction(SmoothSdf positive, SmoothSdf negative, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("subtraction: tau > 0");
  SmoothSdf s;
  SdfSubtraction sub;
  sub.positive = std::make_unique<SmoothSdf>(std::move(positive));
  sub.negative = std::make_unique<SmoothSdf>(std::move(negative));
  sub.tau = tau;
  s.node_ = std::move(sub);
  return s;
}

SmoothSdf& SmoothSdf::operator=(const SmoothSdf& o) {
  if (this == &o) return *this;
  if (const auto* leaf = std::get_if<SdfLeaf>(&o.node_)) {
    node_ = *leaf;
  } else if (const auto* u = std::get_if<SdfUnion>(&o.node_)) {
    node_ = SdfUnion{u->children, u->tau};
  } else {
    const auto& sub = std::get<SdfSubtraction>(o.node_);
    SdfSubtraction copy;
    copy.positive = std::make_unique<SmoothSdf>(*sub.positive);
    copy.negative = std::make_unique<SmoothSdf>(*sub.negative);
    copy.tau = sub.tau;
    node_ = std::move(copy);
  }
  return *this;
}

size_t SmoothSdf::leaf_count() const {
  if (std::holds_alternative<SdfLeaf>(node_)) return 1;
  if (const auto* u = std::get_if<SdfUnion>(&node_)) {
    size_t n = 0;
    for (const auto& c : u->children) n += c.leaf_count();
    return n;
  }
  const auto& s = std::get<SdfSubtraction>(node_);
  return s.positive->leaf_count() + s.negative->leaf_count();
}

}  // namespace cmg
