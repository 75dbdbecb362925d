#pragma once

// One surface = paired representations: a collision mesh (vertices + unique
// edges) and a smooth analytical SDF in the same body frame, plus the top-K
// budgets used by the manifold generator.

#include <string>
#include <vector>

#include "cmg/mesh.hpp"
#include "cmg/pose.hpp"
#include "cmg/sdf.hpp"

namespace cmg {

struct SurfaceModel {
  CollisionMesh mesh;
  SmoothSdf sdf;
  int vertex_topk = 0;  // 0 -> all vertices (no selection)
  int edge_topk = 0;    // 0 -> number of SDF leaves

  std::vector<std::string> build_warnings;

  int effective_vertex_topk() const {
    const int v = static_cast<int>(mesh.vertices.size());
    return vertex_topk <= 0 ? v : std::min(vertex_topk, v);
  }
  int effective_edge_topk() const {
    const int e = static_cast<int>(mesh.edges.size());
    return edge_topk <= 0 ? std::min(static_cast<int>(sdf.leaf_count()), e)
                          : std::min(edge_topk, e);
  }
};

// Validates budgets and checks mesh/SDF agreement: mesh vertices are expected
// to sit near the SDF zero level set. A mismatch beyond
// tolerance_fraction * bounding diagonal is recorded as a warning, not an
// error.
SurfaceModel build_surface(CollisionMesh mesh, SmoothSdf sdf, int vertex_topk = 0,
                           int edge_topk = 0, double tolerance_fraction = 1e-2);

// World-frame view of a surface under a pose, generic over the scalar type so
// pose tangents propagate into vertices, edges and SDF queries.
template <class T>
struct PosedSurface {
  const SurfaceModel* model = nullptr;
  Transform<T> world_from_body;
  std::vector<Vec3<T>> vertices;
  PosedSdf<T> sdf;
};

template <class T>
PosedSurface<T> pose_surface(const SurfaceModel& model, const Pose6<T>& pose) {
  PosedSurface<T> out;
  out.model = &model;
  out.world_from_body = se3_exp(pose);
  out.vertices.reserve(model.mesh.vertices.size());
  for (const auto& v : model.mesh.vertices)
    out.vertices.push_back(out.world_from_body.apply(vec_cast<T>(v)));
  out.sdf.body = &model.sdf;
  out.sdf.world_from_body = out.world_from_body;
  return out;
}

}  // namespace cmg
