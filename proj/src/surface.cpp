#include "cmg/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmg {

SurfaceModel build_surface(CollisionMesh mesh, SmoothSdf sdf, int vertex_topk, int edge_topk,
                           double tolerance_fraction) {
  if (mesh.vertices.empty() || mesh.edges.empty())
    throw std::invalid_argument("surface: mesh needs vertices and edges");
  const int v = static_cast<int>(mesh.vertices.size());
  const int e = static_cast<int>(mesh.edges.size());
  if (vertex_topk < 0 || vertex_topk > v)
    throw std::invalid_argument("surface: vertex_topk must lie in [1, V] (or 0 for all)");
  if (edge_topk < 0 || edge_topk > e)
    throw std::invalid_argument("surface: edge_topk must lie in [1, E] (or 0 for default)");
  for (const auto& edge : mesh.edges)
    if (edge[0] < 0 || edge[1] < 0 || edge[0] >= v || edge[1] >= v)
      throw std::invalid_argument("surface: edge index out of range");
  for (const auto& face : mesh.faces)
    for (int idx : face)
      if (idx < 0 || idx >= v) throw std::invalid_argument("surface: face index out of range");

  SurfaceModel out;
  out.mesh = std::move(mesh);
  out.sdf = std::move(sdf);
  out.vertex_topk = vertex_topk;
  out.edge_topk = edge_topk;
  out.build_warnings = out.mesh.warnings;

  double worst = 0.0;
  for (const auto& p : out.mesh.vertices)
    worst = std::max(worst, std::abs(out.sdf.value(p)));
  const double tolerance = tolerance_fraction * out.mesh.bounding_diagonal();
  if (worst > tolerance) {
    out.build_warnings.push_back(
        "mesh/SDF discrepancy: max |phi(vertex)| = " + std::to_string(worst) +
        " exceeds tolerance " + std::to_string(tolerance) +
        "; witness projection and activity indicators may drift");
  }
  return out;
}

}  // namespace cmg
