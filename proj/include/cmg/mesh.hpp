#pragma once

// Collision mesh ingestion: Wavefront OBJ subset (v / f lines, triangles or
// quads) plus a programmatic box generator. Faces are stored triangulated;
// the undirected edge set is deduplicated. Quad faces contribute only their
// four boundary edges -- the triangulation diagonal is tracked separately so
// the ingest consistency check still accounts for it.

#include <array>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmg/vec3.hpp"

namespace cmg {

struct MeshParseError : std::runtime_error {
  MeshParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  int line_number;
};

struct CollisionMesh {
  std::vector<Vec3d> vertices;
  std::vector<std::array<int, 3>> faces;  // triangles, CCW as authored
  std::vector<std::array<int, 2>> edges;  // unique undirected pairs, lo < hi
  std::vector<std::string> warnings;      // non-manifold notes etc.

  Vec3d aabb_min() const;
  Vec3d aabb_max() const;
  double bounding_diagonal() const;
};

CollisionMesh parse_obj(std::istream& in);
CollisionMesh load_obj(const std::string& path);

// Axis-aligned box centered at the origin. subdivisions = cells per edge.
// With quad_edges the per-cell triangulation diagonals are excluded from the
// edge set (8 vertices / 12 edges for subdivisions = 1), matching the classic
// quad-cube wireframe; otherwise diagonals count as edges.
CollisionMesh make_box_mesh(const Vec3d& half_extents, int subdivisions = 1,
                            bool quad_edges = true);

}  // namespace cmg
