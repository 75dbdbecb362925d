#include "cmg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cmg {

Vec3d CollisionMesh::aabb_min() const {
  Vec3d lo{1e300, 1e300, 1e300};
  for (const auto& v : vertices) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    lo.z = std::min(lo.z, v.z);
  }
  return lo;
}

Vec3d CollisionMesh::aabb_max() const {
  Vec3d hi{-1e300, -1e300, -1e300};
  for (const auto& v : vertices) {
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
    hi.z = std::max(hi.z, v.z);
  }
  return hi;
}

double CollisionMesh::bounding_diagonal() const {
  if (vertices.empty()) return 0.0;
  return norm(aabb_max() - aabb_min());
}

namespace {

std::array<int, 2> sorted_edge(int a, int b) {
  return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

// "3", "3/1", "3/1/2", "3//2" -> vertex index 3.
int parse_face_index(const std::string& token, int n_vertices, int line) {
  size_t slash = token.find('/');
  const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
  int idx = 0;
  try {
    idx = std::stoi(head);
  } catch (const std::exception&) {
    throw MeshParseError("bad face index '" + token + "'", line);
  }
  if (idx < 0) idx = n_vertices + 1 + idx;  // OBJ negative indexing
  if (idx < 1 || idx > n_vertices) throw MeshParseError("face index out of range", line);
  return idx - 1;
}

}  // namespace

CollisionMesh parse_obj(std::istream& in) {
  CollisionMesh mesh;
  std::set<std::array<int, 2>> edge_set;
  std::set<std::array<int, 2>> excluded_diagonals;
  std::map<std::array<int, 2>, int> edge_face_count;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3d p;
      if (!(ss >> p.x >> p.y >> p.z)) throw MeshParseError("bad vertex line", line_no);
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string token;
      while (ss >> token)
        idx.push_back(parse_face_index(token, static_cast<int>(mesh.vertices.size()), line_no));
      if (idx.size() == 3) {
        mesh.faces.push_back({idx[0], idx[1], idx[2]});
        for (int k = 0; k < 3; ++k) edge_set.insert(sorted_edge(idx[k], idx[(k + 1) % 3]));
      } else if (idx.size() == 4) {
        mesh.faces.push_back({idx[0], idx[1], idx[2]});
        mesh.faces.push_back({idx[0], idx[2], idx[3]});
        for (int k = 0; k < 4; ++k) edge_set.insert(sorted_edge(idx[k], idx[(k + 1) % 4]));
        excluded_diagonals.insert(sorted_edge(idx[0], idx[2]));
      } else {
        throw MeshParseError("only triangle and quad faces are supported", line_no);
      }
    }
    // Ignore vn/vt/usemtl/etc.
  }
  if (mesh.vertices.empty() || mesh.faces.empty())
    throw MeshParseError("no geometry found", line_no);

  // A diagonal that also appears as a boundary edge of another face stays.
  for (const auto& diag : excluded_diagonals) edge_set.erase(diag);
  for (const auto& f : mesh.faces)
    for (int k = 0; k < 3; ++k) {
      auto e = sorted_edge(f[k], f[(k + 1) % 3]);
      if (edge_set.count(e)) edge_face_count[e]++;
    }
  mesh.edges.assign(edge_set.begin(), edge_set.end());

  for (const auto& [e, count] : edge_face_count)
    if (count > 2) {
      mesh.warnings.push_back("non-manifold edge (" + std::to_string(e[0]) + "," +
                              std::to_string(e[1]) + ") shared by " + std::to_string(count) +
                              " faces");
    }
  return mesh;
}

CollisionMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return parse_obj(in);
}

CollisionMesh make_box_mesh(const Vec3d& half, int subdivisions, bool quad_edges) {
  if (subdivisions < 1) throw std::invalid_argument("make_box_mesh: subdivisions >= 1");
  const int n = subdivisions;
  CollisionMesh mesh;
  std::map<std::array<long long, 3>, int> welded;

  auto vertex_id = [&](double u, double v, double w) {
    const Vec3d p{u * half.x, v * half.y, w * half.z};
    // Weld on a fine integer lattice of the unit-cube parameterization.
    const std::array<long long, 3> key{std::llround(u * 1e9), std::llround(v * 1e9),
                                       std::llround(w * 1e9)};
    auto it = welded.find(key);
    if (it != welded.end()) return it->second;
    const int id = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(p);
    welded.emplace(key, id);
    return id;
  };

  std::set<std::array<int, 2>> edge_set;
  auto add_face_grid = [&](const Vec3d& origin, const Vec3d& du, const Vec3d& dv) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double u0 = -1.0 + 2.0 * i / n, u1 = -1.0 + 2.0 * (i + 1) / n;
        const double v0 = -1.0 + 2.0 * j / n, v1 = -1.0 + 2.0 * (j + 1) / n;
        auto corner = [&](double u, double v) {
          const Vec3d q = origin + du * u + dv * v;
          return vertex_id(q.x, q.y, q.z);
        };
        const int a = corner(u0, v0), b = corner(u1, v0), c = corner(u1, v1),
                  d = corner(u0, v1);
        mesh.faces.push_back({a, b, c});
        mesh.faces.push_back({a, c, d});
        edge_set.insert(sorted_edge(a, b));
        edge_set.insert(sorted_edge(b, c));
        edge_set.insert(sorted_edge(c, d));
        edge_set.insert(sorted_edge(d, a));
        if (!quad_edges) edge_set.insert(sorted_edge(a, c));
      }
  };

  add_face_grid({0, 0, 1}, {1, 0, 0}, {0, 1, 0});    // +z
  add_face_grid({0, 0, -1}, {1, 0, 0}, {0, 1, 0});   // -z
  add_face_grid({1, 0, 0}, {0, 1, 0}, {0, 0, 1});    // +x
  add_face_grid({-1, 0, 0}, {0, 1, 0}, {0, 0, 1});   // -x
  add_face_grid({0, 1, 0}, {1, 0, 0}, {0, 0, 1});    // +y
  add_face_grid({0, -1, 0}, {1, 0, 0}, {0, 0, 1});   // -y

  mesh.edges.assign(edge_set.begin(), edge_set.end());
  return mesh;
}

}  // namespace cmg
