#include "cmg/scene.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cmg {

namespace {

using nlohmann::json;

Vec3d parse_vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw SceneError(std::string(what) + ": expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Pose6d parse_pose(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 6)
    throw SceneError(std::string(what) + ": expected a 6-vector [tx, ty, tz, rx, ry, rz]");
  Pose6d p;
  for (int i = 0; i < 6; ++i) p[i] = j[i].get<double>();
  return p;
}

SmoothSdf parse_sdf_node(const json& j, const SmoothingConfig& defaults);

SmoothSdf parse_sdf_primitive(const json& j, const SmoothingConfig& defaults) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "superquadric") {
    SuperquadricParams q;
    q.eps1 = j.at("eps1").get<double>();
    q.eps2 = j.at("eps2").get<double>();
    q.axes = parse_vec3(j.at("axes"), "superquadric axes");
    if (j.contains("pose")) q.pose = parse_pose(j["pose"], "superquadric pose");
    return SmoothSdf::superquadric(q);
  }
  if (type == "convex_polyhedron") {
    ConvexPolyhedronParams cp;
    cp.tau = j.value("tau", 1e-3);
    for (const auto& plane : j.at("planes")) {
      cp.normals.push_back(parse_vec3(plane.at("normal"), "plane normal"));
      cp.points.push_back(parse_vec3(plane.at("point"), "plane point"));
    }
    return SmoothSdf::convex_polyhedron(cp);
  }
  if (type == "box_planes") {
    // Convenience: the six half-space planes of an axis-aligned box.
    const Vec3d h = parse_vec3(j.at("half_extents"), "box_planes half_extents");
    ConvexPolyhedronParams cp;
    cp.tau = j.value("tau", 1e-3);
    const Vec3d axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const double ext[3] = {h.x, h.y, h.z};
    for (int a = 0; a < 3; ++a)
      for (double s : {1.0, -1.0}) {
        cp.normals.push_back(axes[a] * s);
        cp.points.push_back(axes[a] * (s * ext[a]));
      }
    return SmoothSdf::convex_polyhedron(cp);
  }
  if (type == "oriented_pointcloud") {
    OrientedPointcloudParams pc;
    for (const auto& p : j.at("points")) pc.points.push_back(parse_vec3(p, "pointcloud point"));
    for (const auto& n : j.at("normals")) pc.normals.push_back(parse_vec3(n, "pointcloud normal"));
    for (const auto& t : j.at("lengthscales")) pc.lengthscales.push_back(t.get<double>());
    return SmoothSdf::oriented_pointcloud(pc);
  }
  if (type == "union") {
    std::vector<SmoothSdf> children;
    for (const auto& c : j.at("children")) children.push_back(parse_sdf_node(c, defaults));
    return SmoothSdf::smooth_union(std::move(children), j.value("tau", defaults.tau_union));
  }
  if (type == "subtraction") {
    return SmoothSdf::subtraction(parse_sdf_node(j.at("positive"), defaults),
                                  parse_sdf_node(j.at("negative"), defaults),
                                  j.value("tau", defaults.tau_union));
  }
  throw SceneError("unknown sdf node type: " + type);
}

SmoothSdf parse_sdf_node(const json& j, const SmoothingConfig& defaults) {
  if (j.is_array()) {
    // Array shorthand: implicit union (single-child arrays collapse).
    std::vector<SmoothSdf> children;
    for (const auto& c : j) children.push_back(parse_sdf_node(c, defaults));
    if (children.size() == 1) return std::move(children.front());
    return SmoothSdf::smooth_union(std::move(children), defaults.tau_union);
  }
  return parse_sdf_primitive(j, defaults);
}

CollisionMesh parse_mesh(const json& j, const std::string& base_dir) {
  if (j.contains("obj")) {
    std::filesystem::path p = j["obj"].get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    return load_obj(p.string());
  }
  if (j.contains("box")) {
    const auto& b = j["box"];
    return make_box_mesh(parse_vec3(b.at("half_extents"), "box half_extents"),
                         b.value("subdivisions", 1), b.value("quad_edges", true));
  }
  throw SceneError("mesh: expected an 'obj' path or a 'box' generator");
}

ContactMode parse_mode(const std::string& s) {
  if (s == "full") return ContactMode::kFull;
  if (s == "no-ee") return ContactMode::kNoEe;
  if (s == "one-sided") return ContactMode::kOneSided;
  throw SceneError("mode must be one of: full, no-ee, one-sided");
}

SmoothingConfig parse_smoothing(const json& j) {
  SmoothingConfig c;
  if (j.is_null()) return c;
  c.lambda = j.value("lambda", c.lambda);
  c.tau_clip = j.value("tau_clip", c.tau_clip);
  c.tau_min = j.value("tau_min", c.tau_min);
  c.tau_comp = j.value("tau_comp", c.tau_comp);
  c.tau_sign = j.value("tau_sign", c.tau_sign);
  c.tau_pen = j.value("tau_pen", c.tau_pen);
  c.tau_nn = j.value("tau_nn", c.tau_nn);
  c.tau_clash = j.value("tau_clash", c.tau_clash);
  c.tau_cont = j.value("tau_cont", c.tau_cont);
  c.tau_topk_verts = j.value("tau_topk_verts", c.tau_topk_verts);
  c.tau_topk_edges = j.value("tau_topk_edges", c.tau_topk_edges);
  c.tau_normal = j.value("tau_normal", c.tau_normal);
  c.tau_union = j.value("tau_union", c.tau_union);
  c.hard_ops = j.value("hard_ops", c.hard_ops);
  c.sphere_trace = j.value("sphere_trace", c.sphere_trace);
  c.sphere_trace_iters = j.value("sphere_trace_iters", c.sphere_trace_iters);
  c.containment_safeguard = j.value("containment_safeguard", c.containment_safeguard);
  if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
  c.validate();
  return c;
}

}  // namespace

Scene parse_scene(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SceneError(std::string("scene JSON parse error: ") + e.what());
  }
  Scene scene;
  try {
    scene.smoothing = parse_smoothing(doc.contains("smoothing") ? doc["smoothing"] : json());
    if (!doc.contains("bodies") || !doc["bodies"].is_array() || doc["bodies"].empty())
      throw SceneError("scene: needs a non-empty 'bodies' array");
    for (const auto& jb : doc["bodies"]) {
      SceneBody body;
      body.name = jb.value("name", "body" + std::to_string(scene.bodies.size()));
      CollisionMesh mesh = parse_mesh(jb.at("mesh"), base_dir);
      SmoothSdf sdf = parse_sdf_node(jb.at("sdf"), scene.smoothing);
      body.surface = build_surface(std::move(mesh), std::move(sdf), jb.value("vertex_topk", 0),
                                   jb.value("edge_topk", 0));
      body.pose = parse_pose(jb.at("pose"), "body pose");
      body.mass = jb.value("mass", 1.0);
      if (!(body.mass > 0.0)) throw SceneError("body mass must be positive");
      if (jb.contains("inertia")) body.inertia_diag = parse_vec3(jb["inertia"], "inertia");
      body.is_static = jb.value("static", false);
      scene.bodies.push_back(std::move(body));
    }
  } catch (const json::exception& e) {
    throw SceneError(std::string("scene schema error: ") + e.what());
  }
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("cannot open scene file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace cmg
