#pragma once

// JSON scene description: a list of bodies (mesh + SDF + pose + budgets +
// mass properties) and a smoothing block. See the README for the schema.
// All lengths are meters.

#include <string>
#include <vector>

#include "cmg/config.hpp"
#include "cmg/surface.hpp"

namespace cmg {

struct SceneBody {
  std::string name;
  SurfaceModel surface;
  Pose6d pose{0, 0, 0, 0, 0, 0};
  double mass = 1.0;
  Vec3d inertia_diag{0, 0, 0};  // zero -> derived from the mesh bounding box
  bool is_static = false;
};

struct Scene {
  std::vector<SceneBody> bodies;
  SmoothingConfig smoothing;
};

struct SceneError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses a scene document; mesh paths resolve relative to base_dir.
Scene parse_scene(const std::string& json_text, const std::string& base_dir);
Scene load_scene(const std::string& path);

}  // namespace cmg
