#pragma once

#include <stdexcept>
#include <string>

namespace cmg {

enum class ContactMode {
  kFull,      // V-S both sides + E-E
  kNoEe,      // V-S both sides only
  kOneSided,  // V-S of surface 1 against surface 2's SDF only
};

// Every relaxed operator gets its own named temperature; the defaults are the
// smooth regime (witness sweeps stay continuous). no_smoothing() yields the
// exact active-set solver with hard comparisons.
struct SmoothingConfig {
  // Box-QP / witness solver.
  double lambda = 0.01;    // L2 regularization pulling alphas toward 0.5
  double tau_clip = 0.1;   // softclip of the four box-edge minimizers
  double tau_min = 0.1;    // soft argmin over edge costs (and V-F candidates)
  double tau_comp = 0.1;   // inside-box soft indicators
  bool hard_ops = false;   // exact clamp / argmin / indicator / sign instead

  // Contact indicator temperatures.
  double tau_sign = 0.1;    // soft sign of normal agreement (cosine units)
  double tau_pen = 0.01;    // penetration sigmoid (meters)
  double tau_nn = 0.01;     // nearest-neighbor softmin over distances (meters)
  double tau_clash = 0.1;   // clash sigmoid on the normal dot (cosine units)
  double tau_cont = 0.01;   // containment safeguard sigmoids (meters)

  // Selection and fields.
  double tau_topk_verts = 0.01;  // vertex top-K (meters of penetration score)
  double tau_topk_edges = 0.01;  // edge top-K (meters of penetration score)
  double tau_normal = 1e-9;      // gradient normalization guard
  double tau_union = 0.01;       // default union/subtraction temperature (meters)

  // Pipeline toggles.
  bool sphere_trace = true;         // project E-E witness points onto their surface
  int sphere_trace_iters = 5;
  bool containment_safeguard = false;  // extra [phi_b(e_b*) <= 0] activity factors
  ContactMode mode = ContactMode::kFull;

  // Epsilon inside the unsigned-normal guard |de| / sqrt(|de|^2 + eps); fixed,
  // far below scene scales (m^2).
  static constexpr double kEdgeNormalEps = 1e-12;

  static SmoothingConfig no_smoothing() {
    SmoothingConfig c;
    c.lambda = 1e-6;
    c.hard_ops = true;
    return c;
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw std::invalid_argument(std::string("smoothing: ") + name + " must be > 0");
    };
    positive(lambda, "lambda");
    positive(tau_clip, "tau_clip");
    positive(tau_min, "tau_min");
    positive(tau_comp, "tau_comp");
    positive(tau_sign, "tau_sign");
    positive(tau_pen, "tau_pen");
    positive(tau_nn, "tau_nn");
    positive(tau_clash, "tau_clash");
    positive(tau_cont, "tau_cont");
    positive(tau_topk_verts, "tau_topk_verts");
    positive(tau_topk_edges, "tau_topk_edges");
    positive(tau_normal, "tau_normal");
    positive(tau_union, "tau_union");
    if (sphere_trace_iters < 0) throw std::invalid_argument("smoothing: sphere_trace_iters >= 0");
  }
};

}  // namespace cmg
