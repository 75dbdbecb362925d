// Command-line harness: scene-driven manifold dumps, the rotating-edge sweep,
// witness/manifold throughput benchmarks, pose-gradient checking, and the
// penalty-force demo simulation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cmg/batch.hpp"
#include "cmg/demosim.hpp"
#include "cmg/manifold.hpp"
#include "cmg/manifold_io.hpp"
#include "cmg/scene.hpp"
#include "cmg/sweep.hpp"

namespace {

struct SmoothingFlags {
  std::map<std::string, double> taus;
  double lambda = -1.0;
  std::string mode;
  int sphere_trace_iters = -1;
  bool no_sphere_trace = false;
  bool containment = false;
  bool hard_ops = false;

  void attach(CLI::App* cmd) {
    auto add_tau = [&](const std::string& name) {
      cmd->add_option("--tau-" + name, taus[name], "override tau_" + name);
    };
    for (const char* name : {"clip", "min", "comp", "sign", "pen", "nn", "clash", "cont",
                             "topk-verts", "topk-edges", "normal", "union"})
      add_tau(name);
    cmd->add_option("--lambda", lambda, "QP regularization weight");
    cmd->add_option("--mode", mode, "contact mode: full | no-ee | one-sided");
    cmd->add_option("--sphere-trace-iters", sphere_trace_iters,
                    "witness projection iterations (0 disables)");
    cmd->add_flag("--no-sphere-trace", no_sphere_trace, "disable witness projection");
    cmd->add_flag("--containment", containment, "enable the containment safeguard factors");
    cmd->add_flag("--hard-ops", hard_ops, "use exact (non-smooth) operators");
  }

  void apply(cmg::SmoothingConfig& cfg) const {
    auto set = [&](const char* key, double& field) {
      auto it = taus.find(key);
      if (it != taus.end()) field = it->second;
    };
    set("clip", cfg.tau_clip);
    set("min", cfg.tau_min);
    set("comp", cfg.tau_comp);
    set("sign", cfg.tau_sign);
    set("pen", cfg.tau_pen);
    set("nn", cfg.tau_nn);
    set("clash", cfg.tau_clash);
    set("cont", cfg.tau_cont);
    set("topk-verts", cfg.tau_topk_verts);
    set("topk-edges", cfg.tau_topk_edges);
    set("normal", cfg.tau_normal);
    set("union", cfg.tau_union);
    if (lambda > 0.0) cfg.lambda = lambda;
    if (!mode.empty()) {
      if (mode == "full") cfg.mode = cmg::ContactMode::kFull;
      else if (mode == "no-ee") cfg.mode = cmg::ContactMode::kNoEe;
      else if (mode == "one-sided") cfg.mode = cmg::ContactMode::kOneSided;
      else throw CLI::ValidationError("--mode must be full, no-ee or one-sided");
    }
    if (sphere_trace_iters >= 0) {
      cfg.sphere_trace_iters = sphere_trace_iters;
      cfg.sphere_trace = sphere_trace_iters > 0;
    }
    if (no_sphere_trace) cfg.sphere_trace = false;
    if (containment) cfg.containment_safeguard = true;
    if (hard_ops) cfg.hard_ops = true;
    cfg.validate();
  }
};

std::vector<size_t> parse_batches(const std::string& csv) {
  std::vector<size_t> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(std::stoull(token));
  if (out.empty()) throw CLI::ValidationError("--batch needs at least one size");
  return out;
}

std::vector<std::string> parse_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(token);
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

void apply_topk_overrides(cmg::Scene& scene, const std::string& verts, const std::string& edges) {
  auto parse_two = [](const std::string& csv, const char* what) {
    const auto parts = parse_list(csv);
    if (parts.size() != 2) throw CLI::ValidationError(std::string(what) + " expects 'K1,K2'");
    return std::pair<int, int>{std::stoi(parts[0]), std::stoi(parts[1])};
  };
  if (!verts.empty()) {
    const auto [a, b] = parse_two(verts, "--topk-verts");
    if (scene.bodies.size() < 2) throw CLI::ValidationError("top-K overrides need two bodies");
    scene.bodies[0].surface.vertex_topk = a;
    scene.bodies[1].surface.vertex_topk = b;
  }
  if (!edges.empty()) {
    const auto [a, b] = parse_two(edges, "--topk-edges");
    if (scene.bodies.size() < 2) throw CLI::ValidationError("top-K overrides need two bodies");
    scene.bodies[0].surface.edge_topk = a;
    scene.bodies[1].surface.edge_topk = b;
  }
}

int cmd_manifold(const std::string& scene_path, const std::string& out_path, bool as_json,
                 const SmoothingFlags& flags, const std::string& topk_verts,
                 const std::string& topk_edges) {
  cmg::Scene scene = cmg::load_scene(scene_path);
  if (scene.bodies.size() != 2) {
    std::cerr << "manifold: scene must contain exactly two bodies\n";
    return 1;
  }
  flags.apply(scene.smoothing);
  apply_topk_overrides(scene, topk_verts, topk_edges);
  for (const auto& body : scene.bodies)
    for (const auto& w : body.surface.build_warnings)
      std::cerr << "warning [" << body.name << "]: " << w << '\n';

  const auto manifold =
      cmg::generate_manifold(scene.bodies[0].surface, scene.bodies[1].surface,
                             scene.bodies[0].pose, scene.bodies[1].pose, scene.smoothing);
  auto os = open_out(out_path);
  if (as_json)
    os << cmg::manifold_to_json(manifold) << '\n';
  else
    cmg::write_manifold_csv(os, manifold);
  std::cout << "wrote " << manifold.contacts.size() << " contacts to " << out_path << '\n';
  return 0;
}

int cmd_sweep(const std::string& out_path, int samples) {
  const auto ns = cmg::rotating_edge_sweep(cmg::SweepVariant::kNoSmoothing, samples);
  const auto l2 = cmg::rotating_edge_sweep(cmg::SweepVariant::kRegularizedOnly, samples);
  const auto smooth = cmg::rotating_edge_sweep(cmg::SweepVariant::kSmooth, samples);
  auto os = open_out(out_path);
  cmg::write_sweep_csv(os, ns, l2, smooth);
  double worst_ns = 0.0, worst_smooth = 0.0;
  for (size_t i = 1; i < ns.size(); ++i) {
    worst_ns = std::max(worst_ns, cmg::norm(ns[i].p1 - ns[i - 1].p1));
    worst_smooth = std::max(worst_smooth, cmg::norm(smooth[i].p1 - smooth[i - 1].p1));
  }
  std::cout << "max adjacent-sample jump: no-smoothing " << worst_ns << ", smooth "
            << worst_smooth << '\n';
  return 0;
}

int cmd_bench(const std::string& kind, const std::string& batches, const std::string& variants,
              const std::string& scene_path, const std::string& out_path, uint64_t seed,
              int repetitions, int workers) {
  const auto batch_sizes = parse_batches(batches);
  const auto variant_list = parse_list(variants);
  std::vector<cmg::BenchRecord> records;
  if (kind == "manifold") {
    if (scene_path.empty()) {
      std::cerr << "bench: kind manifold needs --scene\n";
      return 1;
    }
    const cmg::Scene scene = cmg::load_scene(scene_path);
    records = cmg::bench_manifold(scene, batch_sizes, variant_list, seed, repetitions, workers);
  } else {
    records = cmg::bench_witness(kind, batch_sizes, variant_list, seed, repetitions, workers);
  }
  auto os = open_out(out_path);
  cmg::write_bench_csv(os, records);
  for (const auto& r : records)
    std::cout << r.kind << '/' << r.variant << " batch " << r.batch << ": median "
              << r.timing.median_s << " s, " << r.throughput_qps << " q/s\n";
  return 0;
}

int cmd_gradcheck(const std::string& scene_path, double tolerance, const SmoothingFlags& flags) {
  cmg::Scene scene = cmg::load_scene(scene_path);
  if (scene.bodies.size() != 2) {
    std::cerr << "gradcheck: scene must contain exactly two bodies\n";
    return 1;
  }
  flags.apply(scene.smoothing);
  const auto& s1 = scene.bodies[0].surface;
  const auto& s2 = scene.bodies[1].surface;
  const cmg::Pose6d p1 = scene.bodies[0].pose;
  const cmg::Pose6d p2 = scene.bodies[1].pose;

  const auto seeded = cmg::seed_pose_tangents(p1, p2);
  const auto manifold =
      cmg::generate_manifold(s1, s2, seeded.first, seeded.second, scene.smoothing);
  const cmg::Dual12 mean = cmg::mean_contact_distance(manifold);

  std::array<double, 12> fd{};
  const double h = 1e-6;
  for (int k = 0; k < 12; ++k) {
    cmg::Pose6d a_plus = p1, a_minus = p1, b_plus = p2, b_minus = p2;
    if (k < 6) {
      a_plus[k] += h;
      a_minus[k] -= h;
    } else {
      b_plus[k - 6] += h;
      b_minus[k - 6] -= h;
    }
    const double f_plus = cmg::mean_contact_distance(
        cmg::generate_manifold(s1, s2, a_plus, b_plus, scene.smoothing));
    const double f_minus = cmg::mean_contact_distance(
        cmg::generate_manifold(s1, s2, a_minus, b_minus, scene.smoothing));
    fd[k] = (f_plus - f_minus) / (2 * h);
  }

  double max_rel = 0.0;
  std::cout << "dir  forward        finite-diff\n";
  for (int k = 0; k < 12; ++k) {
    const double fwd = mean.d[k];
    const double rel = std::abs(fwd - fd[k]) / std::max(1e-7, std::abs(fd[k]));
    max_rel = std::max(max_rel, rel);
    std::printf("%3d  %+.8e %+.8e\n", k, fwd, fd[k]);
  }
  std::cout << "max relative error: " << max_rel << " (tolerance " << tolerance << ")\n";
  return max_rel < tolerance ? 0 : 1;
}

int cmd_sim(const std::string& scene_path, double duration, double dt,
            const std::string& out_path, const SmoothingFlags& flags) {
  if (!(dt > 0.0 && dt <= 0.01)) {
    std::cerr << "sim: dt must lie in (0, 0.01]\n";
    return 1;
  }
  cmg::Scene scene = cmg::load_scene(scene_path);
  flags.apply(scene.smoothing);
  auto os = open_out(out_path);
  if (!cmg::run_demosim_csv(scene, duration, dt, os)) {
    std::cerr << "sim: state became non-finite (instability)\n";
    return 1;
  }
  std::cout << "simulated " << duration << " s -> " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smooth differentiable contact manifolds"};
  app.require_subcommand(1);

  std::string scene_path, out_path, kind = "ee", batches = "1000";
  std::string variants = "ours,ours_ns", topk_verts, topk_edges;
  bool as_json = false;
  int samples = 10000, repetitions = 10, workers = 1;
  uint64_t seed = 0;
  double tolerance = 1e-3, duration = 2.0, dt = 1e-3;
  SmoothingFlags flags;

  auto* manifold = app.add_subcommand("manifold", "generate and dump a contact manifold");
  manifold->add_option("--scene", scene_path, "scene JSON")->required();
  manifold->add_option("--out", out_path, "output file")->required();
  manifold->add_flag("--json", as_json, "emit JSON instead of CSV");
  manifold->add_option("--topk-verts", topk_verts, "override vertex budgets 'N1,N2'");
  manifold->add_option("--topk-edges", topk_edges, "override edge budgets 'M1,M2'");
  flags.attach(manifold);

  auto* sweep = app.add_subcommand("sweep-edges", "rotating-edge witness sweep");
  sweep->add_option("--out", out_path, "output CSV")->required();
  sweep->add_option("--samples", samples, "number of theta samples");

  auto* bench = app.add_subcommand("bench", "witness / manifold throughput benchmark");
  bench->add_option("--kind", kind, "ee | vf | manifold");
  bench->add_option("--batch", batches, "comma-separated batch sizes");
  bench->add_option("--variants", variants, "comma-separated variant list");
  bench->add_option("--scene", scene_path, "scene JSON (manifold kind)");
  bench->add_option("--out", out_path, "output CSV")->required();
  bench->add_option("--seed", seed, "problem-generation seed");
  bench->add_option("--repetitions", repetitions, "timed repetitions (after 3 warmups)");
  bench->add_option("--workers", workers, "worker thread count");

  auto* gradcheck = app.add_subcommand("gradcheck", "forward-mode vs finite-difference Jacobian");
  gradcheck->add_option("--scene", scene_path, "scene JSON")->required();
  gradcheck->add_option("--tol", tolerance, "max relative error");
  flags.attach(gradcheck);

  auto* sim = app.add_subcommand("sim", "penalty-force demo simulation");
  sim->add_option("--scene", scene_path, "scene JSON")->required();
  sim->add_option("--duration", duration, "simulated seconds");
  sim->add_option("--dt", dt, "timestep (<= 0.01 s)");
  sim->add_option("--out", out_path, "trajectory CSV")->required();
  flags.attach(sim);

  CLI11_PARSE(app, argc, argv);

  try {
    if (manifold->parsed())
      return cmd_manifold(scene_path, out_path, as_json, flags, topk_verts, topk_edges);
    if (sweep->parsed()) return cmd_sweep(out_path, samples);
    if (bench->parsed())
      return cmd_bench(kind, batches, variants, scene_path, out_path, seed, repetitions, workers);
    if (gradcheck->parsed()) return cmd_gradcheck(scene_path, tolerance, flags);
    if (sim->parsed()) return cmd_sim(scene_path, duration, dt, out_path, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
