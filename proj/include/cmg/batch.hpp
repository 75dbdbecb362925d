#pragma once

// Batched witness-point and manifold evaluation for throughput runs: flat
// structure-of-arrays problem sets with seeded generation, chunked worker
// threads (results independent of worker count), and median/std timing over
// repetitions after warmup.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmg/config.hpp"
#include "cmg/scene.hpp"

namespace cmg {

// 12 doubles per edge-edge pair: e1a, e1b, e2a, e2b.
struct EeProblemSet {
  size_t count = 0;
  std::vector<double> data;
};

// 12 doubles per vertex-triangle pair: v, t0, t1, t2.
struct VfProblemSet {
  size_t count = 0;
  std::vector<double> data;
};

// Uniform samples over the unit cube, deterministic per seed.
EeProblemSet make_random_ee_pairs(size_t n, uint64_t seed);
VfProblemSet make_random_vf_pairs(size_t n, uint64_t seed);

// Solves every pair, writing witness points into out (6 doubles per pair for
// E-E, 3 for V-F); returns a checksum over the results.
double run_ee_batch(const EeProblemSet& problems, const SmoothingConfig& cfg, int workers,
                    std::vector<double>* out = nullptr);
double run_vf_batch(const VfProblemSet& problems, const SmoothingConfig& cfg, int workers,
                    std::vector<double>* out = nullptr);

struct TimingStats {
  double median_s = 0.0;
  double std_s = 0.0;
};

// Runs fn `warmups` times untimed, then `repetitions` timed runs.
TimingStats time_run(const std::function<void()>& fn, int repetitions, int warmups);

struct BenchRecord {
  std::string kind;     // ee | vf | manifold
  std::string variant;  // ours | ours_ns | ours_ne | ours_ne_s
  size_t batch = 0;
  int repetitions = 0;
  TimingStats timing;
  double throughput_qps = 0.0;
};

inline constexpr const char* kBenchCsvVersion = "cmg-bench-csv v1";
void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records);

SmoothingConfig config_for_variant(const std::string& variant, SmoothingConfig base);

// Witness benchmark (kind "ee" or "vf") across batch sizes and variants.
std::vector<BenchRecord> bench_witness(const std::string& kind,
                                       const std::vector<size_t>& batch_sizes,
                                       const std::vector<std::string>& variants, uint64_t seed,
                                       int repetitions, int workers);

// Manifold benchmark over a two-body scene: batch = number of randomized pose
// pairs evaluated per repetition.
std::vector<BenchRecord> bench_manifold(const Scene& scene,
                                        const std::vector<size_t>& batch_sizes,
                                        const std::vector<std::string>& variants, uint64_t seed,
                                        int repetitions, int workers);

}  // namespace cmg
