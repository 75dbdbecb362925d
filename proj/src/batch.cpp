#include "cmg/batch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "cmg/manifold.hpp"
#include "cmg/witness.hpp"

namespace cmg {

namespace {

std::vector<double> uniform_cube_samples(size_t n_doubles, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n_doubles);
  for (auto& x : out) x = dist(rng);
  return out;
}

// Chunked parallel for; each index writes only its own output slots.
void parallel_for(size_t n, int workers, const std::function<void(size_t, size_t)>& body) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 1024) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const size_t lo = std::min(n, w * chunk);
    const size_t hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(body, lo, hi);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

EeProblemSet make_random_ee_pairs(size_t n, uint64_t seed) {
  return {n, uniform_cube_samples(12 * n, seed)};
}

VfProblemSet make_random_vf_pairs(size_t n, uint64_t seed) {
  return {n, uniform_cube_samples(12 * n, seed)};
}

double run_ee_batch(const EeProblemSet& problems, const SmoothingConfig& cfg, int workers,
                    std::vector<double>* out) {
  std::vector<double> local;
  std::vector<double>& result = out ? *out : local;
  result.assign(6 * problems.count, 0.0);
  const double* d = problems.data.data();
  parallel_for(problems.count, workers, [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      const double* p = d + 12 * i;
      const auto w = ee_witness<double>({p[0], p[1], p[2]}, {p[3], p[4], p[5]},
                                        {p[6], p[7], p[8]}, {p[9], p[10], p[11]}, cfg);
      double* o = result.data() + 6 * i;
      o[0] = w.p1.x;
      o[1] = w.p1.y;
      o[2] = w.p1.z;
      o[3] = w.p2.x;
      o[4] = w.p2.y;
      o[5] = w.p2.z;
    }
  });
  double checksum = 0.0;
  for (double v : result) checksum += v;
  return checksum;
}

double run_vf_batch(const VfProblemSet& problems, const SmoothingConfig& cfg, int workers,
                    std::vector<double>* out) {
  std::vector<double> local;
  std::vector<double>& result = out ? *out : local;
  result.assign(3 * problems.count, 0.0);
  const double* d = problems.data.data();
  parallel_for(problems.count, workers, [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      const double* p = d + 12 * i;
      const Vec3d cp = vf_witness<double>({p[0], p[1], p[2]}, {p[3], p[4], p[5]},
                                          {p[6], p[7], p[8]}, {p[9], p[10], p[11]}, cfg);
      double* o = result.data() + 3 * i;
      o[0] = cp.x;
      o[1] = cp.y;
      o[2] = cp.z;
    }
  });
  double checksum = 0.0;
  for (double v : result) checksum += v;
  return checksum;
}

TimingStats time_run(const std::function<void()>& fn, int repetitions, int warmups) {
  if (repetitions < 1) throw std::invalid_argument("time_run: repetitions >= 1");
  for (int i = 0; i < warmups; ++i) fn();
  std::vector<double> times(repetitions);
  for (int i = 0; i < repetitions; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    times[i] = std::chrono::duration<double>(t1 - t0).count();
  }
  std::sort(times.begin(), times.end());
  TimingStats stats;
  stats.median_s = times[times.size() / 2];
  double mean = 0.0;
  for (double t : times) mean += t;
  mean /= times.size();
  double var = 0.0;
  for (double t : times) var += (t - mean) * (t - mean);
  stats.std_s = std::sqrt(var / times.size());
  return stats;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << "# " << kBenchCsvVersion << "\n";
  os << "kind,variant,batch,repetitions,median_s,std_s,throughput_qps\n";
  for (const auto& r : records) {
    os << r.kind << ',' << r.variant << ',' << r.batch << ',' << r.repetitions << ','
       << r.timing.median_s << ',' << r.timing.std_s << ',' << r.throughput_qps << '\n';
  }
}

SmoothingConfig config_for_variant(const std::string& variant, SmoothingConfig base) {
  if (variant == "ours") {
    base.hard_ops = false;
    base.mode = ContactMode::kFull;
  } else if (variant == "ours_ns") {
    base.hard_ops = true;
    base.lambda = 1e-6;
    base.mode = ContactMode::kFull;
  } else if (variant == "ours_ne") {
    base.hard_ops = false;
    base.mode = ContactMode::kNoEe;
  } else if (variant == "ours_ne_s") {
    base.hard_ops = false;
    base.mode = ContactMode::kOneSided;
  } else {
    throw std::invalid_argument("unknown variant: " + variant +
                                " (expected ours|ours_ns|ours_ne|ours_ne_s)");
  }
  return base;
}

std::vector<BenchRecord> bench_witness(const std::string& kind,
                                       const std::vector<size_t>& batch_sizes,
                                       const std::vector<std::string>& variants, uint64_t seed,
                                       int repetitions, int workers) {
  if (kind != "ee" && kind != "vf") throw std::invalid_argument("bench kind must be ee or vf");
  std::vector<BenchRecord> records;
  for (size_t batch : batch_sizes) {
    const EeProblemSet ee = kind == "ee" ? make_random_ee_pairs(batch, seed) : EeProblemSet{};
    const VfProblemSet vf = kind == "vf" ? make_random_vf_pairs(batch, seed) : VfProblemSet{};
    for (const auto& variant : variants) {
      const SmoothingConfig cfg = config_for_variant(variant, SmoothingConfig{});
      volatile double sink = 0.0;
      const TimingStats timing = time_run(
          [&] {
            sink = kind == "ee" ? run_ee_batch(ee, cfg, workers)
                                : run_vf_batch(vf, cfg, workers);
          },
          repetitions, 3);
      (void)sink;
      BenchRecord rec;
      rec.kind = kind;
      rec.variant = variant;
      rec.batch = batch;
      rec.repetitions = repetitions;
      rec.timing = timing;
      rec.throughput_qps = batch / std::max(timing.median_s, 1e-12);
      records.push_back(rec);
    }
  }
  return records;
}

std::vector<BenchRecord> bench_manifold(const Scene& scene,
                                        const std::vector<size_t>& batch_sizes,
                                        const std::vector<std::string>& variants, uint64_t seed,
                                        int repetitions, int workers) {
  if (scene.bodies.size() < 2)
    throw std::invalid_argument("manifold benchmark needs a two-body scene");
  const SurfaceModel& s1 = scene.bodies[0].surface;
  const SurfaceModel& s2 = scene.bodies[1].surface;

  std::vector<BenchRecord> records;
  for (size_t batch : batch_sizes) {
    // Randomized relative poses around the authored configuration.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::vector<Pose6d> poses1(batch, scene.bodies[0].pose), poses2(batch);
    for (size_t i = 0; i < batch; ++i) {
      Pose6d p = scene.bodies[1].pose;
      for (int k = 0; k < 6; ++k) p[k] += jitter(rng);
      poses2[i] = p;
    }
    for (const auto& variant : variants) {
      const SmoothingConfig cfg = config_for_variant(variant, scene.smoothing);
      std::vector<double> sums(batch, 0.0);
      const TimingStats timing = time_run(
          [&] {
            parallel_for(batch, workers, [&](size_t lo, size_t hi) {
              for (size_t i = lo; i < hi; ++i) {
                const auto m = generate_manifold(s1, s2, poses1[i], poses2[i], cfg);
                sums[i] = primal(mean_contact_distance(m));
              }
            });
          },
          repetitions, std::min(3, repetitions));
      BenchRecord rec;
      rec.kind = "manifold";
      rec.variant = variant;
      rec.batch = batch;
      rec.repetitions = repetitions;
      rec.timing = timing;
      rec.throughput_qps = batch / std::max(timing.median_s, 1e-12);
      records.push_back(rec);
    }
  }
  return records;
}

}  // namespace cmg
