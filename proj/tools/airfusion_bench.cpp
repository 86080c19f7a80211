// SPDX-License-Identifier: Apache-2.0
//
// Throughput benchmark: the OpenMP trial runner against the serial reference,
// plus a greedy-solver scaling sanity sweep. Results go to stdout.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <vector>

#include "airfusion/greedy.hpp"
#include "airfusion/harness.hpp"
#include "airfusion/model.hpp"
#include "airfusion/rng.hpp"

namespace af = airfusion;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench_trial_runner() {
  af::ExperimentConfig config;
  config.trials = 200;
  config.seed = 7;

  auto t0 = std::chrono::steady_clock::now();
  const auto serial = af::run_trials_serial(config);
  const double serial_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto parallel = af::run_trials(config);
  const double parallel_s = seconds_since(t0);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("trial runner (%d trials, %zu records, %d threads)\n", config.trials,
              parallel.size(), threads);
  std::printf("  serial:   %8.3f s  (%.1f trials/s)\n", serial_s, config.trials / serial_s);
  std::printf("  parallel: %8.3f s  (%.1f trials/s, speedup %.2fx)\n", parallel_s,
              config.trials / parallel_s, serial_s / parallel_s);

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i)
    identical = serial[i].trial == parallel[i].trial && serial[i].mse == parallel[i].mse &&
                serial[i].gamma_star == parallel[i].gamma_star;
  std::printf("  outputs identical: %s\n", identical ? "yes" : "NO");
}

void bench_greedy_scaling() {
  std::printf("\ngreedy solver scaling (K = 4, M = 2048 subcarriers, time vs voxel count)\n");
  const int num_agents = 4;
  const int num_subcarriers = 2048;
  const af::ChannelMatrix channels =
      af::generate_channels(num_agents, num_subcarriers, 3.0, -15.0, 11);
  const af::CostMatrix costs = af::cost_matrix(channels, af::dbm_to_watts(-40.0));

  double base_time = 0.0;
  int base_voxels = 0;
  for (const int num_voxels : {256, 512, 1024, 2048}) {
    const af::SparsityPattern pattern =
        af::generate_sparsity(num_agents, num_voxels, 1.0 / 3.0, 13);
    // warm + best of 3
    double best = 1e100;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto pairing = af::greedy_pairing(pattern, costs);
      const double dt = seconds_since(t0);
      if (dt < best) best = dt;
      (void)pairing;
    }
    if (base_voxels == 0) {
      base_voxels = num_voxels;
      base_time = best;
    }
    const double scale = (best / base_time) / (static_cast<double>(num_voxels) / base_voxels);
    std::printf("  V = %5d: %8.4f ms  (time ratio / voxel ratio = %.2f)\n", num_voxels,
                best * 1e3, scale);
  }
  std::printf("  values near or below 1.0 mean no worse than linear growth in V\n");
}

}  // namespace

int main() {
  bench_trial_runner();
  bench_greedy_scaling();
  return 0;
}
