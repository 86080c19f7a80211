// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "airfusion/sim.hpp"
#include "airfusion/types.hpp"

namespace airfusion {

enum class Solver { Optimal, Greedy, Vanilla, Naive, Digital };

const char* solver_name(Solver s);
std::optional<Solver> solver_from_name(const std::string& name);

/// Experiment configuration. Powers are stored in watts; the dBm keys of the
/// config file are converted exactly once at load.
struct ExperimentConfig {
  int num_agents = 4;
  int num_voxels = 26;
  int num_subcarriers = 26;
  double p_max_dbm = 10.0;
  double p_max_w = dbm_to_watts(10.0);
  double n0_dbm = -40.0;
  double n0_w = dbm_to_watts(-40.0);
  double rician_los_nlos_ratio_db = 3.0;
  double path_loss_db = -15.0;
  double b_sub_hz = 120e3;
  int feature_dim = 128;
  double sparsity_prob = 1.0 / 3.0;
  int trials = 1000;
  std::uint64_t seed = 1;
  double mu = 0.0;
  double sigma = 1.0;
  int quant_bits = 4;
  LatencyModel latency_model = LatencyModel::Parallel;
  std::vector<Solver> solvers = {Solver::Optimal, Solver::Greedy, Solver::Vanilla,
                                 Solver::Naive, Solver::Digital};

  void set_p_max_dbm(double dbm);
  void set_n0_dbm(double dbm);
  /// Throws std::invalid_argument listing every violated constraint.
  void validate() const;
};

/// Parse `key = value` lines ('#' comments). Unknown keys and malformed
/// values throw std::invalid_argument with the offending line number.
ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);

/// One row of experiment output; fields that do not apply to a solver stay
/// unset and are written as NA.
struct MetricsRecord {
  std::uint64_t trial = 0;
  Solver solver = Solver::Optimal;
  double p_max_dbm = 0.0;
  std::optional<double> mse;
  std::optional<double> gamma_star;
  std::optional<double> objective;
  std::optional<double> entropy;
  std::optional<std::uint64_t> n_sol;
  std::optional<std::uint64_t> nodes_visited;
  std::optional<double> compact_space_size;
  std::optional<double> latency_seconds;
  std::optional<double> wall_seconds;  // kept out of the CSV: it is not reproducible
};

/// Run every enabled solver on the trial's seeded instance and simulate one
/// fusion round each. Bit-reproducible given (config, trial_index).
std::vector<MetricsRecord> run_trial(const ExperimentConfig& config, std::uint64_t trial_index);

/// All trials of the config. The parallel variant farms trials out to an
/// OpenMP worker pool; records land in canonical (trial, solver) order either
/// way, so both produce identical bytes.
std::vector<MetricsRecord> run_trials(const ExperimentConfig& config);
std::vector<MetricsRecord> run_trials_serial(const ExperimentConfig& config);

/// Frozen CSV schema (v1). wall_time is emitted as NA so that regenerating
/// from the same config is byte-identical.
void write_csv(std::ostream& out, const std::vector<MetricsRecord>& records);

struct EntropyBucket {
  double lo = 0.0, hi = 0.0;
  std::uint64_t count = 0;
  std::vector<std::pair<Solver, double>> mean_mse;  // per enabled simulating solver
};

/// Power sweep: reruns all trials at each power point; returns the records.
std::vector<MetricsRecord> power_sweep(const ExperimentConfig& config,
                                       const std::vector<double>& p_max_dbm_values);

/// Entropy sweep at the config's power point: buckets trials by measured
/// heterogeneity entropy into `num_buckets` equal-width bins.
std::vector<EntropyBucket> entropy_sweep(const ExperimentConfig& config, int num_buckets);
void write_entropy_csv(std::ostream& out, const std::vector<EntropyBucket>& buckets);

struct MSweepRow {
  int num_subcarriers = 0;
  std::uint64_t trials = 0;
  std::uint64_t n_sol_p95 = 0;
  double mean_n_sol = 0.0;
  double mean_compact_space = 0.0;  // exact big-integer mean, rounded
};

/// Optimal-solver complexity statistics per subcarrier count (square
/// instances, V = M).
std::vector<MSweepRow> m_sweep(const ExperimentConfig& config, const std::vector<int>& m_values);
void write_m_sweep_csv(std::ostream& out, const std::vector<MSweepRow>& rows);

/// Text table of the m_sweep rows (95th percentile of enumerated solutions
/// and mean size of the compact solution space).
std::string table1_report(const ExperimentConfig& config, const std::vector<int>& m_values);

}  // namespace airfusion
