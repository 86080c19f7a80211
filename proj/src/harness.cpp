// SPDX-License-Identifier: Apache-2.0
#include "airfusion/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "airfusion/greedy.hpp"
#include "airfusion/model.hpp"
#include "airfusion/optimal.hpp"
#include "airfusion/power.hpp"
#include "airfusion/rng.hpp"

namespace airfusion {

namespace {

// Substream salts for per-trial seed derivation.
enum : std::uint64_t {
  kChannelStream = 1,
  kSparsityStream = 2,
  kFeatureStream = 3,
  kNoiseStreamBase = 16,  // + solver index
};

std::uint64_t trial_seed(const ExperimentConfig& config, std::uint64_t trial_index,
                         std::uint64_t stream) {
  return mix_seed(config.seed ^ trial_index, stream);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : "NA";
}
std::string opt_str(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : "NA";
}

}  // namespace

const char* solver_name(Solver s) {
  switch (s) {
    case Solver::Optimal: return "optimal";
    case Solver::Greedy: return "greedy";
    case Solver::Vanilla: return "vanilla";
    case Solver::Naive: return "naive";
    case Solver::Digital: return "digital";
  }
  return "?";
}

std::optional<Solver> solver_from_name(const std::string& name) {
  if (name == "optimal") return Solver::Optimal;
  if (name == "greedy") return Solver::Greedy;
  if (name == "vanilla") return Solver::Vanilla;
  if (name == "naive") return Solver::Naive;
  if (name == "digital") return Solver::Digital;
  return std::nullopt;
}

void ExperimentConfig::set_p_max_dbm(double dbm) {
  p_max_dbm = dbm;
  p_max_w = dbm_to_watts(dbm);
}

void ExperimentConfig::set_n0_dbm(double dbm) {
  n0_dbm = dbm;
  n0_w = dbm_to_watts(dbm);
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  if (num_agents < 1) problems.push_back("num_agents must be >= 1");
  if (num_voxels < 1) problems.push_back("num_voxels must be >= 1");
  if (num_subcarriers < num_voxels)
    problems.push_back("num_subcarriers must be >= num_voxels");
  if (!(p_max_w > 0.0)) problems.push_back("p_max must be positive");
  if (!(n0_w > 0.0)) problems.push_back("n0 must be positive");
  if (!(b_sub_hz > 0.0)) problems.push_back("b_sub_hz must be positive");
  if (feature_dim < 1) problems.push_back("feature_dim must be >= 1");
  if (!(sparsity_prob > 0.0 && sparsity_prob <= 1.0))
    problems.push_back("sparsity_prob must be in (0, 1]");
  if (trials < 1) problems.push_back("trials must be >= 1");
  if (!(sigma > 0.0)) problems.push_back("sigma must be positive");
  if (quant_bits < 2 || quant_bits > 5) problems.push_back("quant_bits must be in [2, 5]");
  if (solvers.empty()) problems.push_back("at least one solver must be enabled");
  if (!problems.empty()) {
    std::string message = "invalid configuration:";
    for (const auto& p : problems) message += "\n  - " + p;
    throw std::invalid_argument(message);
  }
}

ExperimentConfig load_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_number) +
                                  ": expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto bad_value = [&](const std::string& why) {
      return std::invalid_argument("config line " + std::to_string(line_number) + ": " + why +
                                   " for key '" + key + "'");
    };
    const auto as_double = [&] {
      try {
        std::size_t used = 0;
        const double d = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return d;
      } catch (...) {
        throw bad_value("malformed number '" + value + "'");
      }
    };
    const auto as_int = [&] {
      const double d = as_double();
      if (d != std::floor(d)) throw bad_value("expected an integer, got '" + value + "'");
      return static_cast<int>(d);
    };

    if (key == "num_agents") config.num_agents = as_int();
    else if (key == "num_voxels") config.num_voxels = as_int();
    else if (key == "num_subcarriers") config.num_subcarriers = as_int();
    else if (key == "p_max_dbm") config.set_p_max_dbm(as_double());
    else if (key == "n0_dbm") config.set_n0_dbm(as_double());
    else if (key == "rician_los_nlos_ratio_db") config.rician_los_nlos_ratio_db = as_double();
    else if (key == "path_loss_db") config.path_loss_db = as_double();
    else if (key == "b_sub_hz") config.b_sub_hz = as_double();
    else if (key == "feature_dim") config.feature_dim = as_int();
    else if (key == "sparsity_prob") config.sparsity_prob = as_double();
    else if (key == "trials") config.trials = as_int();
    else if (key == "seed") {
      try {
        config.seed = std::stoull(value);
      } catch (...) {
        throw bad_value("malformed seed '" + value + "'");
      }
    } else if (key == "mu") config.mu = as_double();
    else if (key == "sigma") config.sigma = as_double();
    else if (key == "quant_bits") config.quant_bits = as_int();
    else if (key == "latency_model") {
      if (value == "parallel") config.latency_model = LatencyModel::Parallel;
      else if (value == "literal") config.latency_model = LatencyModel::Literal;
      else throw bad_value("expected 'parallel' or 'literal', got '" + value + "'");
    } else if (key == "solvers") {
      config.solvers.clear();
      std::stringstream ss(value);
      std::string token;
      while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        const auto solver = solver_from_name(token);
        if (!solver) throw bad_value("unknown solver '" + token + "'");
        config.solvers.push_back(*solver);
      }
    } else {
      throw std::invalid_argument("config line " + std::to_string(line_number) +
                                  ": unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  return load_config(in);
}

std::vector<MetricsRecord> run_trial(const ExperimentConfig& config, std::uint64_t trial_index) {
  const ChannelMatrix channels =
      generate_channels(config.num_agents, config.num_subcarriers,
                        config.rician_los_nlos_ratio_db, config.path_loss_db,
                        trial_seed(config, trial_index, kChannelStream));
  const SparsityPattern pattern =
      generate_sparsity(config.num_agents, config.num_voxels, config.sparsity_prob,
                        trial_seed(config, trial_index, kSparsityStream));
  const FeatureTensor features = generate_features(
      pattern, config.feature_dim, trial_seed(config, trial_index, kFeatureStream));

  const HomogeneousPartition partition = homogeneous_partition(pattern);
  const double entropy = heterogeneity_entropy(partition, config.num_voxels);

  // All agents, all voxels: the participation the naive baseline assumes.
  SparsityPattern everyone;
  everyone.entries = Mat<std::uint8_t>(config.num_agents, config.num_voxels, 1);
  everyone.num_real = config.num_voxels;

  std::int64_t nonsparse_voxels = 0;
  for (int v = 0; v < config.num_voxels; ++v)
    if (pattern.column_sum(v) > 0) ++nonsparse_voxels;

  std::vector<MetricsRecord> records;
  records.reserve(config.solvers.size());
  for (std::size_t s = 0; s < config.solvers.size(); ++s) {
    const Solver solver = config.solvers[s];
    MetricsRecord rec;
    rec.trial = trial_index;
    rec.solver = solver;
    rec.p_max_dbm = config.p_max_dbm;
    rec.entropy = entropy;

    if (solver == Solver::Digital) {
      rec.latency_seconds =
          digital_latency(pattern, channels, config.p_max_w, config.n0_w, config.quant_bits,
                          config.feature_dim, config.b_sub_hz);
      records.push_back(std::move(rec));
      continue;
    }

    Allocation alloc;
    const SparsityPattern* tx = &pattern;
    const auto t0 = std::chrono::steady_clock::now();
    switch (solver) {
      case Solver::Optimal: {
        OptimalResult detail;
        alloc = optimal_voca_ppa(pattern, channels, config.p_max_w, config.n0_w, &detail);
        rec.n_sol = detail.stats.leaves_enumerated;
        rec.nodes_visited = detail.stats.nodes_visited;
        const SparsityPattern squared = augment_dummy_voxels(pattern, config.num_subcarriers);
        rec.compact_space_size =
            compact_space_size(homogeneous_partition(squared), config.num_subcarriers).get_d();
        break;
      }
      case Solver::Greedy:
        alloc = greedy_voca_ppa(pattern, channels, config.p_max_w, config.n0_w);
        break;
      case Solver::Vanilla:
        alloc = vanilla_allocation(pattern, channels, config.p_max_w, config.n0_w);
        break;
      case Solver::Naive:
        alloc = naive_allocation(channels, config.p_max_w, config.n0_w, config.num_voxels);
        tx = &everyone;
        break;
      case Solver::Digital:
        break;  // handled above
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    rec.gamma_star = alloc.receive_snr;
    rec.objective = std::isinf(alloc.receive_snr) ? 0.0 : config.p_max_w / alloc.receive_snr;
    const FusionResult fusion =
        simulate_round(features, *tx, alloc, channels, config.n0_w, config.mu, config.sigma,
                       trial_seed(config, trial_index, kNoiseStreamBase + s));
    rec.mse = fusion.mse;
    rec.latency_seconds =
        airfusion_latency(solver == Solver::Naive ? config.num_voxels : nonsparse_voxels,
                          config.feature_dim, config.b_sub_hz, config.num_subcarriers,
                          config.latency_model);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<MetricsRecord> run_trials_serial(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::vector<MetricsRecord>> per_trial(config.trials);
  for (int t = 0; t < config.trials; ++t) per_trial[t] = run_trial(config, t);
  std::vector<MetricsRecord> merged;
  merged.reserve(static_cast<std::size_t>(config.trials) * config.solvers.size());
  for (auto& batch : per_trial)
    for (auto& rec : batch) merged.push_back(std::move(rec));
  return merged;
}

std::vector<MetricsRecord> run_trials(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::vector<MetricsRecord>> per_trial(config.trials);
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < config.trials; ++t) per_trial[t] = run_trial(config, t);
  std::vector<MetricsRecord> merged;
  merged.reserve(static_cast<std::size_t>(config.trials) * config.solvers.size());
  for (auto& batch : per_trial)
    for (auto& rec : batch) merged.push_back(std::move(rec));
  return merged;
}

void write_csv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << "# airfusion metrics schema v1\n"
         "# gnuplot: set datafile separator ','; set datafile missing 'NA'\n"
         "trial,solver,p_max_dbm,mse,gamma_star,F,entropy,n_sol,nodes_visited,"
         "compact_space_size,latency_seconds,wall_time\n";
  for (const auto& r : records) {
    out << r.trial << ',' << solver_name(r.solver) << ',' << format_double(r.p_max_dbm) << ','
        << opt_str(r.mse) << ',' << opt_str(r.gamma_star) << ',' << opt_str(r.objective) << ','
        << opt_str(r.entropy) << ',' << opt_str(r.n_sol) << ',' << opt_str(r.nodes_visited) << ','
        << opt_str(r.compact_space_size) << ',' << opt_str(r.latency_seconds) << ','
        << "NA\n";  // wall time is measured but not reproducible
  }
}

std::vector<MetricsRecord> power_sweep(const ExperimentConfig& config,
                                       const std::vector<double>& p_max_dbm_values) {
  if (p_max_dbm_values.empty())
    throw std::invalid_argument("power_sweep: need at least one power point");
  std::vector<MetricsRecord> all;
  for (const double dbm : p_max_dbm_values) {
    ExperimentConfig point = config;
    point.set_p_max_dbm(dbm);
    auto records = run_trials(point);
    all.insert(all.end(), std::make_move_iterator(records.begin()),
               std::make_move_iterator(records.end()));
  }
  return all;
}

std::vector<EntropyBucket> entropy_sweep(const ExperimentConfig& config, int num_buckets) {
  if (num_buckets < 1) throw std::invalid_argument("entropy_sweep: need at least one bucket");
  const std::vector<MetricsRecord> records = run_trials(config);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (!r.entropy) continue;
    lo = std::min(lo, *r.entropy);
    hi = std::max(hi, *r.entropy);
  }
  if (!(hi > lo)) hi = lo + 1e-12;  // all trials identical: single effective bucket
  const double width = (hi - lo) / num_buckets;

  std::vector<EntropyBucket> buckets(num_buckets);
  std::vector<std::map<Solver, std::pair<double, std::uint64_t>>> sums(num_buckets);
  for (int b = 0; b < num_buckets; ++b) {
    buckets[b].lo = lo + b * width;
    buckets[b].hi = (b + 1 == num_buckets) ? hi : lo + (b + 1) * width;
  }
  for (const auto& r : records) {
    if (!r.entropy || !r.mse) continue;
    int b = static_cast<int>((*r.entropy - lo) / width);
    b = std::clamp(b, 0, num_buckets - 1);
    auto& [sum, n] = sums[b][r.solver];
    sum += *r.mse;
    n += 1;
  }
  for (int b = 0; b < num_buckets; ++b) {
    std::uint64_t count = 0;
    for (const auto& [solver, acc] : sums[b]) {
      buckets[b].mean_mse.emplace_back(solver, acc.first / acc.second);
      count = std::max(count, acc.second);
    }
    buckets[b].count = count;
  }
  return buckets;
}

void write_entropy_csv(std::ostream& out, const std::vector<EntropyBucket>& buckets) {
  out << "# airfusion entropy-sweep schema v1\n"
         "bucket,entropy_lo,entropy_hi,trials,solver,mean_mse\n";
  for (std::size_t b = 0; b < buckets.size(); ++b)
    for (const auto& [solver, mean] : buckets[b].mean_mse)
      out << b << ',' << format_double(buckets[b].lo) << ',' << format_double(buckets[b].hi)
          << ',' << buckets[b].count << ',' << solver_name(solver) << ',' << format_double(mean)
          << '\n';
}

std::vector<MSweepRow> m_sweep(const ExperimentConfig& config, const std::vector<int>& m_values) {
  if (m_values.empty()) throw std::invalid_argument("m_sweep: need at least one M value");
  std::vector<MSweepRow> rows;
  for (const int m : m_values) {
    ExperimentConfig point = config;
    point.num_subcarriers = m;
    point.num_voxels = m;
    point.validate();

    std::vector<std::uint64_t> n_sol(point.trials, 0);
    std::vector<mpz_class> sizes(point.trials);
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < point.trials; ++t) {
      const ChannelMatrix channels =
          generate_channels(point.num_agents, point.num_subcarriers,
                            point.rician_los_nlos_ratio_db, point.path_loss_db,
                            trial_seed(point, t, kChannelStream));
      const SparsityPattern pattern =
          generate_sparsity(point.num_agents, point.num_voxels, point.sparsity_prob,
                            trial_seed(point, t, kSparsityStream));
      const OptimalResult result = dfs_optimal(pattern, cost_matrix(channels, point.n0_w));
      n_sol[t] = result.stats.leaves_enumerated;
      sizes[t] = compact_space_size(homogeneous_partition(pattern), m);
    }

    MSweepRow row;
    row.num_subcarriers = m;
    row.trials = static_cast<std::uint64_t>(point.trials);
    std::vector<std::uint64_t> sorted = n_sol;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(0.95 * point.trials)) - 1;  // nearest-rank p95
    row.n_sol_p95 = sorted[std::min(rank, sorted.size() - 1)];
    double total = 0.0;
    for (const auto n : n_sol) total += static_cast<double>(n);
    row.mean_n_sol = total / point.trials;
    mpz_class size_total = 0;
    for (const auto& s : sizes) size_total += s;
    row.mean_compact_space = size_total.get_d() / point.trials;
    rows.push_back(row);
  }
  return rows;
}

void write_m_sweep_csv(std::ostream& out, const std::vector<MSweepRow>& rows) {
  out << "# airfusion m-sweep schema v1\n"
         "m,trials,n_sol_p95,mean_n_sol,mean_compact_space_size\n";
  for (const auto& r : rows)
    out << r.num_subcarriers << ',' << r.trials << ',' << r.n_sol_p95 << ','
        << format_double(r.mean_n_sol) << ',' << format_double(r.mean_compact_space) << '\n';
}

std::string table1_report(const ExperimentConfig& config, const std::vector<int>& m_values) {
  const std::vector<MSweepRow> rows = m_sweep(config, m_values);
  std::ostringstream out;
  out << "M    p95(N_sol)   mean(N_sol)  all solutions\n";
  for (const auto& r : rows) {
    char line[128];
    std::snprintf(line, sizeof line, "%-4d %-12llu %-12.1f %.2e\n", r.num_subcarriers,
                  static_cast<unsigned long long>(r.n_sol_p95), r.mean_n_sol,
                  r.mean_compact_space);
    out << line;
  }
  return out.str();
}

}  // namespace airfusion
