// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: solve single instances, run seeded Monte-Carlo
// simulations, sweep experiment axes and reproduce the solver complexity
// table. Exit codes: 0 success, 1 configuration error, 2 internal failure.

#include <CLI11.hpp>

#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "airfusion/greedy.hpp"
#include "airfusion/harness.hpp"
#include "airfusion/model.hpp"
#include "airfusion/optimal.hpp"
#include "airfusion/oracle.hpp"
#include "airfusion/power.hpp"
#include "airfusion/rng.hpp"
#include "airfusion/sim.hpp"

namespace af = airfusion;

namespace {

struct Instance {
  af::ChannelMatrix channels;
  af::SparsityPattern pattern;
};

// Instance file: a dimensions line "K M V", then K rows of M channel entries
// as re,im pairs, then K rows of V binary sparsity entries.
Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file '" + path + "'");
  int num_agents = 0, num_subcarriers = 0, num_voxels = 0;
  if (!(in >> num_agents >> num_subcarriers >> num_voxels))
    throw std::invalid_argument("instance file: malformed dimensions line (want 'K M V')");
  if (num_agents < 1 || num_subcarriers < 1 || num_voxels < 1 ||
      num_voxels > num_subcarriers)
    throw std::invalid_argument("instance file: dimensions must satisfy K,M,V >= 1 and V <= M");

  Instance inst;
  inst.channels.gains = af::Mat<std::complex<double>>(num_agents, num_subcarriers);
  for (int k = 0; k < num_agents; ++k)
    for (int m = 0; m < num_subcarriers; ++m) {
      std::string token;
      if (!(in >> token))
        throw std::invalid_argument("instance file: missing channel entries");
      double re = 0.0, im = 0.0;
      if (std::sscanf(token.c_str(), "%lf,%lf", &re, &im) != 2)
        throw std::invalid_argument("instance file: bad channel entry '" + token +
                                    "' (want re,im)");
      inst.channels.gains(k, m) = {re, im};
    }

  inst.pattern.entries = af::Mat<std::uint8_t>(num_agents, num_voxels);
  inst.pattern.num_real = num_voxels;
  for (int k = 0; k < num_agents; ++k)
    for (int v = 0; v < num_voxels; ++v) {
      int bit = 0;
      if (!(in >> bit) || (bit != 0 && bit != 1))
        throw std::invalid_argument("instance file: sparsity entries must be 0 or 1");
      inst.pattern.entries(k, v) = static_cast<std::uint8_t>(bit);
    }
  return inst;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stod(token));
  }
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (const double d : parse_doubles(csv)) out.push_back(static_cast<int>(d));
  return out;
}

void apply_solver_list(af::ExperimentConfig& config, const std::string& list) {
  config.solvers.clear();
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto solver = af::solver_from_name(token);
    if (!solver) throw std::invalid_argument("unknown solver '" + token + "'");
    config.solvers.push_back(*solver);
  }
  if (config.solvers.empty()) throw std::invalid_argument("empty solver list");
}

void print_solution(const char* name, const af::Allocation& alloc, double p_max_w,
                    const af::OptimalResult* detail) {
  std::cout << "solver: " << name << "\n";
  std::cout << "pairing (voxel -> subcarrier):";
  for (int v = 0; v < alloc.pairing.num_voxels(); ++v)
    std::cout << ' ' << v << "->" << alloc.pairing.to_subcarrier[v];
  std::cout << "\n";
  const double objective =
      std::isinf(alloc.receive_snr) ? 0.0 : p_max_w / alloc.receive_snr;
  std::cout << "gamma_star: " << alloc.receive_snr << "\n";
  std::cout << "F: " << objective << "\n";
  if (detail) {
    std::cout << "leaves_enumerated: " << detail->stats.leaves_enumerated
              << "  nodes_visited: " << detail->stats.nodes_visited
              << "  nodes_pruned: " << detail->stats.nodes_pruned
              << "  wall_seconds: " << detail->stats.wall_seconds << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Spatial over-the-air fusion: voxel-carrier pairing, power allocation "
               "and protocol simulation"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> trials_override;
  std::string out_path;
  std::string solver_list;
  std::string latency_model;
  app.add_option("--config", config_path, "configuration file (key = value lines)");
  app.add_option("--seed", seed_override, "override the configured seed");
  app.add_option("--trials", trials_override, "override the configured trial count");
  app.add_option("--out", out_path, "output CSV path (default: stdout)");
  app.add_option("--solvers", solver_list, "comma-separated solver list");
  app.add_option("--latency-model", latency_model, "parallel|literal")
      ->check(CLI::IsMember({"parallel", "literal"}));

  auto* solve = app.add_subcommand("solve", "solve one instance and print the allocation");
  std::string instance_path;
  solve->add_option("--instance", instance_path,
                    "instance file (dimensions line, channel rows as re,im, sparsity rows)");

  auto* simulate = app.add_subcommand("simulate", "run seeded trials at one power point");

  auto* sweep = app.add_subcommand("sweep", "sweep an experiment axis and emit CSV");
  std::string axis;
  std::string values_csv;
  sweep->add_option("--axis", axis, "power_dbm|entropy_bucket|M")->required();
  sweep->add_option("--values", values_csv, "comma-separated axis values")->required();

  auto* table1 = app.add_subcommand("table1", "solver complexity statistics per M");
  std::string m_values_csv = "8,16,32";
  table1->add_option("--m-values", m_values_csv, "comma-separated M values (default 8,16,32)");

  auto* oracle_check =
      app.add_subcommand("oracle-check", "small-instance equivalence suite (solvers vs oracles)");
  int oracle_instances = 200;
  oracle_check->add_option("--instances", oracle_instances, "number of random instances");

  CLI11_PARSE(app, argc, argv);

  af::ExperimentConfig config;
  if (!config_path.empty()) config = af::load_config_file(config_path);
  if (seed_override) config.seed = *seed_override;
  if (trials_override) config.trials = *trials_override;
  if (!solver_list.empty()) apply_solver_list(config, solver_list);
  if (!latency_model.empty())
    config.latency_model =
        latency_model == "literal" ? af::LatencyModel::Literal : af::LatencyModel::Parallel;
  config.validate();

  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    out_file.open(out_path);
    if (!out_file) throw std::invalid_argument("cannot open output file '" + out_path + "'");
    out = &out_file;
  }

  if (solve->parsed()) {
    Instance inst;
    if (!instance_path.empty()) {
      inst = load_instance(instance_path);
    } else {
      inst.channels = af::generate_channels(config.num_agents, config.num_subcarriers,
                                            config.rician_los_nlos_ratio_db, config.path_loss_db,
                                            af::mix_seed(config.seed, 1));
      inst.pattern = af::generate_sparsity(config.num_agents, config.num_voxels,
                                           config.sparsity_prob, af::mix_seed(config.seed, 2));
    }
    for (const af::Solver solver : config.solvers) {
      switch (solver) {
        case af::Solver::Optimal: {
          af::OptimalResult detail;
          const af::Allocation alloc = af::optimal_voca_ppa(inst.pattern, inst.channels,
                                                            config.p_max_w, config.n0_w, &detail);
          print_solution("optimal", alloc, config.p_max_w, &detail);
          break;
        }
        case af::Solver::Greedy:
          print_solution("greedy",
                         af::greedy_voca_ppa(inst.pattern, inst.channels, config.p_max_w,
                                             config.n0_w),
                         config.p_max_w, nullptr);
          break;
        case af::Solver::Vanilla:
          print_solution("vanilla",
                         af::vanilla_allocation(inst.pattern, inst.channels, config.p_max_w,
                                                config.n0_w),
                         config.p_max_w, nullptr);
          break;
        case af::Solver::Naive:
          print_solution("naive",
                         af::naive_allocation(inst.channels, config.p_max_w, config.n0_w,
                                              inst.pattern.num_voxels()),
                         config.p_max_w, nullptr);
          break;
        case af::Solver::Digital:
          std::cout << "solver: digital\nlatency_seconds: "
                    << af::digital_latency(inst.pattern, inst.channels, config.p_max_w,
                                           config.n0_w, config.quant_bits, config.feature_dim,
                                           config.b_sub_hz)
                    << "\n";
          break;
      }
    }
    return 0;
  }

  if (simulate->parsed()) {
    af::write_csv(*out, af::run_trials(config));
    return 0;
  }

  if (sweep->parsed()) {
    if (axis == "power_dbm") {
      af::write_csv(*out, af::power_sweep(config, parse_doubles(values_csv)));
    } else if (axis == "entropy_bucket") {
      const auto values = parse_ints(values_csv);
      const int buckets = values.empty() ? 8 : values.front();
      af::write_entropy_csv(*out, af::entropy_sweep(config, buckets));
    } else if (axis == "M") {
      af::write_m_sweep_csv(*out, af::m_sweep(config, parse_ints(values_csv)));
    } else {
      throw std::invalid_argument("unknown sweep axis '" + axis + "'");
    }
    return 0;
  }

  if (table1->parsed()) {
    *out << af::table1_report(config, parse_ints(m_values_csv));
    return 0;
  }

  if (oracle_check->parsed()) {
    int failures = 0;
    std::uint64_t seed = config.seed;
    for (int i = 0; i < oracle_instances; ++i) {
      const int num_agents = 2 + static_cast<int>(af::mix_seed(seed, 3 * i) % 3);      // 2..4
      const int size = 4 + static_cast<int>(af::mix_seed(seed, 3 * i + 1) % 4);        // 4..7
      const af::ChannelMatrix channels = af::generate_channels(
          num_agents, size, config.rician_los_nlos_ratio_db, config.path_loss_db,
          af::mix_seed(seed, 3 * i + 2));
      const af::SparsityPattern pattern =
          af::generate_sparsity(num_agents, size, config.sparsity_prob,
                                af::mix_seed(seed, 3 * i + 2) + 1);
      const af::CostMatrix costs = af::cost_matrix(channels, config.n0_w);
      const double exact = af::brute_force_permutations(pattern, costs).best_objective;
      const double compact = af::brute_force_compact(pattern, costs).best_objective;
      const double tree = af::dfs_optimal(pattern, costs).objective;
      const double greedy =
          af::objective_F(af::greedy_pairing(pattern, costs), pattern, costs).total;
      const bool ok = tree == exact && compact == exact && greedy >= exact - 1e-12;
      if (!ok) {
        ++failures;
        std::cerr << "instance " << i << ": oracle=" << exact << " compact=" << compact
                  << " tree=" << tree << " greedy=" << greedy << "\n";
      }
    }
    std::cout << (oracle_instances - failures) << "/" << oracle_instances
              << " instances agree across oracles and the tree solver\n";
    if (failures) throw af::internal_error("oracle-check found disagreements");
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const af::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
