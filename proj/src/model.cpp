// SPDX-License-Identifier: Apache-2.0
#include "airfusion/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "airfusion/rng.hpp"

namespace airfusion {

ChannelMatrix generate_channels(int num_agents, int num_subcarriers,
                                double los_nlos_ratio_db, double path_loss_db,
                                std::uint64_t seed) {
  if (num_agents < 1 || num_subcarriers < 1)
    throw std::invalid_argument("generate_channels: dimensions must be positive");

  const double kappa = db_to_linear(los_nlos_ratio_db);
  const double gain = db_to_linear(path_loss_db);
  const double los_amp = std::sqrt(kappa / (kappa + 1.0));
  const double nlos_amp = std::sqrt(1.0 / (kappa + 1.0));
  const double root_gain = std::sqrt(gain);

  Rng rng(seed);
  ChannelMatrix out;
  out.gains = Mat<std::complex<double>>(num_agents, num_subcarriers);
  for (int k = 0; k < num_agents; ++k) {
    for (int m = 0; m < num_subcarriers; ++m) {
      const double theta = rng.uniform(0.0, 2.0 * M_PI);
      const std::complex<double> los{std::cos(theta), std::sin(theta)};
      const std::complex<double> nlos = rng.cgauss(1.0);
      out.gains(k, m) = root_gain * (los_amp * los + nlos_amp * nlos);
    }
  }
  return out;
}

SparsityPattern generate_sparsity(int num_agents, int num_voxels, double p_nonzero,
                                  std::uint64_t seed) {
  if (num_agents < 1 || num_voxels < 1)
    throw std::invalid_argument("generate_sparsity: dimensions must be positive");
  if (!(p_nonzero > 0.0 && p_nonzero <= 1.0))
    throw std::invalid_argument("generate_sparsity: p_nonzero must be in (0, 1]");

  Rng rng(seed);
  SparsityPattern out;
  out.entries = Mat<std::uint8_t>(num_agents, num_voxels);
  out.num_real = num_voxels;
  for (int v = 0; v < num_voxels; ++v) {
    int ones = 0;
    do {
      ones = 0;
      for (int k = 0; k < num_agents; ++k) {
        const std::uint8_t bit = rng.bernoulli(p_nonzero) ? 1 : 0;
        out.entries(k, v) = bit;
        ones += bit;
      }
    } while (ones == 0);
  }
  return out;
}

CostMatrix cost_matrix(const ChannelMatrix& channels, double noise_power) {
  if (!(noise_power > 0.0))
    throw std::invalid_argument("cost_matrix: noise power must be positive");

  CostMatrix out;
  out.noise_power = noise_power;
  out.costs = Mat<double>(channels.num_agents(), channels.num_subcarriers());
  for (int k = 0; k < channels.num_agents(); ++k) {
    for (int m = 0; m < channels.num_subcarriers(); ++m) {
      const double mag2 = std::norm(channels.gains(k, m));
      if (!(mag2 > 0.0))
        throw std::invalid_argument("cost_matrix: zero channel gain makes inversion undefined");
      out.costs(k, m) = noise_power / mag2;
    }
  }
  return out;
}

HomogeneousPartition homogeneous_partition(const SparsityPattern& pattern) {
  const int num_agents = pattern.num_agents();
  const int num_voxels = pattern.num_voxels();
  AF_CHECK(num_agents <= 64, "homogeneous_partition: more than 64 agents unsupported");

  HomogeneousPartition out;
  out.num_agents = num_agents;
  // signature -> group index
  std::vector<std::pair<std::uint64_t, int>> seen;
  for (int v = 0; v < num_voxels; ++v) {
    std::uint64_t sig = 0;
    for (int k = 0; k < num_agents; ++k)
      if (pattern.entries(k, v)) sig |= (std::uint64_t{1} << k);
    auto it = std::find_if(seen.begin(), seen.end(),
                           [sig](const auto& p) { return p.first == sig; });
    if (it == seen.end()) {
      seen.emplace_back(sig, out.num_groups());
      out.groups.push_back({sig, {v}});
    } else {
      out.groups[it->second].voxels.push_back(v);
    }
  }
  std::sort(out.groups.begin(), out.groups.end(), [](const auto& a, const auto& b) {
    if (a.voxels.size() != b.voxels.size()) return a.voxels.size() > b.voxels.size();
    return a.signature < b.signature;
  });
  return out;
}

double heterogeneity_entropy(const HomogeneousPartition& partition, int num_voxels) {
  double entropy = 0.0;
  std::size_t covered = 0;
  for (const auto& group : partition.groups) {
    covered += group.voxels.size();
    const double p = static_cast<double>(group.voxels.size()) / num_voxels;
    entropy -= p * std::log(p);
  }
  AF_CHECK(covered == static_cast<std::size_t>(num_voxels),
           "heterogeneity_entropy: partition does not cover the voxel set");
  return entropy;
}

SparsityPattern augment_dummy_voxels(const SparsityPattern& pattern, int num_subcarriers) {
  const int num_voxels = pattern.num_voxels();
  if (num_subcarriers < num_voxels)
    throw std::invalid_argument("augment_dummy_voxels: need at least as many subcarriers as voxels");

  SparsityPattern out;
  out.num_real = pattern.num_real;
  out.entries = Mat<std::uint8_t>(pattern.num_agents(), num_subcarriers, 0);
  for (int k = 0; k < pattern.num_agents(); ++k)
    for (int v = 0; v < num_voxels; ++v) out.entries(k, v) = pattern.entries(k, v);
  return out;
}

}  // namespace airfusion
