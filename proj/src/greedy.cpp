// SPDX-License-Identifier: Apache-2.0
#include "airfusion/greedy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "airfusion/model.hpp"
#include "airfusion/power.hpp"

namespace airfusion {

std::vector<int> voxel_priority_order(const SparsityPattern& pattern) {
  const int num_voxels = pattern.num_voxels();
  std::vector<int> participants(num_voxels);
  for (int v = 0; v < num_voxels; ++v) participants[v] = pattern.column_sum(v);

  std::vector<int> order(num_voxels);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return participants[a] > participants[b];  // ties keep ascending index
  });
  return order;
}

PairingMatrix greedy_pairing(const SparsityPattern& pattern, const CostMatrix& costs) {
  const int num_agents = pattern.num_agents();
  const int num_voxels = pattern.num_voxels();
  const int num_subcarriers = costs.num_subcarriers();
  if (num_subcarriers < num_voxels)
    throw std::invalid_argument("greedy_pairing: fewer subcarriers than voxels");
  if (num_agents != costs.num_agents())
    throw std::invalid_argument("greedy_pairing: agent dimension mismatch");

  // Per-subcarrier agent costs sorted descending; the greedy inner max is the
  // first entry whose agent participates on the voxel.
  std::vector<std::vector<std::pair<double, int>>> sorted(num_subcarriers);
  for (int m = 0; m < num_subcarriers; ++m) {
    auto& col = sorted[m];
    col.reserve(num_agents);
    for (int k = 0; k < num_agents; ++k) col.emplace_back(costs.costs(k, m), k);
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
  }

  PairingMatrix pairing;
  pairing.num_subcarriers = num_subcarriers;
  pairing.to_subcarrier.assign(num_voxels, -1);
  std::vector<char> used(num_subcarriers, 0);

  for (const int v : voxel_priority_order(pattern)) {
    int best_m = -1;
    double best_score = std::numeric_limits<double>::infinity();
    for (int m = 0; m < num_subcarriers; ++m) {
      if (used[m]) continue;
      double score = 0.0;  // all-sparse voxel: every candidate scores zero
      for (const auto& [cost, k] : sorted[m]) {
        if (pattern.entries(k, v)) {
          score = cost;
          break;
        }
      }
      if (score < best_score) {  // strict: ties keep the lowest index
        best_score = score;
        best_m = m;
      }
    }
    AF_CHECK(best_m >= 0, "greedy_pairing: ran out of subcarriers");
    pairing.to_subcarrier[v] = best_m;
    used[best_m] = 1;
  }
  return pairing;
}

Allocation greedy_voca_ppa(const SparsityPattern& pattern, const ChannelMatrix& channels,
                           double p_max, double noise_power) {
  const CostMatrix costs = cost_matrix(channels, noise_power);
  PairingMatrix pairing = greedy_pairing(pattern, costs);
  return allocate_for_pairing(pairing, pattern, channels, p_max, noise_power);
}

}  // namespace airfusion
