// SPDX-License-Identifier: Apache-2.0
#include "airfusion/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "airfusion/model.hpp"

namespace airfusion {

ObjectiveValue objective_F(const PairingMatrix& pairing, const SparsityPattern& pattern,
                           const CostMatrix& costs) {
  const int num_agents = pattern.num_agents();
  const int num_voxels = pairing.num_voxels();
  if (num_voxels > pattern.num_voxels() || pairing.num_subcarriers != costs.num_subcarriers() ||
      num_agents != costs.num_agents())
    throw std::invalid_argument("objective_F: dimension mismatch");

  // f_k depends on the subcarrier set only, so each agent's costs are summed
  // in ascending subcarrier order: swapping two homogeneous voxels leaves
  // every f_k bit-identical, not merely equal up to rounding.
  std::vector<int> voxel_on(pairing.num_subcarriers, -1);
  for (int v = 0; v < num_voxels; ++v) {
    const int m = pairing.to_subcarrier[v];
    if (m < 0 || m >= pairing.num_subcarriers || voxel_on[m] >= 0)
      throw std::invalid_argument("objective_F: invalid pairing");
    voxel_on[m] = v;
  }

  ObjectiveValue out;
  out.per_agent.assign(num_agents, 0.0);
  for (int k = 0; k < num_agents; ++k) {
    for (int m = 0; m < pairing.num_subcarriers; ++m) {
      const int v = voxel_on[m];
      if (v >= 0 && pattern.entries(k, v)) out.per_agent[k] += costs.costs(k, m);
    }
  }
  out.total = num_agents ? *std::max_element(out.per_agent.begin(), out.per_agent.end()) : 0.0;
  return out;
}

double optimal_receive_snr_from_objective(double objective, double p_max) {
  if (objective <= 0.0) return std::numeric_limits<double>::infinity();
  return p_max / objective;
}

double optimal_receive_snr(const PairingMatrix& pairing, const SparsityPattern& pattern,
                           const CostMatrix& costs, double p_max) {
  return optimal_receive_snr_from_objective(objective_F(pairing, pattern, costs).total, p_max);
}

Mat<double> transmit_powers(const PairingMatrix& pairing, const SparsityPattern& pattern,
                            const ChannelMatrix& channels, double receive_snr,
                            double noise_power) {
  const int num_agents = channels.num_agents();
  const int num_subcarriers = channels.num_subcarriers();
  Mat<double> power(num_agents, num_subcarriers, 0.0);
  if (receive_snr == 0.0) return power;

  for (int v = 0; v < pairing.num_voxels(); ++v) {
    const int m = pairing.to_subcarrier[v];
    for (int k = 0; k < num_agents; ++k) {
      if (!pattern.entries(k, v)) continue;
      AF_CHECK(std::isfinite(receive_snr),
               "transmit_powers: infinite SNR with an active pairing entry");
      const double mag2 = std::norm(channels.gains(k, m));
      if (!(mag2 > 0.0))
        throw std::invalid_argument("transmit_powers: zero channel gain on active entry");
      power(k, m) = noise_power * receive_snr / mag2;
    }
  }
  return power;
}

bool validate_pairing(const PairingMatrix& pairing) {
  std::vector<char> used(pairing.num_subcarriers, 0);
  for (const int m : pairing.to_subcarrier) {
    if (m < 0 || m >= pairing.num_subcarriers) return false;
    if (used[m]) return false;
    used[m] = 1;
  }
  return true;
}

Allocation allocate_for_pairing(const PairingMatrix& pairing, const SparsityPattern& pattern,
                                const ChannelMatrix& channels, double p_max,
                                double noise_power) {
  if (!(p_max > 0.0)) throw std::invalid_argument("allocate_for_pairing: P_max must be positive");
  Allocation alloc;
  alloc.pairing = pairing;
  const ObjectiveValue obj = objective_F(pairing, pattern, cost_matrix(channels, noise_power));
  alloc.receive_snr = optimal_receive_snr_from_objective(obj.total, p_max);
  alloc.tx_power = std::isfinite(alloc.receive_snr)
                       ? transmit_powers(pairing, pattern, channels, alloc.receive_snr, noise_power)
                       : Mat<double>(channels.num_agents(), channels.num_subcarriers(), 0.0);
  return alloc;
}

}  // namespace airfusion
