// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "airfusion/types.hpp"

namespace airfusion {

/// i.i.d. Rician fading draw for every (agent, subcarrier) entry:
///   h = sqrt(g) * (sqrt(kappa/(kappa+1)) e^{j theta} + sqrt(1/(kappa+1)) w)
/// with w ~ CN(0,1), theta uniform, kappa the LoS/NLoS power ratio and g the
/// mean path gain. E[|h|^2] = g. Entries are drawn row-major (agent-major),
/// which is part of the determinism contract.
ChannelMatrix generate_channels(int num_agents, int num_subcarriers,
                                double los_nlos_ratio_db, double path_loss_db,
                                std::uint64_t seed);

/// i.i.d. Bernoulli(p) occupancy; any all-zero column is redrawn until it has
/// at least one participant. Columns are drawn left to right, each agent top
/// to bottom. The rejection step raises the conditional per-entry density to
/// p / (1 - (1-p)^K).
SparsityPattern generate_sparsity(int num_agents, int num_voxels, double p_nonzero,
                                  std::uint64_t seed);

/// c_{k,m} = N0 / |h_{k,m}|^2. Throws on zero channel gain.
CostMatrix cost_matrix(const ChannelMatrix& channels, double noise_power);

/// Group voxels by identical sparsity column. Canonical order: group size
/// descending, ties by signature (agent 0 = LSB) ascending.
HomogeneousPartition homogeneous_partition(const SparsityPattern& pattern);

/// Entropy in nats of the empirical voxel distribution over homogeneous
/// groups: -sum_q (n_q/V) ln(n_q/V). Zero iff a single group.
double heterogeneity_entropy(const HomogeneousPartition& partition, int num_voxels);

/// Append (M - V) all-zero dummy columns so pairing search runs on a square
/// instance. Requires M >= V.
SparsityPattern augment_dummy_voxels(const SparsityPattern& pattern, int num_subcarriers);

}  // namespace airfusion
