// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "airfusion/types.hpp"

namespace airfusion {

/// Processing order for greedy pairing: voxels sorted by descending number of
/// participating agents, ties by ascending voxel index. Dummy (all-zero)
/// columns therefore sort last.
std::vector<int> voxel_priority_order(const SparsityPattern& pattern);

/// Sequential per-voxel pairing: each voxel in priority order takes the
/// unused subcarrier minimizing the largest participating agent's cost.
/// Per-subcarrier costs are pre-sorted descending once so the inner max is a
/// short walk down the sorted list (first participating agent wins).
PairingMatrix greedy_pairing(const SparsityPattern& pattern, const CostMatrix& costs);

/// Greedy pairing followed by the closed-form equal-SNR power allocation.
Allocation greedy_voca_ppa(const SparsityPattern& pattern, const ChannelMatrix& channels,
                           double p_max, double noise_power);

}  // namespace airfusion
