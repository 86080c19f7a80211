// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "airfusion/types.hpp"

namespace airfusion {

struct ObjectiveValue {
  double total = 0.0;             // F = max_k f_k
  std::vector<double> per_agent;  // f_k = sum of c_{k,m(v)} over non-sparse v
};

/// Max-linear pairing objective: f_k sums the channel-inversion cost of every
/// subcarrier serving one of agent k's non-sparse voxels; F is the bottleneck
/// agent's total.
ObjectiveValue objective_F(const PairingMatrix& pairing, const SparsityPattern& pattern,
                           const CostMatrix& costs);

/// Equal-SNR optimum given the pairing: gamma* = P_max / F. Returns +inf when
/// F == 0 (nobody transmits), the unconstrained sentinel.
double optimal_receive_snr(const PairingMatrix& pairing, const SparsityPattern& pattern,
                           const CostMatrix& costs, double p_max);
double optimal_receive_snr_from_objective(double objective, double p_max);

/// Channel-inversion powers |p_{k,m}|^2 = N0 * gamma / |h_{k,m}|^2 on entries
/// where subcarrier m serves a voxel agent k participates in, zero elsewhere.
Mat<double> transmit_powers(const PairingMatrix& pairing, const SparsityPattern& pattern,
                            const ChannelMatrix& channels, double receive_snr,
                            double noise_power);

/// True iff the assignment is injective and in range (row sums 1, column sums
/// at most 1 in the binary-matrix view).
bool validate_pairing(const PairingMatrix& pairing);

/// Lemma-1 composition used by every solver: objective, gamma*, powers.
Allocation allocate_for_pairing(const PairingMatrix& pairing, const SparsityPattern& pattern,
                                const ChannelMatrix& channels, double p_max,
                                double noise_power);

}  // namespace airfusion
