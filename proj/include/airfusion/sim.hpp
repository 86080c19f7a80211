// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "airfusion/types.hpp"

namespace airfusion {

/// Per-agent per-voxel feature vectors f_{k,v}[l], zero wherever the pattern
/// says the voxel is sparse on that agent.
struct FeatureTensor {
  int num_agents = 0;
  int num_voxels = 0;
  int feature_dim = 0;
  std::vector<double> values;  // agent-major, then voxel, then coefficient

  double at(int k, int v, int l) const {
    return values[(static_cast<std::size_t>(k) * num_voxels + v) * feature_dim + l];
  }
  double& at(int k, int v, int l) {
    return values[(static_cast<std::size_t>(k) * num_voxels + v) * feature_dim + l];
  }
};

enum class FusionMode { Average, Max };

struct FusionResult {
  Mat<double> truth;     // V x L
  Mat<double> estimate;  // V x L
  double mse = 0.0;
  std::vector<double> per_voxel_mse;
};

enum class LatencyModel {
  Parallel,  // ceil(N_v / M) coherence blocks of L symbols each
  Literal,   // L * N_v / B_sub, one voxel at a time
};

/// i.i.d. standard Gaussian features on non-sparse entries, zero elsewhere.
/// Drawn agent-major, voxel, then coefficient.
FeatureTensor generate_features(const SparsityPattern& pattern, int feature_dim,
                                std::uint64_t seed);

/// Ground-truth fusion of Eq.-style average pooling (sum over all K agents,
/// divided by K) or elementwise max.
Mat<double> fuse_ground_truth(const FeatureTensor& features, FusionMode mode);

/// One over-the-air round: normalize participating features, map to the
/// paired subcarrier, superpose through channel-inverted precoding with
/// additive complex Gaussian noise, then denormalize, restore the mean and
/// take the real part. `tx_pattern` is the participation the allocation was
/// built with (all-ones for the sparsity-unaware baseline). Average pooling
/// only. Resulting per-element error is Gaussian with variance
/// sigma^2 / (2 K^2 gamma).
FusionResult simulate_round(const FeatureTensor& features, const SparsityPattern& tx_pattern,
                            const Allocation& allocation, const ChannelMatrix& channels,
                            double noise_power, double mu, double sigma, std::uint64_t seed);

/// Sparsity-unaware baseline: voxels on subcarriers 1..V in order, every
/// agent transmitting on every one of them; the common SNR is the largest
/// level that satisfies every agent's budget.
Allocation naive_allocation(const ChannelMatrix& channels, double p_max, double noise_power,
                            int num_voxels);

/// Sparsity-aware but unoptimized baseline: sequential pairing, equal-SNR
/// power allocation.
Allocation vanilla_allocation(const SparsityPattern& pattern, const ChannelMatrix& channels,
                              double p_max, double noise_power);

/// Over-the-air aggregation latency in seconds; independent of K and P_max.
double airfusion_latency(std::int64_t num_nonsparse_voxels, int feature_dim, double b_sub_hz,
                         int num_subcarriers, LatencyModel model = LatencyModel::Parallel);

/// Orthogonal-access baseline latency: quantized payload b*L*|V_k| bits per
/// agent, subcarriers handed one at a time to the agent whose remaining
/// demand (payload over current Shannon rate) is largest, equal power split
/// per agent, final latency max_k payload_k / rate_k.
double digital_latency(const SparsityPattern& pattern, const ChannelMatrix& channels,
                       double p_max, double noise_power, int bits_per_coeff, int feature_dim,
                       double b_sub_hz);

}  // namespace airfusion
