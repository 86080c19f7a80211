// SPDX-License-Identifier: Apache-2.0
#include "airfusion/sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "airfusion/power.hpp"
#include "airfusion/rng.hpp"

namespace airfusion {

FeatureTensor generate_features(const SparsityPattern& pattern, int feature_dim,
                                std::uint64_t seed) {
  if (feature_dim < 1) throw std::invalid_argument("generate_features: feature_dim must be positive");
  FeatureTensor out;
  out.num_agents = pattern.num_agents();
  out.num_voxels = pattern.num_voxels();
  out.feature_dim = feature_dim;
  out.values.assign(static_cast<std::size_t>(out.num_agents) * out.num_voxels * feature_dim, 0.0);
  Rng rng(seed);
  for (int k = 0; k < out.num_agents; ++k)
    for (int v = 0; v < out.num_voxels; ++v) {
      if (!pattern.entries(k, v)) continue;
      for (int l = 0; l < feature_dim; ++l) out.at(k, v, l) = rng.normal();
    }
  return out;
}

Mat<double> fuse_ground_truth(const FeatureTensor& features, FusionMode mode) {
  Mat<double> truth(features.num_voxels, features.feature_dim, 0.0);
  for (int v = 0; v < features.num_voxels; ++v) {
    for (int l = 0; l < features.feature_dim; ++l) {
      if (mode == FusionMode::Average) {
        double sum = 0.0;
        for (int k = 0; k < features.num_agents; ++k) sum += features.at(k, v, l);
        truth(v, l) = sum / features.num_agents;
      } else {
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < features.num_agents; ++k) best = std::max(best, features.at(k, v, l));
        truth(v, l) = best;
      }
    }
  }
  return truth;
}

FusionResult simulate_round(const FeatureTensor& features, const SparsityPattern& tx_pattern,
                            const Allocation& allocation, const ChannelMatrix& channels,
                            double noise_power, double mu, double sigma, std::uint64_t seed) {
  const int num_agents = features.num_agents;
  const int num_voxels = allocation.pairing.num_voxels();
  const int feature_dim = features.feature_dim;
  if (num_voxels > features.num_voxels || num_agents != tx_pattern.num_agents())
    throw std::invalid_argument("simulate_round: dimension mismatch");
  if (!validate_pairing(allocation.pairing))
    throw std::invalid_argument("simulate_round: infeasible pairing");
  if (!(sigma > 0.0)) throw std::invalid_argument("simulate_round: sigma must be positive");
  const double gamma = allocation.receive_snr;
  if (!(gamma > 0.0)) throw std::invalid_argument("simulate_round: receive SNR must be positive");
  const bool noiseless = std::isinf(gamma);
  if (!noiseless && !(noise_power > 0.0))
    throw std::invalid_argument("simulate_round: noise power must be positive");

  FusionResult result;
  result.truth = fuse_ground_truth(features, FusionMode::Average);
  result.estimate = Mat<double>(num_voxels, feature_dim, 0.0);
  result.per_voxel_mse.assign(num_voxels, 0.0);

  Rng rng(seed);
  const double rx_amp = noiseless ? 1.0 : std::sqrt(noise_power * gamma);

  for (int v = 0; v < num_voxels; ++v) {
    const int m = allocation.pairing.to_subcarrier[v];
    int participants = 0;
    for (int k = 0; k < num_agents; ++k) participants += tx_pattern.entries(k, v);
    const double mean_restore = mu * participants / num_agents;

    double voxel_sq_err = 0.0;
    for (int l = 0; l < feature_dim; ++l) {
      std::complex<double> received{0.0, 0.0};
      for (int k = 0; k < num_agents; ++k) {
        if (!tx_pattern.entries(k, v)) continue;
        const double normalized = (features.at(k, v, l) - mu) / sigma;
        if (noiseless) {
          received += normalized;
        } else {
          // Channel-inverted precoding, propagated through the channel.
          const std::complex<double> h = channels.gains(k, m);
          const std::complex<double> precoder = rx_amp / h;
          received += h * precoder * normalized;
        }
      }
      if (!noiseless) received += rng.cgauss(noise_power);

      const double estimate = sigma * received.real() / (num_agents * rx_amp) + mean_restore;
      result.estimate(v, l) = estimate;
      const double err = estimate - result.truth(v, l);
      voxel_sq_err += err * err;
    }
    result.per_voxel_mse[v] = voxel_sq_err / feature_dim;
  }
  result.mse = std::accumulate(result.per_voxel_mse.begin(), result.per_voxel_mse.end(), 0.0) /
               num_voxels;
  return result;
}

Allocation naive_allocation(const ChannelMatrix& channels, double p_max, double noise_power,
                            int num_voxels) {
  const int num_agents = channels.num_agents();
  const int num_subcarriers = channels.num_subcarriers();
  if (num_voxels > num_subcarriers)
    throw std::invalid_argument("naive_allocation: more voxels than subcarriers");

  SparsityPattern everyone;
  everyone.entries = Mat<std::uint8_t>(num_agents, num_voxels, 1);
  everyone.num_real = num_voxels;

  PairingMatrix pairing;
  pairing.num_subcarriers = num_subcarriers;
  pairing.to_subcarrier.resize(num_voxels);
  std::iota(pairing.to_subcarrier.begin(), pairing.to_subcarrier.end(), 0);

  return allocate_for_pairing(pairing, everyone, channels, p_max, noise_power);
}

Allocation vanilla_allocation(const SparsityPattern& pattern, const ChannelMatrix& channels,
                              double p_max, double noise_power) {
  const int num_voxels = pattern.num_voxels();
  if (num_voxels > channels.num_subcarriers())
    throw std::invalid_argument("vanilla_allocation: more voxels than subcarriers");
  PairingMatrix pairing;
  pairing.num_subcarriers = channels.num_subcarriers();
  pairing.to_subcarrier.resize(num_voxels);
  std::iota(pairing.to_subcarrier.begin(), pairing.to_subcarrier.end(), 0);
  return allocate_for_pairing(pairing, pattern, channels, p_max, noise_power);
}

double airfusion_latency(std::int64_t num_nonsparse_voxels, int feature_dim, double b_sub_hz,
                         int num_subcarriers, LatencyModel model) {
  if (num_nonsparse_voxels < 0 || feature_dim < 1 || !(b_sub_hz > 0.0) || num_subcarriers < 1)
    throw std::invalid_argument("airfusion_latency: invalid inputs");
  if (num_nonsparse_voxels == 0) return 0.0;
  if (model == LatencyModel::Literal)
    return static_cast<double>(feature_dim) * num_nonsparse_voxels / b_sub_hz;
  const std::int64_t blocks = (num_nonsparse_voxels + num_subcarriers - 1) / num_subcarriers;
  return static_cast<double>(blocks) * feature_dim / b_sub_hz;
}

double digital_latency(const SparsityPattern& pattern, const ChannelMatrix& channels,
                       double p_max, double noise_power, int bits_per_coeff, int feature_dim,
                       double b_sub_hz) {
  if (bits_per_coeff < 2 || bits_per_coeff > 5)
    throw std::invalid_argument("digital_latency: bits_per_coeff must be in [2, 5]");
  const int num_agents = channels.num_agents();
  const int num_subcarriers = channels.num_subcarriers();

  std::vector<double> payload_bits(num_agents, 0.0);
  for (int k = 0; k < num_agents; ++k)
    payload_bits[k] = static_cast<double>(bits_per_coeff) * feature_dim * pattern.row_sum(k);

  std::vector<std::vector<int>> assigned(num_agents);
  const auto rate_of = [&](int k) {
    if (assigned[k].empty()) return 0.0;
    const double per_subcarrier_power = p_max / assigned[k].size();
    double rate = 0.0;
    for (const int m : assigned[k])
      rate += b_sub_hz * std::log2(1.0 + per_subcarrier_power * std::norm(channels.gains(k, m)) /
                                             noise_power);
    return rate;
  };

  // Each subcarrier goes to the agent whose demand (payload over current
  // rate; infinite while unserved) is largest, ties resolved by the better
  // channel on this subcarrier, then by index.
  std::vector<double> rate(num_agents, 0.0);
  for (int m = 0; m < num_subcarriers; ++m) {
    int pick = -1;
    double pick_demand = -1.0;
    double pick_gain = -1.0;
    for (int k = 0; k < num_agents; ++k) {
      if (payload_bits[k] <= 0.0) continue;
      const double demand = rate[k] > 0.0 ? payload_bits[k] / rate[k]
                                          : std::numeric_limits<double>::infinity();
      const double gain = std::norm(channels.gains(k, m));
      if (demand > pick_demand || (demand == pick_demand && gain > pick_gain)) {
        pick = k;
        pick_demand = demand;
        pick_gain = gain;
      }
    }
    if (pick < 0) break;  // nobody has anything to send
    assigned[pick].push_back(m);
    rate[pick] = rate_of(pick);
  }

  double latency = 0.0;
  for (int k = 0; k < num_agents; ++k) {
    if (payload_bits[k] <= 0.0) continue;
    AF_CHECK(!assigned[k].empty(),
             "digital_latency: demanding agent left without subcarriers (need M >= K)");
    latency = std::max(latency, payload_bits[k] / rate[k]);
  }
  return latency;
}

}  // namespace airfusion
