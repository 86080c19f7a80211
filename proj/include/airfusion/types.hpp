// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace airfusion {

/// Internal invariant check; trips map to exit code 2 in the CLI.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

#define AF_CHECK(cond, msg)                                        \
  do {                                                             \
    if (!(cond)) throw ::airfusion::internal_error(msg);           \
  } while (0)

/// Minimal dense row-major matrix; all the solver state is small and regular
/// enough that nothing heavier is warranted.
template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, T init = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, init) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Mat: negative dimension");
  }

  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  bool operator==(const Mat&) const = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

/// Complex channel coefficients h_{k,m}, agents by rows, subcarriers by columns.
struct ChannelMatrix {
  Mat<std::complex<double>> gains;

  int num_agents() const { return gains.rows(); }
  int num_subcarriers() const { return gains.cols(); }
};

/// Binary agent-by-voxel occupancy. Columns at index >= num_real are
/// dummy voxels appended to square the assignment; they are all-zero and
/// their solver assignments are discarded downstream.
struct SparsityPattern {
  Mat<std::uint8_t> entries;
  int num_real = 0;  // columns below this index are real voxels

  int num_agents() const { return entries.rows(); }
  int num_voxels() const { return entries.cols(); }
  bool is_dummy(int v) const { return v >= num_real; }

  // Number of agents participating on voxel v.
  int column_sum(int v) const {
    int s = 0;
    for (int k = 0; k < entries.rows(); ++k) s += entries(k, v);
    return s;
  }
  // Number of non-sparse voxels |V_k| of agent k, over real columns only.
  int row_sum(int k) const {
    int s = 0;
    for (int v = 0; v < num_real; ++v) s += entries(k, v);
    return s;
  }
};

/// Channel-inversion costs c_{k,m} = N0 / |h_{k,m}|^2, in watts per unit
/// receive SNR.
struct CostMatrix {
  Mat<double> costs;
  double noise_power = 0.0;

  int num_agents() const { return costs.rows(); }
  int num_subcarriers() const { return costs.cols(); }
};

/// Voxels grouped by identical sparsity column. Signatures are K-bit
/// integers with agent k at bit k; group order is canonical (size
/// descending, then signature ascending) so downstream searches are
/// deterministic.
struct HomogeneousPartition {
  struct Group {
    std::uint64_t signature = 0;
    std::vector<int> voxels;  // ascending
  };
  std::vector<Group> groups;
  int num_agents = 0;

  int num_groups() const { return static_cast<int>(groups.size()); }
};

/// Injective voxel -> subcarrier assignment (Eqs. of the pairing constraints:
/// every voxel on exactly one subcarrier, subcarriers used at most once).
struct PairingMatrix {
  std::vector<int> to_subcarrier;  // size V, values in [0, M)
  int num_subcarriers = 0;

  int num_voxels() const { return static_cast<int>(to_subcarrier.size()); }
};

/// Solver output: pairing plus the common receive SNR and the per-agent
/// per-subcarrier transmit powers |p_{k,m}|^2 in watts. receive_snr is
/// +inf when no agent transmits anything (the unconstrained sentinel).
struct Allocation {
  PairingMatrix pairing;
  double receive_snr = 0.0;
  Mat<double> tx_power;
};

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace airfusion
