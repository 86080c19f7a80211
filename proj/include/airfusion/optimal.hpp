// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "airfusion/types.hpp"

namespace airfusion {

/// One block of a partial subset-to-subset mapping: a class of homogeneous
/// groups whose signatures agree on every agent fixed so far, together with
/// the subcarrier set reserved for it. Image size always equals the total
/// voxel count of the class.
struct MappingBlock {
  std::vector<int> group_ids;     // indices into a HomogeneousPartition
  std::vector<int> subcarriers;   // ascending
  int voxel_count = 0;
};

struct SubsetMapping {
  int depth = 0;  // number of agents (in search order) already fixed
  std::vector<MappingBlock> blocks;
};

struct SolverStats {
  std::uint64_t nodes_visited = 0;    // root plus every node descended into
  std::uint64_t leaves_enumerated = 0;
  std::uint64_t nodes_pruned = 0;     // children generated but cut off
  double wall_seconds = 0.0;
};

/// Priority indicator psi(k): cost of agent k's locally optimal mapping, the
/// sum of its |V_k| cheapest subcarriers. Returned permutation lists agents
/// by descending psi, ties by ascending index.
std::vector<int> agent_priority_order(const SparsityPattern& pattern, const CostMatrix& costs);
double agent_priority_indicator(const SparsityPattern& pattern, const CostMatrix& costs,
                                int agent);

/// Lazily emits the children of a search node in ascending local objective
/// f_{d+1}. Each child splits every block by `agent`'s sparsity bit and picks
/// which subcarriers of the block image go to the non-sparse side; ranking
/// over the product of per-block choices is a best-first merge of per-block
/// ranked subset selections.
class ChildEnumerator {
 public:
  ChildEnumerator(const SubsetMapping& parent, const HomogeneousPartition& partition,
                  int agent, const CostMatrix& costs);
  ChildEnumerator(ChildEnumerator&&) noexcept;
  ChildEnumerator& operator=(ChildEnumerator&&) noexcept;
  ~ChildEnumerator();

  struct Child {
    SubsetMapping mapping;
    double local_objective = 0.0;  // f_{d+1}
  };

  /// Next unvisited child, or nullopt when exhausted. Emitted local
  /// objectives are non-decreasing (checked).
  std::optional<Child> next();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SolverOptions {
  bool prune = true;          // disable only to validate pruning soundness
  bool global_bound = false;  // extra cut vs the global best at every depth
};

struct OptimalResult {
  PairingMatrix pairing;   // over the (possibly dummy-augmented) voxel set
  double objective = 0.0;  // F*
  std::vector<double> best_path_objectives;  // f_1..f_K along the optimum path
  SubsetMapping best_mapping;                // depth-K mapping realized above
  SolverStats stats;
};

/// Depth-first search over the compact tree with best-child-first expansion,
/// the depth-1 stopping rule and per-subtree pruning. Requires a square
/// instance (augment dummies first). Always returns a global optimum.
OptimalResult dfs_optimal(const SparsityPattern& pattern, const CostMatrix& costs,
                          const SolverOptions& options = {});

/// Expand a depth-K mapping to a concrete pairing: within each block, voxels
/// in ascending index take image subcarriers in ascending index. Any other
/// within-block bijection gives the same objective.
PairingMatrix realize_mapping(const SubsetMapping& mapping, const HomogeneousPartition& partition,
                              int num_subcarriers);

/// Size of the compact solution space, M! / prod_q |H^q|!.
mpz_class compact_space_size(const HomogeneousPartition& partition, int num_subcarriers);

/// Full pipeline on a possibly non-square instance: augment dummies, solve,
/// drop dummy assignments, allocate power. Detailed result available through
/// `detail` when non-null.
Allocation optimal_voca_ppa(const SparsityPattern& pattern, const ChannelMatrix& channels,
                            double p_max, double noise_power,
                            OptimalResult* detail = nullptr);

}  // namespace airfusion
