// SPDX-License-Identifier: Apache-2.0
#include "airfusion/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "airfusion/model.hpp"
#include "airfusion/optimal.hpp"

namespace airfusion {

namespace {

// Self-contained max-linear objective, kept separate from power-alloc. Costs
// are accumulated in ascending subcarrier order, the project-wide canonical
// order, so equal-by-theory values are equal bitwise.
double evaluate(const std::vector<int>& to_subcarrier, const SparsityPattern& pattern,
                const CostMatrix& costs) {
  const int num_subcarriers = costs.num_subcarriers();
  std::vector<int> voxel_on(num_subcarriers, -1);
  for (int v = 0; v < static_cast<int>(to_subcarrier.size()); ++v)
    voxel_on[to_subcarrier[v]] = v;
  double worst = 0.0;
  for (int k = 0; k < pattern.num_agents(); ++k) {
    double total = 0.0;
    for (int m = 0; m < num_subcarriers; ++m) {
      const int v = voxel_on[m];
      if (v >= 0 && pattern.entries(k, v)) total += costs.costs(k, m);
    }
    worst = std::max(worst, total);
  }
  return worst;
}

}  // namespace

OracleResult brute_force_permutations(const SparsityPattern& pattern, const CostMatrix& costs) {
  const int num_voxels = pattern.num_voxels();
  const int num_subcarriers = costs.num_subcarriers();
  if (num_voxels != num_subcarriers)
    throw std::invalid_argument("brute_force_permutations: requires a square instance");
  if (num_voxels > 8)
    throw std::invalid_argument("brute_force_permutations: instance too large (M = V <= 8)");

  std::vector<int> assignment(num_voxels);
  std::iota(assignment.begin(), assignment.end(), 0);

  OracleResult result;
  result.best_objective = std::numeric_limits<double>::infinity();
  do {
    result.enumerated += 1;
    const double objective = evaluate(assignment, pattern, costs);
    if (objective < result.best_objective) {  // strict keeps the lexicographically first argmin
      result.best_objective = objective;
      result.best_pairing.to_subcarrier = assignment;
    }
  } while (std::next_permutation(assignment.begin(), assignment.end()));
  result.best_pairing.num_subcarriers = num_subcarriers;
  return result;
}

OracleResult brute_force_compact(const SparsityPattern& pattern, const CostMatrix& costs) {
  const int num_voxels = pattern.num_voxels();
  const int num_subcarriers = costs.num_subcarriers();
  if (num_voxels != num_subcarriers)
    throw std::invalid_argument("brute_force_compact: requires a square instance");

  const HomogeneousPartition partition = homogeneous_partition(pattern);
  const mpz_class space = compact_space_size(partition, num_subcarriers);
  if (space > 1000000)
    throw std::invalid_argument("brute_force_compact: compact space exceeds the 1e6 guard");

  OracleResult result;
  result.best_objective = std::numeric_limits<double>::infinity();

  // Recursively hand each group, in canonical order, every subset of the
  // still-free subcarriers of matching size; realize voxels ascending.
  std::vector<int> assignment(num_voxels, -1);
  std::vector<char> used(num_subcarriers, 0);

  const auto assign_group = [&](int group_index, const std::vector<int>& subcarriers) {
    const auto& voxels = partition.groups[group_index].voxels;
    for (std::size_t i = 0; i < voxels.size(); ++i) assignment[voxels[i]] = subcarriers[i];
  };

  // Enumerate size-r subsets of the free subcarriers in ascending order.
  auto recurse = [&](auto&& self, int group_index) -> void {
    if (group_index == partition.num_groups()) {
      result.enumerated += 1;
      const double objective = evaluate(assignment, pattern, costs);
      if (objective < result.best_objective) {
        result.best_objective = objective;
        result.best_pairing.to_subcarrier = assignment;
      }
      return;
    }
    const int need = static_cast<int>(partition.groups[group_index].voxels.size());
    std::vector<int> free_list;
    for (int m = 0; m < num_subcarriers; ++m)
      if (!used[m]) free_list.push_back(m);

    std::vector<int> pick(need);
    auto combos = [&](auto&& self2, int start, int taken) -> void {
      if (taken == need) {
        for (const int m : pick) used[m] = 1;
        assign_group(group_index, pick);
        self(self, group_index + 1);
        for (const int m : pick) used[m] = 0;
        return;
      }
      for (int i = start; i <= static_cast<int>(free_list.size()) - (need - taken); ++i) {
        pick[taken] = free_list[i];
        self2(self2, i + 1, taken + 1);
      }
    };
    combos(combos, 0, 0);
  };
  recurse(recurse, 0);

  result.best_pairing.num_subcarriers = num_subcarriers;
  AF_CHECK(mpz_class(static_cast<unsigned long>(result.enumerated)) == space,
           "brute_force_compact: enumeration count disagrees with the space size");
  return result;
}

}  // namespace airfusion
