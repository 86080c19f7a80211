// SPDX-License-Identifier: Apache-2.0
#include "airfusion/optimal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include "airfusion/model.hpp"
#include "airfusion/power.hpp"

namespace airfusion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Ranked enumeration of size-`take` subsets of {0..n-1} by ascending total
/// weight, weights sorted ascending. States are index vectors; successors
/// bump one index, a visited set removes duplicates.
class RankedSubsets {
 public:
  RankedSubsets(std::vector<double> weights, int take)
      : weights_(std::move(weights)), take_(take) {
    State first;
    first.idx.resize(take_);
    std::iota(first.idx.begin(), first.idx.end(), 0);
    first.sum = 0.0;
    for (const int i : first.idx) first.sum += weights_[i];
    frontier_.push(first);
    seen_.insert(first.idx);
  }

  bool materialize(std::size_t rank) {
    while (emitted_.size() <= rank) {
      if (frontier_.empty()) return false;
      State cur = frontier_.top();
      frontier_.pop();
      const int n = static_cast<int>(weights_.size());
      for (int t = 0; t < take_; ++t) {
        const int limit = (t + 1 < take_) ? cur.idx[t + 1] : n;
        if (cur.idx[t] + 1 >= limit) continue;
        State next = cur;
        next.idx[t] += 1;
        next.sum = cur.sum - weights_[cur.idx[t]] + weights_[next.idx[t]];
        if (seen_.insert(next.idx).second) frontier_.push(std::move(next));
      }
      emitted_.push_back(std::move(cur));
    }
    return true;
  }

  double value(std::size_t rank) const { return emitted_[rank].sum; }
  const std::vector<int>& selection(std::size_t rank) const { return emitted_[rank].idx; }

 private:
  struct State {
    double sum = 0.0;
    std::vector<int> idx;  // strictly increasing positions
  };
  struct MinOrder {
    bool operator()(const State& a, const State& b) const {
      if (a.sum != b.sum) return a.sum > b.sum;
      return a.idx > b.idx;
    }
  };

  std::vector<double> weights_;
  int take_;
  std::vector<State> emitted_;
  std::priority_queue<State, std::vector<State>, MinOrder> frontier_;
  std::set<std::vector<int>> seen_;
};

}  // namespace

struct ChildEnumerator::Impl {
  struct Choice {
    int parent_block = 0;
    std::vector<int> groups_on, groups_off;  // split by the agent's bit
    int take = 0;                            // image size of the "on" side
    std::vector<int> sorted_subcarriers;     // parent image, cost-ascending
    RankedSubsets ranked;
  };

  std::vector<MappingBlock> parent_blocks;
  int child_depth = 0;
  double fixed_cost = 0.0;  // blocks fully on the non-sparse side
  std::vector<Choice> choices;  // parent-block order; other blocks pass through

  struct ProductState {
    double total = 0.0;
    std::vector<int> ranks;
  };
  struct MinOrder {
    bool operator()(const ProductState& a, const ProductState& b) const {
      if (a.total != b.total) return a.total > b.total;
      return a.ranks > b.ranks;
    }
  };
  std::priority_queue<ProductState, std::vector<ProductState>, MinOrder> frontier;
  std::set<std::vector<int>> seen;
  bool single_emitted = false;  // for the no-choice case
  double last_emitted = -kInf;

  SubsetMapping build_child(const std::vector<int>& ranks) const {
    SubsetMapping child;
    child.depth = child_depth;
    std::size_t choice_cursor = 0;
    for (std::size_t b = 0; b < parent_blocks.size(); ++b) {
      if (choice_cursor < choices.size() &&
          choices[choice_cursor].parent_block == static_cast<int>(b)) {
        const Choice& ch = choices[choice_cursor];
        const std::vector<int>& picks = ch.ranked.selection(ranks[choice_cursor]);
        MappingBlock on, off;
        on.group_ids = ch.groups_on;
        off.group_ids = ch.groups_off;
        std::vector<char> taken(ch.sorted_subcarriers.size(), 0);
        for (const int pos : picks) {
          on.subcarriers.push_back(ch.sorted_subcarriers[pos]);
          taken[pos] = 1;
        }
        for (std::size_t pos = 0; pos < ch.sorted_subcarriers.size(); ++pos)
          if (!taken[pos]) off.subcarriers.push_back(ch.sorted_subcarriers[pos]);
        std::sort(on.subcarriers.begin(), on.subcarriers.end());
        std::sort(off.subcarriers.begin(), off.subcarriers.end());
        on.voxel_count = static_cast<int>(on.subcarriers.size());
        off.voxel_count = static_cast<int>(off.subcarriers.size());
        child.blocks.push_back(std::move(on));
        child.blocks.push_back(std::move(off));
        ++choice_cursor;
      } else {
        child.blocks.push_back(parent_blocks[b]);
      }
    }
    return child;
  }
};

ChildEnumerator::ChildEnumerator(const SubsetMapping& parent,
                                 const HomogeneousPartition& partition, int agent,
                                 const CostMatrix& costs)
    : impl_(std::make_unique<Impl>()) {
  impl_->parent_blocks = parent.blocks;
  impl_->child_depth = parent.depth + 1;

  const auto bit = [&](int group_id) {
    return (partition.groups[group_id].signature >> agent) & 1u;
  };

  for (std::size_t b = 0; b < parent.blocks.size(); ++b) {
    const MappingBlock& block = parent.blocks[b];
    std::vector<int> on, off;
    int on_voxels = 0;
    for (const int g : block.group_ids) {
      if (bit(g)) {
        on.push_back(g);
        on_voxels += static_cast<int>(partition.groups[g].voxels.size());
      } else {
        off.push_back(g);
      }
    }
    if (on.empty()) {
      continue;  // fully sparse: passes through at zero cost
    } else if (off.empty()) {
      for (const int m : block.subcarriers) impl_->fixed_cost += costs.costs(agent, m);
    } else {
      Impl::Choice choice{
          static_cast<int>(b), std::move(on), std::move(off), on_voxels,
          block.subcarriers,
          RankedSubsets({}, 0)};
      std::sort(choice.sorted_subcarriers.begin(), choice.sorted_subcarriers.end(),
                [&](int lhs, int rhs) {
                  const double cl = costs.costs(agent, lhs);
                  const double cr = costs.costs(agent, rhs);
                  if (cl != cr) return cl < cr;
                  return lhs < rhs;
                });
      std::vector<double> weights(choice.sorted_subcarriers.size());
      for (std::size_t i = 0; i < weights.size(); ++i)
        weights[i] = costs.costs(agent, choice.sorted_subcarriers[i]);
      choice.ranked = RankedSubsets(std::move(weights), choice.take);
      impl_->choices.push_back(std::move(choice));
    }
  }

  if (!impl_->choices.empty()) {
    Impl::ProductState first;
    first.ranks.assign(impl_->choices.size(), 0);
    first.total = 0.0;
    for (auto& ch : impl_->choices) {
      AF_CHECK(ch.ranked.materialize(0), "ChildEnumerator: empty ranked selection");
      first.total += ch.ranked.value(0);
    }
    impl_->frontier.push(first);
    impl_->seen.insert(first.ranks);
  }
}

ChildEnumerator::ChildEnumerator(ChildEnumerator&&) noexcept = default;
ChildEnumerator& ChildEnumerator::operator=(ChildEnumerator&&) noexcept = default;
ChildEnumerator::~ChildEnumerator() = default;

std::optional<ChildEnumerator::Child> ChildEnumerator::next() {
  Impl& im = *impl_;
  if (im.choices.empty()) {
    if (im.single_emitted) return std::nullopt;
    im.single_emitted = true;
    Child child{im.build_child({}), im.fixed_cost};
    im.last_emitted = child.local_objective;
    return child;
  }

  if (im.frontier.empty()) return std::nullopt;
  Impl::ProductState cur = im.frontier.top();
  im.frontier.pop();

  for (std::size_t c = 0; c < im.choices.size(); ++c) {
    if (!im.choices[c].ranked.materialize(cur.ranks[c] + 1)) continue;
    Impl::ProductState next = cur;
    next.ranks[c] += 1;
    next.total = cur.total - im.choices[c].ranked.value(cur.ranks[c]) +
                 im.choices[c].ranked.value(next.ranks[c]);
    if (im.seen.insert(next.ranks).second) im.frontier.push(std::move(next));
  }

  Child child{im.build_child(cur.ranks), im.fixed_cost + cur.total};
  AF_CHECK(child.local_objective >= im.last_emitted - 1e-12 * std::abs(im.last_emitted) - 1e-300,
           "ChildEnumerator: local objectives must be non-decreasing");
  im.last_emitted = child.local_objective;
  return child;
}

double agent_priority_indicator(const SparsityPattern& pattern, const CostMatrix& costs,
                                int agent) {
  const int demand = pattern.row_sum(agent);
  if (demand == 0) return 0.0;
  std::vector<double> row(costs.num_subcarriers());
  for (int m = 0; m < costs.num_subcarriers(); ++m) row[m] = costs.costs(agent, m);
  std::nth_element(row.begin(), row.begin() + demand, row.end());
  return std::accumulate(row.begin(), row.begin() + demand, 0.0);
}

std::vector<int> agent_priority_order(const SparsityPattern& pattern, const CostMatrix& costs) {
  const int num_agents = pattern.num_agents();
  std::vector<double> psi(num_agents);
  for (int k = 0; k < num_agents; ++k) psi[k] = agent_priority_indicator(pattern, costs, k);
  std::vector<int> order(num_agents);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return psi[a] > psi[b]; });
  return order;
}

PairingMatrix realize_mapping(const SubsetMapping& mapping, const HomogeneousPartition& partition,
                              int num_subcarriers) {
  PairingMatrix pairing;
  pairing.num_subcarriers = num_subcarriers;
  int num_voxels = 0;
  for (const auto& group : partition.groups) num_voxels += static_cast<int>(group.voxels.size());
  pairing.to_subcarrier.assign(num_voxels, -1);

  for (const auto& block : mapping.blocks) {
    std::vector<int> voxels;
    for (const int g : block.group_ids)
      voxels.insert(voxels.end(), partition.groups[g].voxels.begin(),
                    partition.groups[g].voxels.end());
    std::sort(voxels.begin(), voxels.end());
    AF_CHECK(voxels.size() == block.subcarriers.size(),
             "realize_mapping: block image size mismatch");
    for (std::size_t i = 0; i < voxels.size(); ++i)
      pairing.to_subcarrier[voxels[i]] = block.subcarriers[i];
  }
  for (const int m : pairing.to_subcarrier)
    AF_CHECK(m >= 0, "realize_mapping: incomplete mapping");
  return pairing;
}

mpz_class compact_space_size(const HomogeneousPartition& partition, int num_subcarriers) {
  mpz_class size;
  mpz_fac_ui(size.get_mpz_t(), static_cast<unsigned long>(num_subcarriers));
  for (const auto& group : partition.groups) {
    mpz_class gf;
    mpz_fac_ui(gf.get_mpz_t(), static_cast<unsigned long>(group.voxels.size()));
    size /= gf;
  }
  return size;
}

OptimalResult dfs_optimal(const SparsityPattern& pattern, const CostMatrix& costs,
                          const SolverOptions& options) {
  const int num_agents = pattern.num_agents();
  const int num_voxels = pattern.num_voxels();
  const int num_subcarriers = costs.num_subcarriers();
  if (num_voxels != num_subcarriers)
    throw std::invalid_argument("dfs_optimal: requires a square instance (augment dummies first)");
  if (num_agents < 1) throw std::invalid_argument("dfs_optimal: need at least one agent");

  const auto t0 = std::chrono::steady_clock::now();
  const HomogeneousPartition partition = homogeneous_partition(pattern);
  const std::vector<int> order = agent_priority_order(pattern, costs);

  struct Frame {
    SubsetMapping mapping;
    double local = 0.0;       // f_{depth}; unused at the root
    double subtree_best = kInf;
    std::optional<ChildEnumerator> children;
  };

  SubsetMapping root;
  root.depth = 0;
  MappingBlock all;
  all.group_ids.resize(partition.num_groups());
  std::iota(all.group_ids.begin(), all.group_ids.end(), 0);
  all.subcarriers.resize(num_subcarriers);
  std::iota(all.subcarriers.begin(), all.subcarriers.end(), 0);
  all.voxel_count = num_voxels;
  root.blocks.push_back(std::move(all));

  OptimalResult result;
  result.stats.nodes_visited = 1;
  double best_objective = kInf;
  SubsetMapping best_mapping;
  std::vector<double> best_path;

  std::vector<Frame> stack;
  stack.reserve(num_agents + 1);
  stack.push_back(Frame{std::move(root), 0.0, kInf, std::nullopt});
  std::vector<double> path(num_agents + 1, 0.0);

  while (!stack.empty()) {
    Frame& top = stack.back();
    const int depth = top.mapping.depth;

    if (depth == num_agents) {
      result.stats.leaves_enumerated += 1;
      double leaf_objective = 0.0;
      for (int d = 1; d <= num_agents; ++d) leaf_objective = std::max(leaf_objective, path[d]);
      if (leaf_objective < best_objective) {
        best_objective = leaf_objective;
        best_mapping = top.mapping;
        best_path.assign(path.begin() + 1, path.begin() + num_agents + 1);
      }
      // Every active ancestor learns this leaf's subtree objective: the
      // running max of the local values below it.
      double suffix = 0.0;
      for (int d = num_agents - 1; d >= 0; --d) {
        suffix = std::max(suffix, path[d + 1]);
        stack[d].subtree_best = std::min(stack[d].subtree_best, suffix);
      }
      stack.pop_back();
      if (options.prune) {
        // Re-check the stopping/pruning conditions against every ancestor:
        // once an active child's local objective reaches its parent's best
        // subtree value (or the global best, which every local objective
        // lower-bounds), it cannot lead anywhere better, so the search
        // unwinds to the shallowest such parent. At the root this is the
        // depth-1 stopping rule checked on a best-solution update.
        const double global = options.global_bound ? best_objective : kInf;
        for (std::size_t d = 0; d + 1 < stack.size(); ++d) {
          if (path[d + 1] >= std::min(stack[d].subtree_best, d == 0 ? best_objective : global)) {
            stack.resize(d + 1);
            break;
          }
        }
      }
      continue;
    }

    if (!top.children)
      top.children.emplace(top.mapping, partition, order[depth], costs);
    std::optional<ChildEnumerator::Child> child = top.children->next();
    if (!child) {
      stack.pop_back();
      continue;
    }
    // Children arrive in ascending local objective, so once one reaches the
    // best subtree value seen under this node (or the global best), it and
    // every remaining sibling are out. At the root this is the stopping
    // check on a new depth-1 node.
    const double global_cut =
        (options.global_bound || depth == 0) ? best_objective : kInf;
    if (options.prune &&
        child->local_objective >= std::min(top.subtree_best, global_cut)) {
      result.stats.nodes_pruned += 1;
      stack.pop_back();
      continue;
    }
    result.stats.nodes_visited += 1;
    path[depth + 1] = child->local_objective;
    stack.push_back(Frame{std::move(child->mapping), child->local_objective, kInf, std::nullopt});
  }

  AF_CHECK(std::isfinite(best_objective), "dfs_optimal: search terminated without a solution");
  result.best_path_objectives = std::move(best_path);
  result.best_mapping = best_mapping;
  result.pairing = realize_mapping(best_mapping, partition, num_subcarriers);
  // Report the canonical-order evaluation of the realized pairing; the
  // incremental tree sums agree with it up to rounding.
  result.objective = objective_F(result.pairing, pattern, costs).total;
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

Allocation optimal_voca_ppa(const SparsityPattern& pattern, const ChannelMatrix& channels,
                            double p_max, double noise_power, OptimalResult* detail) {
  const CostMatrix costs = cost_matrix(channels, noise_power);
  const SparsityPattern squared = augment_dummy_voxels(pattern, channels.num_subcarriers());
  OptimalResult result = dfs_optimal(squared, costs);

  PairingMatrix real_pairing;
  real_pairing.num_subcarriers = result.pairing.num_subcarriers;
  real_pairing.to_subcarrier.assign(result.pairing.to_subcarrier.begin(),
                                    result.pairing.to_subcarrier.begin() + pattern.num_voxels());
  Allocation alloc =
      allocate_for_pairing(real_pairing, pattern, channels, p_max, noise_power);
  if (detail) *detail = std::move(result);
  return alloc;
}

}  // namespace airfusion
