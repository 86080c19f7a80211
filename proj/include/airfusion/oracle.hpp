// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "airfusion/types.hpp"

namespace airfusion {

struct OracleResult {
  double best_objective = 0.0;
  PairingMatrix best_pairing;
  std::uint64_t enumerated = 0;
};

/// Evaluates every voxel-to-subcarrier bijection and keeps the minimum (ties
/// resolved to the lexicographically smallest assignment). Deliberately does
/// its own objective arithmetic so it stays independent of the solver stack.
/// Guarded to M = V <= 8.
OracleResult brute_force_permutations(const SparsityPattern& pattern, const CostMatrix& costs);

/// Enumerates every subset-to-subset mapping over homogeneous groups,
/// realizing one representative bijection per mapping. Guarded to compact
/// spaces of at most 10^6 mappings.
OracleResult brute_force_compact(const SparsityPattern& pattern, const CostMatrix& costs);

}  // namespace airfusion
