#pragma once

// Picking-sequence baselines and the welfare-maximizing warm start.

#include <vector>

#include "efx/core.hpp"

namespace efx {

/// Who picks at each turn; length m.
using PickOrder = std::vector<Agent>;

/// Each named agent in turn takes its most valued remaining good (lowest
/// good index on ties). Throws std::invalid_argument on length mismatch or
/// an out-of-range agent.
Allocation greedy_pick_sequence(const Instance& inst, const PickOrder& order);

/// Order 0, 1, ..., n-1, 0, 1, ... truncated to m.
PickOrder round_robin_order(std::size_t n, std::size_t m);
Allocation round_robin(const Instance& inst);

/// For m = n + 1: order 0, 1, ..., n-1, n-1. The result is always EFX; a
/// std::logic_error is raised if that ever fails to hold.
Allocation n_plus_one_pick(const Instance& inst);

/// Each good to an agent valuing it most (lowest agent index on ties).
Allocation welfare_max_allocation(const Instance& inst);

}  // namespace efx
