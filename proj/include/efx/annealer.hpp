#pragma once

// Simulated annealing on the EFX violation count with the single-transfer
// neighborhood: random restarts, geometric cooling, Metropolis acceptance.

#include <chrono>
#include <cstdint>
#include <optional>
#include <utility>

#include "efx/core.hpp"
#include "efx/rng.hpp"
#include "efx/violations.hpp"

namespace efx {

struct AnnealParams {
  double t_initial = 5.0;
  double t_min = 0.0001;
  /// Proposals per temperature level; 0 means 100 * n * m.
  std::uint64_t steps_per_level = 0;
  double cooling = 0.99;
  /// Total proposal budget across restarts; nullopt runs until solved.
  std::optional<std::uint64_t> max_total_steps;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on t_min >= t_initial, cooling outside
  /// (0,1), or nonpositive temperatures.
  void validate() const;

  std::uint64_t level_length(std::size_t n, std::size_t m) const {
    return steps_per_level != 0 ? steps_per_level
                                : std::uint64_t{100} * n * m;
  }
};

struct TrialResult {
  Allocation allocation;
  std::uint64_t steps = 0;     // proposals generated, all restarts
  std::uint64_t restarts = 0;  // re-initializations after a cold schedule
  bool solved = false;
  Count violations = 0;        // f(allocation)
  std::chrono::nanoseconds elapsed{0};
};

struct Proposal {
  Good good;
  Agent target;
};

/// Uniform good, then a uniform agent other than its owner. Two draws.
/// Throws std::invalid_argument if n < 2 or m == 0.
Proposal propose_neighbor(Rng& rng, const Allocation& alloc, std::size_t n);

/// Metropolis rule: delta <= 0 always accepted (no draw consumed), otherwise
/// accepted iff uniform01() < exp(-delta / temperature).
bool accept(Count delta, double temperature, Rng& rng);

Allocation init_random_allocation(Rng& rng, std::size_t n, std::size_t m);

/// Temperature after `levels` cooling steps.
double temperature_at_level(const AnnealParams& params, std::uint64_t levels);

/// Runs the annealer from a uniform random allocation.
TrialResult anneal_solve(const Instance& inst, const AnnealParams& params);

/// As anneal_solve, but the first attempt starts from `start`; restarts draw
/// fresh random allocations.
TrialResult anneal_solve(const Instance& inst, const AnnealParams& params,
                         const Allocation& start);

}  // namespace efx
