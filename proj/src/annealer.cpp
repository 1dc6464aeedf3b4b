#include "efx/annealer.hpp"

#include <cmath>
#include <stdexcept>

namespace efx {

void AnnealParams::validate() const {
  if (!(t_initial > 0.0) || !(t_min > 0.0)) {
    throw std::invalid_argument("temperatures must be positive");
  }
  if (!(t_min < t_initial)) {
    throw std::invalid_argument("t_min must be below t_initial");
  }
  if (!(cooling > 0.0 && cooling < 1.0)) {
    throw std::invalid_argument("cooling must lie in (0, 1)");
  }
}

Proposal propose_neighbor(Rng& rng, const Allocation& alloc, std::size_t n) {
  if (n < 2 || alloc.goods() == 0) {
    throw std::invalid_argument("no neighbors exist with n < 2 or m = 0");
  }
  const auto good = static_cast<Good>(rng.below(alloc.goods()));
  // Draw among the n-1 non-owners and skip over the owner's slot.
  auto target = static_cast<Agent>(rng.below(n - 1));
  if (target >= alloc.owner[good]) ++target;
  return {good, target};
}

bool accept(Count delta, double temperature, Rng& rng) {
  if (delta <= 0) return true;
  return rng.uniform01() < std::exp(-static_cast<double>(delta) / temperature);
}

Allocation init_random_allocation(Rng& rng, std::size_t n, std::size_t m) {
  if (n < 1) throw std::invalid_argument("need at least one agent");
  Allocation a{std::vector<Agent>(m)};
  for (auto& o : a.owner) o = static_cast<Agent>(rng.below(n));
  return a;
}

double temperature_at_level(const AnnealParams& params, std::uint64_t levels) {
  double t = params.t_initial;
  for (std::uint64_t k = 0; k < levels; ++k) t *= params.cooling;
  return t;
}

namespace {

TrialResult solve_impl(const Instance& inst, const AnnealParams& params,
                       const Allocation* start) {
  params.validate();
  const auto clock_start = std::chrono::steady_clock::now();
  const std::size_t n = inst.agents();
  const std::size_t m = inst.goods();
  Rng rng(params.seed, Stream::annealer);

  auto finish = [&](TrialResult r) {
    r.elapsed = std::chrono::steady_clock::now() - clock_start;
    return r;
  };

  if (n == 1 || m == 0) {
    Allocation a = start ? *start : Allocation{std::vector<Agent>(m, 0)};
    check_allocation(inst, a);
    return finish({std::move(a), 0, 0, true, 0, {}});
  }

  ViolationState state(inst, start ? *start : init_random_allocation(rng, n, m));
  Allocation best = state.allocation();
  Count best_f = state.total();

  const std::uint64_t level_length = params.level_length(n, m);
  std::uint64_t steps = 0;
  std::uint64_t restarts = 0;

  while (true) {
    double temperature = params.t_initial;
    while (temperature > params.t_min && state.total() > 0) {
      for (std::uint64_t k = 0; k < level_length && state.total() > 0; ++k) {
        if (params.max_total_steps && steps >= *params.max_total_steps) {
          return finish({std::move(best), steps, restarts, false, best_f, {}});
        }
        const Proposal p = propose_neighbor(rng, state.allocation(), n);
        ++steps;
        const Count d = state.delta(p.good, p.target);
        if (accept(d, temperature, rng)) {
          state.commit(p.good, p.target);
          if (state.total() < best_f) {
            best_f = state.total();
            best = state.allocation();
          }
        }
      }
      temperature *= params.cooling;
    }
    if (state.total() == 0) {
      return finish({state.allocation(), steps, restarts, true, 0, {}});
    }
    ++restarts;
    state.reset(init_random_allocation(rng, n, m));
    if (state.total() < best_f) {
      best_f = state.total();
      best = state.allocation();
    }
  }
}

}  // namespace

TrialResult anneal_solve(const Instance& inst, const AnnealParams& params) {
  return solve_impl(inst, params, nullptr);
}

TrialResult anneal_solve(const Instance& inst, const AnnealParams& params,
                         const Allocation& start) {
  check_allocation(inst, start);
  return solve_impl(inst, params, &start);
}

}  // namespace efx
