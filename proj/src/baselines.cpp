#include "efx/baselines.hpp"

#include <stdexcept>
#include <string>

#include "efx/violations.hpp"

namespace efx {

Allocation greedy_pick_sequence(const Instance& inst, const PickOrder& order) {
  const std::size_t m = inst.goods();
  if (order.size() != m) {
    throw std::invalid_argument("pick order has length " +
                                std::to_string(order.size()) + ", expected m = " +
                                std::to_string(m));
  }
  std::vector<bool> taken(m, false);
  Allocation alloc{std::vector<Agent>(m, 0)};
  for (Agent picker : order) {
    if (picker >= inst.agents()) {
      throw std::invalid_argument("pick order names agent " +
                                  std::to_string(picker + 1) + " outside 1.." +
                                  std::to_string(inst.agents()));
    }
    auto row = inst.row(picker);
    Good best = kNoGood;
    for (Good g = 0; g < m; ++g) {
      if (!taken[g] && (best == kNoGood || row[g] > row[best])) best = g;
    }
    taken[best] = true;
    alloc.owner[best] = picker;
  }
  return alloc;
}

PickOrder round_robin_order(std::size_t n, std::size_t m) {
  PickOrder order(m);
  for (std::size_t t = 0; t < m; ++t) order[t] = static_cast<Agent>(t % n);
  return order;
}

Allocation round_robin(const Instance& inst) {
  return greedy_pick_sequence(inst, round_robin_order(inst.agents(), inst.goods()));
}

Allocation n_plus_one_pick(const Instance& inst) {
  const std::size_t n = inst.agents();
  if (inst.goods() != n + 1) {
    throw std::invalid_argument("n_plus_one_pick needs m = n + 1 (n = " +
                                std::to_string(n) + ", m = " +
                                std::to_string(inst.goods()) + ")");
  }
  PickOrder order = round_robin_order(n, n);
  order.push_back(static_cast<Agent>(n - 1));
  Allocation alloc = greedy_pick_sequence(inst, order);
  if (!is_efx(inst, alloc)) {
    throw std::logic_error("n+1 picking sequence produced a non-EFX allocation");
  }
  return alloc;
}

Allocation welfare_max_allocation(const Instance& inst) {
  Allocation alloc{std::vector<Agent>(inst.goods(), 0)};
  for (Good g = 0; g < inst.goods(); ++g) {
    for (Agent i = 1; i < inst.agents(); ++i) {
      if (inst.value(i, g) > inst.value(alloc.owner[g], g)) alloc.owner[g] = i;
    }
  }
  return alloc;
}

}  // namespace efx
