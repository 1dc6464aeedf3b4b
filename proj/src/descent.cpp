#include "efx/descent.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace efx {

IdenticalInstance::IdenticalInstance(std::size_t n, std::vector<Value> weights,
                                     Value scale)
    : n_(n), w_(std::move(weights)), scale_(scale) {
  if (n_ < 1) throw InvalidInstance("instance needs at least one agent");
  for (std::size_t g = 0; g < w_.size(); ++g) {
    if (w_[g] <= 0) {
      throw InvalidInstance("good " + std::to_string(g + 1) +
                            " has nonpositive common value; descent needs "
                            "w_g > 0");
    }
  }
  total_ = std::accumulate(w_.begin(), w_.end(), Value{0});
  lift();  // runs the overflow guard
}

IdenticalInstance IdenticalInstance::from_instance(const Instance& inst) {
  auto first = inst.row(0);
  for (Agent i = 1; i < inst.agents(); ++i) {
    if (!std::ranges::equal(inst.row(i), first)) {
      throw InvalidInstance("valuations are not identical: row " +
                            std::to_string(i + 1) + " differs from row 1");
    }
  }
  return IdenticalInstance(inst.agents(),
                           std::vector<Value>(first.begin(), first.end()),
                           inst.scale());
}

Instance IdenticalInstance::lift() const {
  std::vector<Value> values;
  values.reserve(n_ * w_.size());
  for (std::size_t i = 0; i < n_; ++i) values.insert(values.end(), w_.begin(), w_.end());
  return Instance(n_, w_.size(), std::move(values), scale_);
}

std::vector<Value> bundle_values(const IdenticalInstance& inst,
                                 const Allocation& alloc) {
  if (alloc.goods() != inst.goods()) {
    throw InvalidInstance("allocation size does not match instance");
  }
  std::vector<Value> y(inst.agents(), 0);
  for (Good g = 0; g < alloc.goods(); ++g) {
    if (alloc.owner[g] >= inst.agents()) throw InvalidInstance("owner out of range");
    y[alloc.owner[g]] += inst.weight(g);
  }
  return y;
}

Potential potential_phi(const IdenticalInstance& inst, const Allocation& alloc) {
  const auto y = bundle_values(inst, alloc);
  const Wide n = static_cast<Wide>(inst.agents());
  Potential phi{0, inst.agents()};
  for (Value yi : y) {
    const Wide dev = n * yi - inst.total();
    phi.scaled += dev * dev;
  }
  return phi;
}

Wide delta_phi(Value y_receiver, Value y_holder, Value w) {
  return Wide{2} * w * (Wide{w} - (Wide{y_holder} - y_receiver));
}

std::optional<Transfer> find_violating_transfer(const IdenticalInstance& inst,
                                                const Allocation& alloc,
                                                const std::vector<Value>& y) {
  const std::size_t n = inst.agents();
  if (n < 2) return std::nullopt;
  const auto receiver = static_cast<Agent>(
      std::ranges::min_element(y) - y.begin());

  // Cheapest good per holder (lowest index among equal values).
  std::vector<Good> cheapest(n, kNoGood);
  for (Good g = 0; g < alloc.goods(); ++g) {
    Good& c = cheapest[alloc.owner[g]];
    if (c == kNoGood || inst.weight(g) < inst.weight(c)) c = g;
  }

  // Any violation (i, j, g) implies one with the poorest receiver, so
  // scanning holders against `receiver` alone is complete.
  std::vector<Agent> holders(n);
  std::iota(holders.begin(), holders.end(), Agent{0});
  std::ranges::stable_sort(holders, [&](Agent a, Agent b) { return y[a] > y[b]; });
  for (Agent j : holders) {
    if (j == receiver || cheapest[j] == kNoGood) continue;
    const Good g = cheapest[j];
    if (y[j] - y[receiver] > inst.weight(g)) return Transfer{g, j, receiver};
  }
  return std::nullopt;
}

DescentTrace descent_solve(const IdenticalInstance& inst, Allocation start) {
  if (start.goods() != inst.goods()) {
    throw InvalidInstance("allocation size does not match instance");
  }
  DescentTrace trace;
  auto y = bundle_values(inst, start);
  Potential phi = potential_phi(inst, start);
  const Wide n2 = static_cast<Wide>(inst.agents()) * inst.agents();
  trace.allocation = std::move(start);

  while (auto t = find_violating_transfer(inst, trace.allocation, y)) {
    const Value w = inst.weight(t->good);
    Potential next{phi.scaled + n2 * delta_phi(y[t->to], y[t->from], w),
                   inst.agents()};
    y[t->from] -= w;
    y[t->to] += w;
    trace.allocation.owner[t->good] = t->to;
    trace.moves.push_back({*t, phi, next});
    phi = next;
  }
  return trace;
}

std::optional<std::string> verify_trace(const IdenticalInstance& inst,
                                        const Allocation& start,
                                        const DescentTrace& trace) {
  Allocation a = start;
  for (std::size_t k = 0; k < trace.moves.size(); ++k) {
    const auto& step = trace.moves[k];
    const auto where = "step " + std::to_string(k + 1) + ": ";
    const Transfer& t = step.move;
    if (t.good >= a.goods() || t.from >= inst.agents() || t.to >= inst.agents()) {
      return where + "index out of range";
    }
    if (a.owner[t.good] != t.from) return where + "good not held by source";
    const auto y = bundle_values(inst, a);
    if (!(y[t.from] - y[t.to] > inst.weight(t.good))) {
      return where + "move is not an EFX violation";
    }
    if (potential_phi(inst, a) != step.phi_before) return where + "phi_before mismatch";
    a.owner[t.good] = t.to;
    if (potential_phi(inst, a) != step.phi_after) return where + "phi_after mismatch";
    if (!(step.phi_after < step.phi_before)) return where + "potential did not decrease";
  }
  if (a != trace.allocation) return "final allocation does not match replay";
  if (find_violating_transfer(inst, a, bundle_values(inst, a))) {
    return "final allocation is not EFX";
  }
  return std::nullopt;
}

}  // namespace efx
