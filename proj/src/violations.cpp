#include "efx/violations.hpp"

#include <cassert>
#include <string>

namespace efx {

namespace {

// Goods h in bundle (minus `skip`, plus `extra`) with row[h] < threshold.
Count count_below(std::span<const Value> row, std::span<const Good> bundle,
                  Value threshold, Good skip = kNoGood, Good extra = kNoGood) {
  if (threshold <= 0) return 0;  // values are nonnegative
  Count c = 0;
  for (Good h : bundle) c += (h != skip && row[h] < threshold);
  if (extra != kNoGood) c += (row[extra] < threshold);
  return c;
}

// Visits every ordered pair (i, j), i != j, whose count can change when
// `good` moves from `from` to `to`: pairs in rows from/to (U(i,i) changes)
// and pairs in columns from/to (bundle composition changes).
template <class Visit>
void for_each_affected_pair(std::size_t n, Agent from, Agent to, Visit&& visit) {
  for (Agent i : {from, to}) {
    for (Agent j = 0; j < n; ++j) {
      if (j != i) visit(i, j);
    }
  }
  for (Agent j : {from, to}) {
    for (Agent i = 0; i < n; ++i) {
      if (i != from && i != to) visit(i, j);
    }
  }
}

// Count of pair (i, j) after moving `good` from `from` to `to`, given the
// pre-move utilities and bundles.
template <class BundleOf>
Count count_after_move(const Instance& inst, const UtilityMatrix& u,
                       BundleOf&& bundle_of, Good good, Agent from, Agent to,
                       Agent i, Agent j) {
  const Value v = inst.value(i, good);
  auto shifted = [&](Agent col) {
    Value x = u(i, col);
    if (col == from) x -= v;
    if (col == to) x += v;
    return x;
  };
  const Value threshold = shifted(j) - shifted(i);
  const Good skip = (j == from) ? good : kNoGood;
  const Good extra = (j == to) ? good : kNoGood;
  return count_below(inst.row(i), bundle_of(j), threshold, skip, extra);
}

void check_move(const Instance& inst, const Allocation& alloc, Good good,
                Agent target) {
  if (good >= alloc.owner.size()) throw std::out_of_range("good index out of range");
  if (target >= inst.agents()) throw std::out_of_range("agent index out of range");
  if (alloc.owner[good] == target) {
    throw std::invalid_argument("transfer target already owns good " +
                                std::to_string(good + 1));
  }
}

}  // namespace

Count count_pair(const Instance& inst, const UtilityMatrix& u, Agent i,
                 Agent j, std::span<const Good> bundle_j) {
  if (i == j) throw std::invalid_argument("count_pair requires i != j");
  return count_below(inst.row(i), bundle_j, u(i, j) - u(i, i));
}

Count count_pair(const Instance& inst, const UtilityMatrix& u,
                 const Allocation& alloc, Agent i, Agent j) {
  if (i == j) throw std::invalid_argument("count_pair requires i != j");
  const Value threshold = u(i, j) - u(i, i);
  if (threshold <= 0) return 0;
  Count c = 0;
  for (Good g = 0; g < alloc.owner.size(); ++g) {
    c += (alloc.owner[g] == j && inst.value(i, g) < threshold);
  }
  return c;
}

ViolationCount count_violations(const Instance& inst, const Allocation& alloc) {
  const auto u = build_utilities(inst, alloc);
  const auto bundles = bundles_of(alloc, inst.agents());
  const std::size_t n = inst.agents();
  ViolationCount vc{0, n, std::vector<Count>(n * n, 0)};
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = 0; j < n; ++j) {
      if (i == j) continue;
      const Count c = count_pair(inst, u, i, j, bundles[j]);
      vc.per_pair[i * n + j] = c;
      vc.total += c;
    }
  }
  return vc;
}

Count delta_violations(const Instance& inst, const UtilityMatrix& u,
                       const Allocation& alloc, Good good, Agent target) {
  check_allocation(inst, alloc);
  check_move(inst, alloc, good, target);
  const auto bundles = bundles_of(alloc, inst.agents());
  auto bundle_of = [&](Agent j) -> std::span<const Good> { return bundles[j]; };
  const Agent from = alloc.owner[good];
  Count delta = 0;
  for_each_affected_pair(inst.agents(), from, target, [&](Agent i, Agent j) {
    delta += count_after_move(inst, u, bundle_of, good, from, target, i, j);
    delta -= count_pair(inst, u, i, j, bundles[j]);
  });
  return delta;
}

bool is_efx(const Instance& inst, const Allocation& alloc) {
  const auto u = build_utilities(inst, alloc);
  for (Good g = 0; g < alloc.owner.size(); ++g) {
    const Agent j = alloc.owner[g];
    for (Agent i = 0; i < inst.agents(); ++i) {
      if (i != j && u(i, j) - inst.value(i, g) > u(i, i)) return false;
    }
  }
  return true;
}

std::vector<Violation> list_violations(const Instance& inst,
                                       const Allocation& alloc) {
  const auto u = build_utilities(inst, alloc);
  const auto bundles = bundles_of(alloc, inst.agents());
  std::vector<Violation> out;
  for (Agent i = 0; i < inst.agents(); ++i) {
    for (Agent j = 0; j < inst.agents(); ++j) {
      if (i == j) continue;
      for (Good g : bundles[j]) {
        if (u(i, j) - inst.value(i, g) > u(i, i)) out.push_back({i, j, g});
      }
    }
  }
  return out;
}

BruteForceResult brute_force_efx(const Instance& inst, std::uint64_t cap) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.goods();
  std::uint64_t space = 1;
  for (std::size_t k = 0; k < m; ++k) {
    if (space > cap / n) {
      throw SearchCapExceeded("n^m = " + std::to_string(n) + "^" +
                              std::to_string(m) + " exceeds cap " +
                              std::to_string(cap));
    }
    space *= n;
  }
  if (space > cap) {
    throw SearchCapExceeded("search space exceeds cap " + std::to_string(cap));
  }

  Allocation alloc{std::vector<Agent>(m, 0)};
  UtilityMatrix u = build_utilities(inst, alloc);
  auto efx_now = [&] {
    for (Good g = 0; g < m; ++g) {
      const Agent j = alloc.owner[g];
      for (Agent i = 0; i < n; ++i) {
        if (i != j && u(i, j) - inst.value(i, g) > u(i, i)) return false;
      }
    }
    return true;
  };

  BruteForceResult result;
  while (true) {
    ++result.examined;
    if (efx_now()) {
      result.allocation = alloc;
      return result;
    }
    // Odometer increment, last good fastest.
    std::size_t k = m;
    while (k > 0 && alloc.owner[k - 1] == n - 1) {
      apply_transfer(inst, alloc, u, static_cast<Good>(k - 1), 0);
      --k;
    }
    if (k == 0) return result;
    apply_transfer(inst, alloc, u, static_cast<Good>(k - 1),
                   alloc.owner[k - 1] + 1);
  }
}

// ---------------------------------------------------------------------------

ViolationState::ViolationState(const Instance& inst, Allocation alloc)
    : inst_(&inst), n_(inst.agents()), alloc_(std::move(alloc)) {
  rebuild();
}

void ViolationState::reset(Allocation alloc) {
  alloc_ = std::move(alloc);
  rebuild();
}

void ViolationState::rebuild() {
  check_allocation(*inst_, alloc_);
  bundles_ = bundles_of(alloc_, n_);
  slot_.assign(alloc_.goods(), 0);
  for (const auto& b : bundles_) {
    for (std::uint32_t k = 0; k < b.size(); ++k) slot_[b[k]] = k;
  }
  u_ = build_utilities(*inst_, alloc_);
  counts_.assign(n_ * n_, 0);
  total_ = 0;
  for (Agent i = 0; i < n_; ++i) {
    for (Agent j = 0; j < n_; ++j) {
      if (i == j) continue;
      const Count c = count_pair(*inst_, u_, i, j, bundles_[j]);
      counts_[i * n_ + j] = c;
      total_ += c;
    }
  }
  pending_good_ = kNoGood;
}

Count ViolationState::delta(Good good, Agent target) {
  check_move(*inst_, alloc_, good, target);
  const Agent from = alloc_.owner[good];
  auto bundle_of = [&](Agent j) -> std::span<const Good> { return bundles_[j]; };
  pending_.clear();
  Count d = 0;
  for_each_affected_pair(n_, from, target, [&](Agent i, Agent j) {
    const Count c =
        count_after_move(*inst_, u_, bundle_of, good, from, target, i, j);
    d += c - counts_[i * n_ + j];
    pending_.push_back({i, j, c});
  });
  pending_good_ = good;
  pending_target_ = target;
  pending_delta_ = d;
  return d;
}

void ViolationState::commit(Good good, Agent target) {
  if (pending_good_ != good || pending_target_ != target) delta(good, target);
  const Agent from = alloc_.owner[good];

  for (const auto& p : pending_) counts_[p.i * n_ + p.j] = p.count;
  total_ += pending_delta_;
  pending_good_ = kNoGood;

  // swap-remove from the old bundle, append to the new one
  auto& src = bundles_[from];
  const std::uint32_t k = slot_[good];
  src[k] = src.back();
  slot_[src[k]] = k;
  src.pop_back();
  slot_[good] = static_cast<std::uint32_t>(bundles_[target].size());
  bundles_[target].push_back(good);

  apply_transfer(*inst_, alloc_, u_, good, target);

#ifndef NDEBUG
  if ((++commits_ & 0xFFFF) == 0) assert(recount() == total_);
#endif
}

Count ViolationState::recount() const {
  return count_violations(*inst_, alloc_).total;
}

}  // namespace efx
