#include "efx/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace efx {

Instance::Instance(std::size_t n, std::size_t m, std::vector<Value> values,
                   Value scale)
    : n_(n), m_(m), scale_(scale), values_(std::move(values)) {
  if (n_ < 1) throw InvalidInstance("instance needs at least one agent");
  if (scale_ < 1) throw InvalidInstance("scale must be >= 1");
  if (values_.size() != n_ * m_) {
    throw InvalidInstance("values has " + std::to_string(values_.size()) +
                          " entries, expected n*m = " +
                          std::to_string(n_ * m_));
  }
  Value max_value = 0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] < 0) {
      throw InvalidInstance("negative value at agent " +
                            std::to_string(k / m_ + 1) + ", good " +
                            std::to_string(k % m_ + 1));
    }
    max_value = std::max(max_value, values_[k]);
  }
  // Every utility sum and difference the solvers form stays below this bound.
  const __int128 bound = static_cast<__int128>(n_) * static_cast<__int128>(m_) *
                         static_cast<__int128>(max_value);
  if (bound > static_cast<__int128>(std::numeric_limits<Value>::max())) {
    throw InvalidInstance("overflow guard: n*m*max_value must be < 2^63");
  }
}

Instance Instance::from_rows(const std::vector<std::vector<Value>>& rows,
                             Value scale) {
  if (rows.empty()) throw InvalidInstance("instance needs at least one agent");
  const std::size_t m = rows.front().size();
  std::vector<Value> flat;
  flat.reserve(rows.size() * m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m) {
      throw InvalidInstance("row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) +
                            " entries, expected " + std::to_string(m));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return Instance(rows.size(), m, std::move(flat), scale);
}

Value Instance::row_total(Agent i) const {
  auto r = row(i);
  return std::accumulate(r.begin(), r.end(), Value{0});
}

void check_allocation(const Instance& inst, const Allocation& alloc) {
  if (alloc.owner.size() != inst.goods()) {
    throw InvalidInstance("allocation covers " +
                          std::to_string(alloc.owner.size()) +
                          " goods, instance has " +
                          std::to_string(inst.goods()));
  }
  for (std::size_t g = 0; g < alloc.owner.size(); ++g) {
    if (alloc.owner[g] >= inst.agents()) {
      throw InvalidInstance("good " + std::to_string(g + 1) +
                            " assigned to agent " +
                            std::to_string(alloc.owner[g] + 1) +
                            " outside 1.." + std::to_string(inst.agents()));
    }
  }
}

std::vector<std::vector<Good>> bundles_of(const Allocation& alloc,
                                          std::size_t n) {
  std::vector<std::vector<Good>> bundles(n);
  for (Good g = 0; g < alloc.owner.size(); ++g) bundles[alloc.owner[g]].push_back(g);
  return bundles;
}

UtilityMatrix build_utilities(const Instance& inst, const Allocation& alloc) {
  check_allocation(inst, alloc);
  const std::size_t n = inst.agents();
  UtilityMatrix u(n);
  for (Agent i = 0; i < n; ++i) {
    auto row = inst.row(i);
    for (Good g = 0; g < inst.goods(); ++g) u(i, alloc.owner[g]) += row[g];
  }
  return u;
}

void apply_transfer(const Instance& inst, Allocation& alloc, UtilityMatrix& u,
                    Good good, Agent target) {
  if (good >= alloc.owner.size()) throw std::out_of_range("good index out of range");
  if (target >= inst.agents()) throw std::out_of_range("agent index out of range");
  const Agent from = alloc.owner[good];
  if (from == target) {
    throw std::invalid_argument("transfer target already owns good " +
                                std::to_string(good + 1));
  }
  for (Agent i = 0; i < inst.agents(); ++i) {
    const Value v = inst.value(i, good);
    u(i, from) -= v;
    u(i, target) += v;
  }
  alloc.owner[good] = target;
}

Value social_welfare(const Instance& inst, const Allocation& alloc) {
  check_allocation(inst, alloc);
  Value sw = 0;
  for (Good g = 0; g < inst.goods(); ++g) sw += inst.value(alloc.owner[g], g);
  return sw;
}

}  // namespace efx
