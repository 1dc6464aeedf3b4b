#pragma once

// Test-only reference implementations. These evaluate the definitions
// directly (explicit bundle sums per triple, full enumeration) and share no
// code path with the library's incremental machinery.

#include <cstdint>
#include <random>
#include <vector>

#include "efx/core.hpp"

namespace efx::oracle {

// u_i(S) summed directly from the owner vector, optionally excluding one good.
inline Value bundle_value(const Instance& inst, const Allocation& a, Agent i,
                          Agent holder, Good excluded = kNoGood) {
  Value s = 0;
  for (Good g = 0; g < a.owner.size(); ++g) {
    if (a.owner[g] == holder && g != excluded) s += inst.value(i, g);
  }
  return s;
}

// c(i, j, g) summed over every triple.
inline std::int64_t naive_violations(const Instance& inst, const Allocation& a) {
  std::int64_t f = 0;
  for (Agent i = 0; i < inst.agents(); ++i) {
    const Value own = bundle_value(inst, a, i, i);
    for (Agent j = 0; j < inst.agents(); ++j) {
      if (i == j) continue;
      for (Good g = 0; g < a.owner.size(); ++g) {
        if (a.owner[g] != j) continue;
        f += bundle_value(inst, a, i, j, g) > own;
      }
    }
  }
  return f;
}

inline std::int64_t naive_pair(const Instance& inst, const Allocation& a,
                               Agent i, Agent j) {
  const Value own = bundle_value(inst, a, i, i);
  std::int64_t c = 0;
  for (Good g = 0; g < a.owner.size(); ++g) {
    if (a.owner[g] == j) c += bundle_value(inst, a, i, j, g) > own;
  }
  return c;
}

// Every owner vector, in the library's lexicographic order.
inline std::vector<Allocation> all_allocations(std::size_t n, std::size_t m) {
  std::vector<Allocation> out;
  Allocation a{std::vector<Agent>(m, 0)};
  while (true) {
    out.push_back(a);
    std::size_t k = m;
    while (k > 0 && a.owner[k - 1] == n - 1) a.owner[--k] = 0;
    if (k == 0) return out;
    ++a.owner[k - 1];
  }
}

// Independent RNG for test data (std engine, not the library's).
struct TestRng {
  std::mt19937_64 eng;
  explicit TestRng(std::uint64_t seed) : eng(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(eng);
  }
  Instance instance(std::size_t n, std::size_t m, Value max_value) {
    std::vector<Value> v(n * m);
    for (auto& x : v) x = static_cast<Value>(below(static_cast<std::uint64_t>(max_value) + 1));
    return Instance(n, m, std::move(v));
  }
  Allocation allocation(std::size_t n, std::size_t m) {
    Allocation a{std::vector<Agent>(m)};
    for (auto& o : a.owner) o = static_cast<Agent>(below(n));
    return a;
  }
};

}  // namespace efx::oracle
