#pragma once

// EFX violation counting.
//
// A triple (i, j, g) with g in A_j is a violation when
//   u_i(A_j \ {g}) > u_i(A_i),
// equivalently values[i][g] < U(i,j) - U(i,i). The objective f(A) is the
// number of such triples; A is EFX iff f(A) = 0. Comparisons are strict and
// exact (integer valuations), so ties never count.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "efx/core.hpp"

namespace efx {

using Count = std::int64_t;

struct ViolationCount {
  Count total = 0;
  std::size_t n = 0;
  std::vector<Count> per_pair;  // n x n row-major, zero diagonal

  Count at(Agent i, Agent j) const { return per_pair[i * n + j]; }
};

struct Violation {
  Agent envious;  // i
  Agent holder;   // j
  Good good;      // g in A_j

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// |{g in bundle_j : U(i,j) - values[i][g] > U(i,i)}|. `bundle_j` must be
/// agent j's bundle under the allocation `u` was built from.
Count count_pair(const Instance& inst, const UtilityMatrix& u, Agent i,
                 Agent j, std::span<const Good> bundle_j);

/// Same, reading A_j off the owner vector. Throws if i == j.
Count count_pair(const Instance& inst, const UtilityMatrix& u,
                 const Allocation& alloc, Agent i, Agent j);

ViolationCount count_violations(const Instance& inst, const Allocation& alloc);

/// f(A') - f(A) for moving `good` to `target`, without mutating anything.
/// Only ordered pairs touching the old or new owner are re-counted.
Count delta_violations(const Instance& inst, const UtilityMatrix& u,
                       const Allocation& alloc, Good good, Agent target);

bool is_efx(const Instance& inst, const Allocation& alloc);

/// Every violating triple, ordered by (envious, holder, good).
std::vector<Violation> list_violations(const Instance& inst,
                                       const Allocation& alloc);

class SearchCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultBruteForceCap = 10'000'000;

struct BruteForceResult {
  std::optional<Allocation> allocation;  // first EFX owner vector, if any
  std::uint64_t examined = 0;            // owner vectors checked
};

/// Exhaustive search over all n^m owner vectors in lexicographic order
/// (agent 0 first, last good varying fastest). Throws SearchCapExceeded if
/// n^m > cap.
BruteForceResult brute_force_efx(const Instance& inst,
                                 std::uint64_t cap = kDefaultBruteForceCap);

/// Incrementally maintained solver state: allocation, explicit bundles,
/// utilities, per-pair violation counts and f. `delta` is O(n + m) per
/// proposal; `commit` reuses the counts `delta` just computed.
///
/// The instance must outlive the state. Not thread-safe; one state per worker.
class ViolationState {
 public:
  ViolationState(const Instance& inst, Allocation alloc);

  const Instance& instance() const { return *inst_; }
  const Allocation& allocation() const { return alloc_; }
  const UtilityMatrix& utilities() const { return u_; }
  std::span<const Good> bundle(Agent j) const { return bundles_[j]; }
  Count total() const { return total_; }
  Count pair_count(Agent i, Agent j) const { return counts_[i * n_ + j]; }

  /// f after moving `good` to `target`, minus f now. Does not mutate the
  /// allocation; caches the new per-pair counts for a matching commit().
  Count delta(Good good, Agent target);

  /// Applies the move. Throws std::invalid_argument if target owns good.
  void commit(Good good, Agent target);

  void reset(Allocation alloc);

  /// f recomputed from scratch (for drift checks).
  Count recount() const;

 private:
  struct PairUpdate {
    Agent i;
    Agent j;
    Count count;
  };

  void rebuild();

  const Instance* inst_;
  std::size_t n_;
  Allocation alloc_;
  std::vector<std::vector<Good>> bundles_;
  std::vector<std::uint32_t> slot_;  // position of each good in its bundle
  UtilityMatrix u_;
  std::vector<Count> counts_;
  Count total_ = 0;

  std::vector<PairUpdate> pending_;
  Good pending_good_ = kNoGood;
  Agent pending_target_ = 0;
  Count pending_delta_ = 0;
  std::uint64_t commits_ = 0;
};

}  // namespace efx
