#pragma once

// Problem and allocation data model for EFX allocation of indivisible goods.
//
// Indices are 0-based throughout the library. File formats and CLI output
// are 1-based; the conversion happens in io.cpp only.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace efx {

using Value = std::int64_t;
using Agent = std::uint32_t;
using Good = std::uint32_t;

inline constexpr Value kDefaultScale = 1'000'000;
inline constexpr Good kNoGood = ~Good{0};

/// Raised on malformed problem data: shape mismatch, negative value, overflow.
class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// n agents, m goods, and a dense row-major n x m matrix of nonnegative
/// integer valuations. Immutable after construction; safe to share.
class Instance {
 public:
  Instance() = default;
  Instance(std::size_t n, std::size_t m, std::vector<Value> values,
           Value scale = kDefaultScale);

  static Instance from_rows(const std::vector<std::vector<Value>>& rows,
                            Value scale = kDefaultScale);

  std::size_t agents() const { return n_; }
  std::size_t goods() const { return m_; }
  Value scale() const { return scale_; }

  Value value(Agent i, Good g) const { return values_[i * m_ + g]; }
  std::span<const Value> row(Agent i) const {
    return {values_.data() + i * m_, m_};
  }
  std::span<const Value> values() const { return values_; }

  /// Σ_g values[i][g].
  Value row_total(Agent i) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::size_t n_ = 1;
  std::size_t m_ = 0;
  Value scale_ = kDefaultScale;
  std::vector<Value> values_;
};

/// owner[g] is the agent holding good g. Every good has exactly one owner.
struct Allocation {
  std::vector<Agent> owner;

  std::size_t goods() const { return owner.size(); }
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Throws InvalidInstance if alloc is not a total map onto 0..n-1 of the
/// right length.
void check_allocation(const Instance& inst, const Allocation& alloc);

/// Bundles A_0..A_{n-1} as explicit good lists, ascending by good index.
std::vector<std::vector<Good>> bundles_of(const Allocation& alloc,
                                          std::size_t n);

/// U(i, j) = value agent i assigns to agent j's bundle.
class UtilityMatrix {
 public:
  UtilityMatrix() = default;
  explicit UtilityMatrix(std::size_t n) : n_(n), u_(n * n, 0) {}

  std::size_t agents() const { return n_; }
  Value operator()(Agent i, Agent j) const { return u_[i * n_ + j]; }
  Value& operator()(Agent i, Agent j) { return u_[i * n_ + j]; }

  friend bool operator==(const UtilityMatrix&, const UtilityMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Value> u_;
};

UtilityMatrix build_utilities(const Instance& inst, const Allocation& alloc);

/// Moves `good` to `target`, updating the two affected columns of `u` in
/// O(n). Throws std::invalid_argument if target already owns the good.
void apply_transfer(const Instance& inst, Allocation& alloc, UtilityMatrix& u,
                    Good good, Agent target);

/// Social welfare Σ_i u_i(A_i).
Value social_welfare(const Instance& inst, const Allocation& alloc);

}  // namespace efx
