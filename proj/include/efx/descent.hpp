#pragma once

// Strict descent on the variance potential for identical additive valuations.
//
// With a common value w_g per good, Y_i = Σ_{g in A_i} w_g and
// μ = Σ_g w_g / n, the potential is Φ(A) = Σ_i (Y_i - μ)^2. The allocation is
// EFX iff Y_j - Y_i <= w_g for every i, j and g in A_j, and moving a violating
// good g from j to i changes Φ by 2 w_g (w_g - (Y_j - Y_i)) < 0.
//
// Everything is exact: Φ is carried as the integer n^2 Φ = Σ (n Y_i - W)^2.

#include <optional>
#include <vector>

#include "efx/core.hpp"

namespace efx {

using Wide = __int128;

/// n agents sharing one strictly positive value per good.
class IdenticalInstance {
 public:
  IdenticalInstance(std::size_t n, std::vector<Value> weights,
                    Value scale = kDefaultScale);

  /// Accepts an Instance whose rows are all equal and strictly positive.
  static IdenticalInstance from_instance(const Instance& inst);

  std::size_t agents() const { return n_; }
  std::size_t goods() const { return w_.size(); }
  Value weight(Good g) const { return w_[g]; }
  const std::vector<Value>& weights() const { return w_; }
  Value total() const { return total_; }
  Value scale() const { return scale_; }

  /// Full valuation matrix with every row equal to the weights.
  Instance lift() const;

 private:
  std::size_t n_;
  std::vector<Value> w_;
  Value total_ = 0;
  Value scale_;
};

/// Φ as an exact rational: scaled / n^2 with scaled = n^2 Φ.
struct Potential {
  Wide scaled = 0;
  std::size_t n = 1;

  double value() const {
    return static_cast<double>(scaled) / (static_cast<double>(n) * n);
  }
  friend auto operator<=>(const Potential& a, const Potential& b) {
    return a.scaled <=> b.scaled;  // only meaningful for equal n
  }
  friend bool operator==(const Potential&, const Potential&) = default;
};

std::vector<Value> bundle_values(const IdenticalInstance& inst,
                                 const Allocation& alloc);

Potential potential_phi(const IdenticalInstance& inst, const Allocation& alloc);

/// Φ(A') - Φ(A) for moving a good of value w from the holder (bundle value
/// y_holder) to the receiver (y_receiver): 2 w (w - (y_holder - y_receiver)).
Wide delta_phi(Value y_receiver, Value y_holder, Value w);

struct Transfer {
  Good good;
  Agent from;
  Agent to;

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

/// A move (g, j -> i) with Y_j - Y_i > w_g, or nullopt iff the allocation is
/// EFX. The receiver is the poorest agent; holders are scanned richest first;
/// the good is the holder's cheapest. Ties go to the lowest index.
std::optional<Transfer> find_violating_transfer(const IdenticalInstance& inst,
                                                const Allocation& alloc,
                                                const std::vector<Value>& y);

struct DescentStep {
  Transfer move;
  Potential phi_before;
  Potential phi_after;
};

struct DescentTrace {
  std::vector<DescentStep> moves;
  Allocation allocation;  // final
};

/// Applies find_violating_transfer until none remains.
DescentTrace descent_solve(const IdenticalInstance& inst, Allocation start);

/// Replays a trace from `start` and checks every step: the move was a
/// violation when made, recorded Φ values match recomputation, Φ strictly
/// decreased, and the final allocation matches and is EFX. Returns an error
/// description, or nullopt if the trace checks out.
std::optional<std::string> verify_trace(const IdenticalInstance& inst,
                                        const Allocation& start,
                                        const DescentTrace& trace);

}  // namespace efx
