#pragma once

// Seeded instance generators: uniform, correlated, identical.
//
// A real draw U ~ Unif[0,1] is represented by an exact integer surrogate
// uniform on {0, ..., scale}. Draw order is fixed (common values first,
// ascending good index, then agent terms row-major) so a seed pins the
// matrix bit-for-bit on any platform.

#include <cstdint>
#include <string>
#include <string_view>

#include "efx/core.hpp"
#include "efx/descent.hpp"

namespace efx {

enum class GenKind { uniform, correlated, identical };

std::string_view to_string(GenKind kind);
GenKind parse_gen_kind(std::string_view name);

struct GenSpec {
  GenKind kind = GenKind::uniform;
  std::size_t n = 1;
  std::size_t m = 0;
  double rho = 0.0;  // correlated only
  std::uint64_t seed = 0;
  Value scale = kDefaultScale;

  void validate() const;
};

/// Correlation weight quantization: rho is applied as round(rho * 1e6) / 1e6.
inline constexpr std::int64_t kRhoDenominator = 1'000'000;

/// values[i][j] uniform on {0..scale}, row-major draws.
Instance gen_uniform(std::size_t n, std::size_t m, std::uint64_t seed,
                     Value scale = kDefaultScale);

/// values[i][j] = round_half_up(rho * w_j + (1 - rho) * u_ij).
Instance gen_correlated(std::size_t n, std::size_t m, double rho,
                        std::uint64_t seed, Value scale = kDefaultScale);

/// w_g = 1 + uniform on {0..scale-1}; strictly positive.
IdenticalInstance gen_identical(std::size_t n, std::size_t m,
                                std::uint64_t seed, Value scale = kDefaultScale);

/// The integer convex combination used by gen_correlated.
Value mix_correlated(std::int64_t rho_ppm, Value common, Value individual);

/// Dispatches on spec.kind; identical instances come back lifted.
Instance generate(const GenSpec& spec);

}  // namespace efx
