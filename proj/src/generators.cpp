#include "efx/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "efx/rng.hpp"

namespace efx {

std::string_view to_string(GenKind kind) {
  switch (kind) {
    case GenKind::uniform: return "uniform";
    case GenKind::correlated: return "correlated";
    case GenKind::identical: return "identical";
  }
  return "?";
}

GenKind parse_gen_kind(std::string_view name) {
  if (name == "uniform") return GenKind::uniform;
  if (name == "correlated") return GenKind::correlated;
  if (name == "identical") return GenKind::identical;
  throw std::invalid_argument("unknown generator kind '" + std::string(name) + "'");
}

void GenSpec::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  if (scale < 1) throw std::invalid_argument("scale must be >= 1");
}

namespace {

Value draw(Rng& rng, Value scale) {
  return static_cast<Value>(rng.upto(static_cast<std::uint64_t>(scale)));
}

}  // namespace

Instance gen_uniform(std::size_t n, std::size_t m, std::uint64_t seed,
                     Value scale) {
  GenSpec{GenKind::uniform, n, m, 0.0, seed, scale}.validate();
  Rng rng(seed, Stream::generator);
  std::vector<Value> values(n * m);
  for (auto& v : values) v = draw(rng, scale);
  return Instance(n, m, std::move(values), scale);
}

Value mix_correlated(std::int64_t rho_ppm, Value common, Value individual) {
  const __int128 num = static_cast<__int128>(rho_ppm) * common +
                       static_cast<__int128>(kRhoDenominator - rho_ppm) * individual;
  return static_cast<Value>((num + kRhoDenominator / 2) / kRhoDenominator);
}

Instance gen_correlated(std::size_t n, std::size_t m, double rho,
                        std::uint64_t seed, Value scale) {
  GenSpec{GenKind::correlated, n, m, rho, seed, scale}.validate();
  const auto rho_ppm = static_cast<std::int64_t>(
      std::llround(rho * static_cast<double>(kRhoDenominator)));
  Rng rng(seed, Stream::generator);
  std::vector<Value> common(m);
  for (auto& w : common) w = draw(rng, scale);
  std::vector<Value> values(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      values[i * m + j] = mix_correlated(rho_ppm, common[j], draw(rng, scale));
    }
  }
  return Instance(n, m, std::move(values), scale);
}

IdenticalInstance gen_identical(std::size_t n, std::size_t m,
                                std::uint64_t seed, Value scale) {
  GenSpec{GenKind::identical, n, m, 0.0, seed, scale}.validate();
  Rng rng(seed, Stream::generator);
  std::vector<Value> w(m);
  for (auto& x : w) x = 1 + draw(rng, scale - 1);
  return IdenticalInstance(n, std::move(w), scale);
}

Instance generate(const GenSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GenKind::uniform: return gen_uniform(spec.n, spec.m, spec.seed, spec.scale);
    case GenKind::correlated:
      return gen_correlated(spec.n, spec.m, spec.rho, spec.seed, spec.scale);
    case GenKind::identical:
      return gen_identical(spec.n, spec.m, spec.seed, spec.scale).lift();
  }
  throw std::invalid_argument("unknown generator kind");
}

}  // namespace efx
