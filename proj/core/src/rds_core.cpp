#include "minorbit/rds_core.hpp"

#include <algorithm>
#include <cmath>

#include "minorbit/errors.hpp"
#include "minorbit/rng.hpp"

namespace minorbit {

double depth_to_distance(std::size_t depth, double base) {
  return std::pow(base, -static_cast<double>(depth));
}

SymbolicSpace::SymbolicSpace(unsigned alphabet_size, double metric_base)
    : alphabet_size_(alphabet_size), metric_base_(metric_base) {
  if (alphabet_size_ < 1 || alphabet_size_ > 256) {
    throw DomainError("alphabet size must be in [1, 256]");
  }
  if (!(metric_base_ > 1.0) || !std::isfinite(metric_base_)) {
    throw DomainError("shift metric base must be a finite real > 1");
  }
}

bool SymbolicSpace::contains(std::span<const Symbol> x) const noexcept {
  return std::all_of(x.begin(), x.end(),
                     [this](Symbol s) { return s < alphabet_size_; });
}

std::size_t SymbolicSpace::agreement_depth(std::span<const Symbol> x,
                                           std::span<const Symbol> y) noexcept {
  const std::size_t len = std::min(x.size(), y.size());
  const auto mismatch = std::mismatch(x.begin(), x.begin() + len, y.begin());
  return static_cast<std::size_t>(mismatch.first - x.begin());
}

double SymbolicSpace::distance(std::span<const Symbol> x,
                               std::span<const Symbol> y) const {
  const std::size_t depth = agreement_depth(x, y);
  if (depth == std::min(x.size(), y.size())) return 0.0;
  return depth_to_distance(depth, metric_base_);
}

double CircleSpace::distance(double x, double y) noexcept {
  const double gap = std::fabs(x - y);
  return std::min(gap, 1.0 - gap);
}

EnvPath::EnvPath(std::vector<Symbol> symbols, std::int64_t first_index,
                 std::uint64_t seed, std::string model_id)
    : symbols_(std::move(symbols)),
      first_(first_index),
      seed_(seed),
      model_id_(std::move(model_id)) {}

namespace {

Symbol keyed_symbol(std::uint64_t key, unsigned alphabet_size,
                    std::int64_t index) noexcept {
  if (alphabet_size <= 1) return 0;
  return static_cast<Symbol>(
      rng::uniform_below(key, static_cast<std::uint64_t>(index), alphabet_size));
}

}  // namespace

Symbol env_symbol(std::uint64_t seed, const std::string& model_id,
                  unsigned alphabet_size, std::int64_t index) noexcept {
  return keyed_symbol(rng::combine(seed, rng::hash_label(model_id)),
                      alphabet_size, index);
}

EnvPath EnvPath::generate(std::uint64_t seed, std::string model_id,
                          unsigned alphabet_size, std::int64_t first_index,
                          std::int64_t end_index) {
  if (end_index < first_index) {
    throw DomainError("environment range must satisfy first <= end");
  }
  if (alphabet_size < 1 || alphabet_size > 256) {
    throw DomainError("environment alphabet size must be in [1, 256]");
  }
  const std::uint64_t key = rng::combine(seed, rng::hash_label(model_id));
  std::vector<Symbol> symbols(static_cast<std::size_t>(end_index - first_index));
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    symbols[k] = keyed_symbol(key, alphabet_size,
                              first_index + static_cast<std::int64_t>(k));
  }
  return EnvPath(std::move(symbols), first_index, seed, std::move(model_id));
}

Symbol EnvPath::at(std::int64_t index) const {
  if (index < first_ || index >= end_index()) {
    throw LengthError("environment index " + std::to_string(index) +
                      " outside window [" + std::to_string(first_) + ", " +
                      std::to_string(end_index()) + ")");
  }
  return (*this)[index];
}

CircleMaps::CircleMaps(std::vector<std::uint32_t> degrees)
    : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw DomainError("circle map family is empty");
  for (auto l : degrees_) {
    if (l < 2) throw DomainError("circle map degrees must be >= 2");
  }
}

std::uint32_t CircleMaps::max_degree() const noexcept {
  return *std::max_element(degrees_.begin(), degrees_.end());
}

std::size_t CircleMaps::precision_bits_for(std::size_t n) const noexcept {
  const double growth = static_cast<double>(n) * std::log2(max_degree());
  return static_cast<std::size_t>(std::ceil(growth)) + 64;
}

SymbolicOrbitWindow iterate_orbit(const ShiftSystem& system,
                                  const EnvPath& omega,
                                  std::span<const Symbol> x, std::size_t n) {
  if (n == 0) throw DomainError("orbit length must be positive");
  if (!omega.covers(0, static_cast<std::int64_t>(n))) {
    throw LengthError("environment does not cover the orbit window [0, n)");
  }
  if (x.size() < n) {
    throw LengthError("shift point holds fewer symbols than orbit length");
  }
  if (!system.space.contains(x)) {
    throw DomainError("sequence symbol outside the shift alphabet");
  }
  return SymbolicOrbitWindow(std::vector<Symbol>(x.begin(), x.end()), n);
}

CircleOrbitWindow iterate_orbit(const CircleMaps& system, const EnvPath& omega,
                                const CirclePoint& x, std::size_t n) {
  if (n == 0) throw DomainError("orbit length must be positive");
  if (!omega.covers(0, static_cast<std::int64_t>(n))) {
    throw LengthError("environment does not cover the orbit window [0, n)");
  }
  if (x.limb_count() == 0) throw DomainError("circle point has no precision");
  CircleOrbitWindow orbit;
  orbit.points.reserve(n);
  orbit.points.push_back(x);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Symbol s = omega[static_cast<std::int64_t>(i)];
    if (s >= system.size()) {
      throw DomainError("environment symbol has no map in the family");
    }
    orbit.points.push_back(orbit.points.back().times_mod1(system.degrees()[s]));
  }
  return orbit;
}

std::size_t gap_alpha(std::size_t n, double c4) {
  if (n < 3) throw DomainError("gap_alpha requires n >= 3");
  if (!(c4 > 0.0)) throw DomainError("gap_alpha exponent C4 must be positive");
  const double raw = std::floor(std::pow(std::log(static_cast<double>(n)), c4));
  if (raw >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(raw);
}

}  // namespace minorbit
