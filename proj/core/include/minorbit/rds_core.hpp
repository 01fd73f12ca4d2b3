#pragma once

// Shared abstractions for random dynamical systems: the two fiber spaces
// (full shift and circle), the driving environment, orbit generation and
// the gap function that separates near-diagonal from far-apart times.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "minorbit/circle_point.hpp"

namespace minorbit {

using Symbol = std::uint8_t;

// b^(-depth): the shift-space distance of two sequences whose first
// disagreement is at index `depth`.
double depth_to_distance(std::size_t depth, double base);

// Full shift A^N with metric b^(-k), k the first index of disagreement.
class SymbolicSpace {
 public:
  explicit SymbolicSpace(unsigned alphabet_size = 2, double metric_base = 2.0);

  unsigned alphabet_size() const noexcept { return alphabet_size_; }
  double metric_base() const noexcept { return metric_base_; }

  bool contains(std::span<const Symbol> x) const noexcept;

  // Number of leading symbols on which x and y agree (bounded by the
  // shorter length).
  static std::size_t agreement_depth(std::span<const Symbol> x,
                                     std::span<const Symbol> y) noexcept;

  // b^(-k) at the first disagreement k; 0 when x and y agree on their
  // whole common length (equal within the finite representation).
  double distance(std::span<const Symbol> x, std::span<const Symbol> y) const;

 private:
  unsigned alphabet_size_;
  double metric_base_;
};

// The unit circle R/Z with d(x, y) = min(|x - y|, 1 - |x - y|).
struct CircleSpace {
  static double distance(double x, double y) noexcept;
  static CirclePoint distance(const CirclePoint& x, const CirclePoint& y) {
    return circle_distance(x, y);
  }
};

// A finite window [first, end) of the driving sequence omega. Generated
// paths are i.i.d. uniform over the alphabet and are a pure function of
// (seed, model_id, index), so any sub-range regenerates bit-identically.
class EnvPath {
 public:
  EnvPath(std::vector<Symbol> symbols, std::int64_t first_index = 0,
          std::uint64_t seed = 0, std::string model_id = "explicit");

  static EnvPath generate(std::uint64_t seed, std::string model_id,
                          unsigned alphabet_size, std::int64_t first_index,
                          std::int64_t end_index);

  std::int64_t first_index() const noexcept { return first_; }
  std::int64_t end_index() const noexcept {
    return first_ + static_cast<std::int64_t>(symbols_.size());
  }
  std::size_t size() const noexcept { return symbols_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& model_id() const noexcept { return model_id_; }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  bool covers(std::int64_t first, std::int64_t end) const noexcept {
    return first >= first_ && end <= end_index() && first <= end;
  }

  // omega_index; throws LengthError outside the window.
  Symbol at(std::int64_t index) const;
  Symbol operator[](std::int64_t index) const noexcept {
    return symbols_[static_cast<std::size_t>(index - first_)];
  }

 private:
  std::vector<Symbol> symbols_;
  std::int64_t first_;
  std::uint64_t seed_;
  std::string model_id_;
};

// Symbol omega_index of the generated path (seed, model_id). EnvPath::generate
// is built from this.
Symbol env_symbol(std::uint64_t seed, const std::string& model_id,
                  unsigned alphabet_size, std::int64_t index) noexcept;

// The full shift driven by an arbitrary environment: every fiber map is the
// left shift, so T_omega^i x is x with its first i symbols dropped.
struct ShiftSystem {
  SymbolicSpace space{};
};

// Orbit window of the shift. Point i is the suffix of the stored sequence
// starting at i.
class SymbolicOrbitWindow {
 public:
  SymbolicOrbitWindow(std::vector<Symbol> sequence, std::size_t n)
      : sequence_(std::move(sequence)), n_(n) {}
  std::size_t size() const noexcept { return n_; }
  std::span<const Symbol> point(std::size_t i) const {
    return std::span<const Symbol>(sequence_).subspan(i);
  }
  std::span<const Symbol> sequence() const noexcept { return sequence_; }

 private:
  std::vector<Symbol> sequence_;
  std::size_t n_;
};

// Finitely many maps x -> l_i x mod 1 on the circle; omega_k selects the
// degree applied at time k.
class CircleMaps {
 public:
  explicit CircleMaps(std::vector<std::uint32_t> degrees);

  const std::vector<std::uint32_t>& degrees() const noexcept { return degrees_; }
  std::size_t size() const noexcept { return degrees_.size(); }
  std::uint32_t max_degree() const noexcept;

  // n * log2(max degree) + 64 bits: enough that the first 64 bits of every
  // point of an n-step orbit are still determined by the initial point.
  std::size_t precision_bits_for(std::size_t n) const noexcept;

 private:
  std::vector<std::uint32_t> degrees_;
};

struct CircleOrbitWindow {
  std::vector<CirclePoint> points;
  std::size_t size() const noexcept { return points.size(); }
};

// x, T_omega x, ..., T_omega^{n-1} x. Throws LengthError if omega does not
// cover [0, n) and DomainError if x is not a point of the space.
SymbolicOrbitWindow iterate_orbit(const ShiftSystem& system,
                                  const EnvPath& omega,
                                  std::span<const Symbol> x, std::size_t n);
CircleOrbitWindow iterate_orbit(const CircleMaps& system, const EnvPath& omega,
                                const CirclePoint& x, std::size_t n);

// floor((ln n)^c4) clamped to [0, n]. Throws DomainError for n < 3.
std::size_t gap_alpha(std::size_t n, double c4 = 2.0);

}  // namespace minorbit
