#pragma once

// Exact fixed-point points on the circle R/Z.
//
// A point is an unsigned fraction X / 2^P stored as P/64 limbs, most
// significant first. Multiplication by an integer degree modulo 1 and
// circle differences are exact on this representation, so orbits of
// x -> l*x mod 1 never lose accuracy within the precision budget.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace minorbit {

class CirclePoint {
 public:
  CirclePoint() = default;
  // The zero point with `limbs` limbs of precision.
  explicit CirclePoint(std::size_t limbs) : limbs_(limbs, 0) {}
  explicit CirclePoint(std::vector<std::uint64_t> limbs)
      : limbs_(std::move(limbs)) {}

  // Limbs needed to hold at least `bits` fractional bits.
  static std::size_t limbs_for_bits(std::size_t bits) noexcept {
    return bits == 0 ? 1 : (bits + 63) / 64;
  }

  // Nearest representable point at or below x. Throws DomainError when x is
  // not in [0, 1).
  static CirclePoint from_double(double x, std::size_t bits);
  // floor(num / den * 2^P) / 2^P. Requires num < den.
  static CirclePoint from_rational(std::uint64_t num, std::uint64_t den,
                                   std::size_t bits);
  // Uniform random point: every limb is a fresh draw from stream `key`.
  static CirclePoint random(std::uint64_t key, std::size_t bits);

  std::size_t limb_count() const noexcept { return limbs_.size(); }
  std::size_t precision_bits() const noexcept { return 64 * limbs_.size(); }
  std::span<const std::uint64_t> limbs() const noexcept { return limbs_; }

  bool is_zero() const noexcept;

  // this <- factor * this mod 1, exact.
  void multiply_mod1(std::uint32_t factor) noexcept;
  CirclePoint times_mod1(std::uint32_t factor) const {
    CirclePoint out = *this;
    out.multiply_mod1(factor);
    return out;
  }

  // Nearest double (correct to within one ulp).
  double to_double() const noexcept;
  // log2 of the value without underflow; -infinity for zero.
  double log2() const noexcept;

  friend std::strong_ordering operator<=>(const CirclePoint& a,
                                          const CirclePoint& b);
  friend bool operator==(const CirclePoint& a, const CirclePoint& b) {
    return a.limbs_ == b.limbs_;
  }

 private:
  std::vector<std::uint64_t> limbs_;
};

// (a - b) mod 1, exact. Both points must carry the same precision.
CirclePoint circle_difference(const CirclePoint& a, const CirclePoint& b);

// min(|a - b|, 1 - |a - b|) as an exact point in [0, 1/2].
CirclePoint circle_distance(const CirclePoint& a, const CirclePoint& b);

}  // namespace minorbit
