#include "minorbit/circle_point.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "minorbit/errors.hpp"
#include "minorbit/rng.hpp"

namespace minorbit {

namespace {

__extension__ typedef unsigned __int128 u128;

void require_same_precision(const CirclePoint& a, const CirclePoint& b) {
  if (a.limb_count() != b.limb_count()) {
    throw DomainError("circle points carry different precisions (" +
                      std::to_string(a.precision_bits()) + " vs " +
                      std::to_string(b.precision_bits()) + " bits)");
  }
}

}  // namespace

CirclePoint CirclePoint::from_double(double x, std::size_t bits) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw DomainError("circle coordinate outside [0, 1): " + std::to_string(x));
  }
  std::vector<std::uint64_t> limbs(limbs_for_bits(bits), 0);
  // A double in [0,1) is an exact dyadic rational; peel it 32 bits at a time.
  double rest = x;
  for (std::size_t k = 0; k < limbs.size() && rest > 0.0; ++k) {
    std::uint64_t word = 0;
    for (int half = 0; half < 2; ++half) {
      rest = std::ldexp(rest, 32);
      const double chunk = std::floor(rest);
      rest -= chunk;
      word = (word << 32) | static_cast<std::uint64_t>(chunk);
    }
    limbs[k] = word;
  }
  return CirclePoint(std::move(limbs));
}

CirclePoint CirclePoint::from_rational(std::uint64_t num, std::uint64_t den,
                                       std::size_t bits) {
  if (den == 0 || num >= den) {
    throw DomainError("rational circle point must satisfy 0 <= num < den");
  }
  std::vector<std::uint64_t> limbs(limbs_for_bits(bits), 0);
  u128 rem = num;
  for (auto& limb : limbs) {
    const u128 shifted = rem << 64;
    limb = static_cast<std::uint64_t>(shifted / den);
    rem = shifted % den;
  }
  return CirclePoint(std::move(limbs));
}

CirclePoint CirclePoint::random(std::uint64_t key, std::size_t bits) {
  std::vector<std::uint64_t> limbs(limbs_for_bits(bits));
  for (std::size_t k = 0; k < limbs.size(); ++k) limbs[k] = rng::draw(key, k);
  return CirclePoint(std::move(limbs));
}

bool CirclePoint::is_zero() const noexcept {
  return std::all_of(limbs_.begin(), limbs_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

void CirclePoint::multiply_mod1(std::uint32_t factor) noexcept {
  u128 carry = 0;
  for (std::size_t k = limbs_.size(); k-- > 0;) {
    const u128 prod = static_cast<u128>(limbs_[k]) * factor + carry;
    limbs_[k] = static_cast<std::uint64_t>(prod);
    carry = prod >> 64;
  }
  // The carry out of the top limb is the integer part; dropping it is mod 1.
}

double CirclePoint::to_double() const noexcept {
  for (std::size_t k = 0; k < limbs_.size(); ++k) {
    if (limbs_[k] == 0) continue;
    const int base = -64 * static_cast<int>(k + 1);
    double value = std::ldexp(static_cast<double>(limbs_[k]), base);
    if (k + 1 < limbs_.size()) {
      value += std::ldexp(static_cast<double>(limbs_[k + 1]), base - 64);
    }
    return value;
  }
  return 0.0;
}

double CirclePoint::log2() const noexcept {
  for (std::size_t k = 0; k < limbs_.size(); ++k) {
    if (limbs_[k] == 0) continue;
    // Normalize the leading 64 significant bits into [2^63, 2^64).
    const int lead = std::countl_zero(limbs_[k]);
    std::uint64_t top = limbs_[k] << lead;
    if (lead > 0 && k + 1 < limbs_.size()) top |= limbs_[k + 1] >> (64 - lead);
    const double exponent = -64.0 * static_cast<double>(k + 1) + (64 - lead);
    return exponent + std::log2(std::ldexp(static_cast<double>(top), -64));
  }
  return -std::numeric_limits<double>::infinity();
}

std::strong_ordering operator<=>(const CirclePoint& a, const CirclePoint& b) {
  const std::size_t common = std::min(a.limbs_.size(), b.limbs_.size());
  for (std::size_t k = 0; k < common; ++k) {
    if (a.limbs_[k] != b.limbs_[k]) return a.limbs_[k] <=> b.limbs_[k];
  }
  return a.limbs_.size() <=> b.limbs_.size();
}

CirclePoint circle_difference(const CirclePoint& a, const CirclePoint& b) {
  require_same_precision(a, b);
  const auto x = a.limbs();
  const auto y = b.limbs();
  std::vector<std::uint64_t> out(x.size());
  std::uint64_t borrow = 0;
  for (std::size_t k = x.size(); k-- > 0;) {
    const std::uint64_t d1 = x[k] - y[k];
    const std::uint64_t b1 = x[k] < y[k] ? 1 : 0;
    const std::uint64_t d2 = d1 - borrow;
    const std::uint64_t b2 = d1 < borrow ? 1 : 0;
    out[k] = d2;
    borrow = b1 | b2;
  }
  return CirclePoint(std::move(out));
}

CirclePoint circle_distance(const CirclePoint& a, const CirclePoint& b) {
  CirclePoint forward = circle_difference(a, b);
  CirclePoint backward = circle_difference(b, a);
  return forward <= backward ? forward : backward;
}

}  // namespace minorbit
