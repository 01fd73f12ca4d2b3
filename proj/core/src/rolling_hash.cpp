#include "minorbit/rolling_hash.hpp"

namespace minorbit {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
constexpr std::uint64_t kBase1 = 0x1f3a5c7e9b2d4f61ULL % kMod;
constexpr std::uint64_t kBase2 = 0x0b7e151628aed2a6ULL % kMod;

constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) noexcept {
  const u128 prod = static_cast<u128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(prod & kMod) +
                    static_cast<std::uint64_t>(prod >> 61);
  if (r >= kMod) r -= kMod;
  return r;
}

constexpr std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t r = a + b;
  if (r >= kMod) r -= kMod;
  return r;
}

constexpr std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b) noexcept {
  return a >= b ? a - b : a + kMod - b;
}

}  // namespace

RollingHash::RollingHash(std::span<const Symbol> text)
    : prefix1_(text.size() + 1, 0),
      prefix2_(text.size() + 1, 0),
      power1_(text.size() + 1, 1),
      power2_(text.size() + 1, 1) {
  for (std::size_t k = 0; k < text.size(); ++k) {
    // Offset symbols by one so that runs of symbol 0 still hash distinctly.
    const std::uint64_t v = static_cast<std::uint64_t>(text[k]) + 1;
    prefix1_[k + 1] = add_mod(mul_mod(prefix1_[k], kBase1), v);
    prefix2_[k + 1] = add_mod(mul_mod(prefix2_[k], kBase2), v);
    power1_[k + 1] = mul_mod(power1_[k], kBase1);
    power2_[k + 1] = mul_mod(power2_[k], kBase2);
  }
}

HashPair RollingHash::substring(std::size_t pos, std::size_t len) const noexcept {
  return HashPair{
      sub_mod(prefix1_[pos + len], mul_mod(prefix1_[pos], power1_[len])),
      sub_mod(prefix2_[pos + len], mul_mod(prefix2_[pos], power2_[len]))};
}

}  // namespace minorbit
