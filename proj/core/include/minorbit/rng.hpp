#pragma once

// Counter-based random streams. Every draw is a pure function of
// (key, index), so any sub-range of a stream can be regenerated
// bit-identically and replicas never share mutable generator state.

#include <cstdint>
#include <string_view>

namespace minorbit::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// 64-bit FNV-1a, used to turn stream labels into key material.
constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Combines key material into a single 64-bit key.
constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a + kGolden + mix64(b ^ 0x632be59bd9b4e019ULL));
}

// Key for replica `replica` of stream `label` under master seed `seed`.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replica,
                                   std::string_view label) noexcept {
  return combine(combine(seed, replica), hash_label(label));
}

// The index-th 64-bit word of stream `key` (SplitMix64 at position index).
constexpr std::uint64_t draw(std::uint64_t key, std::uint64_t index) noexcept {
  return mix64(mix64(key) + (index + 1) * kGolden);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double uniform(std::uint64_t key, std::uint64_t index) noexcept {
  return to_unit(draw(key, index));
}

// Uniform integer in [0, bound) via multiply-high on 32 random bits (bias
// at most bound / 2^32).
std::uint32_t uniform_below(std::uint64_t key, std::uint64_t index,
                            std::uint32_t bound) noexcept;

}  // namespace minorbit::rng
