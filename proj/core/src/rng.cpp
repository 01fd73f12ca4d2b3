#include "minorbit/rng.hpp"

namespace minorbit::rng {

std::uint32_t uniform_below(std::uint64_t key, std::uint64_t index,
                            std::uint32_t bound) noexcept {
  // High 32 bits times bound: bias at most bound / 2^32.
  return static_cast<std::uint32_t>(((draw(key, index) >> 32) * bound) >> 32);
}

}  // namespace minorbit::rng
