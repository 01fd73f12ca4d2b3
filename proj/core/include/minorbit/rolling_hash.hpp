#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minorbit/rds_core.hpp"

namespace minorbit {

struct HashPair {
  std::uint64_t first;
  std::uint64_t second;
  friend auto operator<=>(const HashPair&, const HashPair&) = default;
};

// Polynomial prefix hashes modulo the Mersenne prime 2^61 - 1 under two
// independent bases. Substring hashes are O(1); equal substrings always
// hash equally, and callers verify equal hashes by direct comparison.
class RollingHash {
 public:
  explicit RollingHash(std::span<const Symbol> text);

  std::size_t size() const noexcept { return prefix1_.size() - 1; }
  HashPair substring(std::size_t pos, std::size_t len) const noexcept;

 private:
  std::vector<std::uint64_t> prefix1_, prefix2_, power1_, power2_;
};

}  // namespace minorbit
