#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minorbit/rds_core.hpp"

namespace minorbit {

// Suffix automaton with dense transition rows, for small alphabets.
class SuffixAutomaton {
 public:
  static constexpr unsigned kMaxAlphabet = 16;

  // Throws DomainError if a symbol is >= alphabet or alphabet > kMaxAlphabet.
  SuffixAutomaton(std::span<const Symbol> text, unsigned alphabet);

  std::size_t state_count() const noexcept { return len_.size(); }
  unsigned alphabet() const noexcept { return alphabet_; }

  std::int32_t transition(std::int32_t state, Symbol c) const noexcept {
    return next_[static_cast<std::size_t>(state) * alphabet_ + c];
  }
  std::int32_t link(std::int32_t state) const noexcept { return link_[state]; }
  std::int32_t length(std::int32_t state) const noexcept { return len_[state]; }
  // Largest end position of the strings of `state` in the text (root: the
  // last text position, or -1 for empty text).
  std::int64_t max_end(std::int32_t state) const noexcept { return max_end_[state]; }

  // True iff `pattern` occurs in the text.
  bool contains(std::span<const Symbol> pattern) const noexcept;

 private:
  unsigned alphabet_;
  std::vector<std::int32_t> len_;
  std::vector<std::int32_t> link_;
  std::vector<std::int64_t> max_end_;
  std::vector<std::int32_t> next_;
};

struct SubstringMatch {
  std::size_t length = 0;
  std::size_t i = 0;  // start in x
  std::size_t j = 0;  // start in y
};

// Longest m with x[i..i+m) == y[j..j+m) over starts i < x_starts,
// j < y_starts (m may run to the end of either sequence). Among optimal
// pairs, returns the lexicographically smallest (i, j). Linear time: the
// automaton is built over reversed x, so "start < x_starts" becomes a
// threshold on the largest end position of each state.
SubstringMatch longest_common_substring(std::span<const Symbol> x,
                                        std::size_t x_starts,
                                        std::span<const Symbol> y,
                                        std::size_t y_starts, unsigned alphabet);

}  // namespace minorbit
