#include "minorbit/suffix_automaton.hpp"

#include <algorithm>
#include <string>

#include "minorbit/errors.hpp"

namespace minorbit {

SuffixAutomaton::SuffixAutomaton(std::span<const Symbol> text, unsigned alphabet)
    : alphabet_(alphabet) {
  if (alphabet_ == 0 || alphabet_ > kMaxAlphabet) {
    throw DomainError("suffix automaton alphabet must be in [1, " +
                      std::to_string(kMaxAlphabet) + "]");
  }
  const std::size_t capacity = 2 * text.size() + 1;
  len_.reserve(capacity);
  link_.reserve(capacity);
  max_end_.reserve(capacity);
  next_.reserve(capacity * alphabet_);

  std::vector<bool> is_clone;
  is_clone.reserve(capacity);
  auto new_state = [&](std::int32_t len, std::int32_t link, std::int64_t end,
                       bool clone) {
    len_.push_back(len);
    link_.push_back(link);
    max_end_.push_back(end);
    is_clone.push_back(clone);
    next_.insert(next_.end(), alphabet_, -1);
    return static_cast<std::int32_t>(len_.size() - 1);
  };

  new_state(0, -1, -1, true);
  std::int32_t last = 0;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const Symbol c = text[pos];
    if (c >= alphabet_) throw DomainError("symbol outside automaton alphabet");
    const std::int32_t cur =
        new_state(len_[last] + 1, 0, static_cast<std::int64_t>(pos), false);
    std::int32_t p = last;
    while (p != -1 && next_[p * alphabet_ + c] == -1) {
      next_[p * alphabet_ + c] = cur;
      p = link_[p];
    }
    if (p != -1) {
      const std::int32_t q = next_[p * alphabet_ + c];
      if (len_[p] + 1 == len_[q]) {
        link_[cur] = q;
      } else {
        const std::int32_t clone = new_state(len_[p] + 1, link_[q], -1, true);
        std::copy_n(next_.begin() + static_cast<std::ptrdiff_t>(q) * alphabet_,
                    alphabet_,
                    next_.begin() + static_cast<std::ptrdiff_t>(clone) * alphabet_);
        while (p != -1 && next_[p * alphabet_ + c] == q) {
          next_[p * alphabet_ + c] = clone;
          p = link_[p];
        }
        link_[q] = clone;
        link_[cur] = clone;
      }
    }
    last = cur;
  }

  // End positions of a state are the union over its suffix-link subtree, so
  // the maximum propagates from longer to shorter states.
  std::vector<std::int32_t> order(len_.size());
  for (std::size_t s = 0; s < order.size(); ++s) order[s] = static_cast<std::int32_t>(s);
  std::sort(order.begin(), order.end(), [this](std::int32_t a, std::int32_t b) {
    return len_[a] > len_[b];
  });
  for (std::int32_t s : order) {
    if (link_[s] >= 0) max_end_[link_[s]] = std::max(max_end_[link_[s]], max_end_[s]);
  }
}

bool SuffixAutomaton::contains(std::span<const Symbol> pattern) const noexcept {
  std::int32_t s = 0;
  for (Symbol c : pattern) {
    if (c >= alphabet_) return false;
    s = transition(s, c);
    if (s < 0) return false;
  }
  return true;
}

SubstringMatch longest_common_substring(std::span<const Symbol> x,
                                        std::size_t x_starts,
                                        std::span<const Symbol> y,
                                        std::size_t y_starts, unsigned alphabet) {
  x_starts = std::min(x_starts, x.size());
  y_starts = std::min(y_starts, y.size());
  if (x_starts == 0 || y_starts == 0) {
    throw DomainError("longest_common_substring needs at least one start "
                      "position in each sequence");
  }
  // x[i..i+m) is the reversed-x substring ending at |x|-1-i, so i < x_starts
  // iff it ends at or after `threshold`.
  const std::vector<Symbol> xr(x.rbegin(), x.rend());
  const SuffixAutomaton sam(xr, alphabet);
  const auto threshold = static_cast<std::int64_t>(x.size() - x_starts);

  // Nearest ancestor-or-self whose largest end position clears the
  // threshold. The root (empty string) always qualifies.
  const std::size_t states = sam.state_count();
  std::vector<std::int32_t> by_len(states);
  for (std::size_t s = 0; s < states; ++s) by_len[s] = static_cast<std::int32_t>(s);
  std::sort(by_len.begin(), by_len.end(), [&](std::int32_t a, std::int32_t b) {
    return sam.length(a) < sam.length(b);
  });
  std::vector<std::int32_t> admissible(states, 0);
  for (std::int32_t s : by_len) {
    if (s == 0 || sam.max_end(s) >= threshold) {
      admissible[s] = s;
    } else {
      admissible[s] = admissible[sam.link(s)];
    }
  }

  SubstringMatch best{0, 0, 0};
  bool have_best = false;
  const std::int64_t last_x = static_cast<std::int64_t>(x.size()) - 1;
  std::int32_t state = 0;
  std::size_t matched = 0;
  // Stream reversed y: position e of yr is y index |y|-1-e.
  for (std::size_t e = 0; e < y.size(); ++e) {
    const Symbol c = y[y.size() - 1 - e];
    if (c >= alphabet) throw DomainError("symbol outside automaton alphabet");
    while (state != 0 && sam.transition(state, c) < 0) {
      state = sam.link(state);
      matched = static_cast<std::size_t>(sam.length(state));
    }
    if (sam.transition(state, c) >= 0) {
      state = sam.transition(state, c);
      ++matched;
    } else {
      matched = 0;
    }
    const std::size_t j = y.size() - 1 - e;
    if (j >= y_starts) continue;

    const std::int32_t good = admissible[state];
    const std::size_t length =
        good == state ? matched : static_cast<std::size_t>(sam.length(good));
    const std::int64_t end = good == 0 ? last_x : sam.max_end(good);
    const std::size_t i = static_cast<std::size_t>(last_x - end);
    if (!have_best || length > best.length ||
        (length == best.length && (i < best.i || (i == best.i && j < best.j)))) {
      best = SubstringMatch{length, i, j};
      have_best = true;
    }
  }
  return best;
}

}  // namespace minorbit
