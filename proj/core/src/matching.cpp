#include "minorbit/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "minorbit/errors.hpp"
#include "minorbit/rolling_hash.hpp"
#include "minorbit/suffix_automaton.hpp"

namespace minorbit {

bool MatchConstraint::admits(std::size_t i, std::size_t j,
                             std::size_t n) const noexcept {
  if (i >= n || j >= n) return false;
  const std::size_t gap = i > j ? i - j : j - i;
  switch (kind) {
    case ConstraintKind::All: return true;
    case ConstraintKind::Diagonal: return i == j;
    case ConstraintKind::Band: return gap <= alpha;
    case ConstraintKind::OffBand: return gap > alpha;
    case ConstraintKind::FarThirds:
      return i < far_thirds_x_limit(n) && j >= far_thirds_y_begin(n);
  }
  return false;
}

void MatchConstraint::validate(std::size_t n) const {
  if (n == 0) throw DomainError("window length n must be positive");
  if (kind == ConstraintKind::FarThirds && n < 3) {
    throw DomainError("far-thirds constraint needs n >= 3");
  }
  if (kind == ConstraintKind::OffBand && alpha + 1 >= n) {
    throw DomainError("off-band constraint admits no pair: alpha >= n - 1");
  }
}

std::string MatchConstraint::name() const {
  switch (kind) {
    case ConstraintKind::All: return "all";
    case ConstraintKind::Diagonal: return "diag";
    case ConstraintKind::Band: return "band";
    case ConstraintKind::OffBand: return "offband";
    case ConstraintKind::FarThirds: return "farthirds";
  }
  return "unknown";
}

std::size_t far_thirds_x_limit(std::size_t n) noexcept { return (n + 2) / 3; }
std::size_t far_thirds_y_begin(std::size_t n) noexcept { return (2 * n + 2) / 3; }

namespace {

struct Candidate {
  std::size_t length = 0;
  Witness witness;
  bool valid = false;

  void offer(std::size_t len, std::size_t i, std::size_t j) {
    const Witness w{i, j};
    if (!valid || len > length || (len == length && w < witness)) {
      length = len;
      witness = w;
      valid = true;
    }
  }
};

unsigned alphabet_of(std::span<const Symbol> x, std::span<const Symbol> y) {
  unsigned top = 0;
  for (Symbol s : x) top = std::max<unsigned>(top, s);
  for (Symbol s : y) top = std::max<unsigned>(top, s);
  return top + 1;
}

// Runs of x[i+k] == y[i+d+k] along each diagonal d in [d_lo, d_hi], scanned
// backwards so each start's extension is known in O(1).
Candidate diagonal_scan(std::span<const Symbol> x, std::span<const Symbol> y,
                        std::size_t n, std::ptrdiff_t d_lo, std::ptrdiff_t d_hi) {
  Candidate best;
  const auto nx = static_cast<std::ptrdiff_t>(x.size());
  const auto ny = static_cast<std::ptrdiff_t>(y.size());
  const auto nn = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t d = d_lo; d <= d_hi; ++d) {
    const std::ptrdiff_t i_lo = std::max<std::ptrdiff_t>(0, -d);
    const std::ptrdiff_t start_hi = std::min(nn, nn - d);  // i < n, i + d < n
    const std::ptrdiff_t ext_hi = std::min(nx, ny - d);
    if (start_hi <= i_lo) continue;
    std::size_t run = 0;
    for (std::ptrdiff_t i = ext_hi - 1; i >= i_lo; --i) {
      run = x[static_cast<std::size_t>(i)] == y[static_cast<std::size_t>(i + d)]
                ? run + 1
                : 0;
      if (i < start_hi) {
        best.offer(run, static_cast<std::size_t>(i), static_cast<std::size_t>(i + d));
      }
    }
  }
  return best;
}

// Binary search on the match length over a rolling-hash index of x's
// m-grams; every hash hit is confirmed by direct comparison.
class HashMatcher {
 public:
  HashMatcher(std::span<const Symbol> x, std::span<const Symbol> y,
              std::size_t n, MatchConstraint constraint)
      : x_(x), y_(y), n_(n), c_(constraint), hx_(x), hy_(y) {
    x_end_ = c_.kind == ConstraintKind::FarThirds ? far_thirds_x_limit(n) : n;
    y_begin_ = c_.kind == ConstraintKind::FarThirds ? far_thirds_y_begin(n) : 0;
  }

  Candidate solve() {
    // Gallop to an infeasible length, then bisect.
    std::size_t lo = 0;
    std::size_t hi = std::min(x_.size(), y_.size());
    std::size_t probe = 1;
    while (probe <= hi && find(probe, false).valid) {
      lo = probe;
      probe *= 2;
    }
    hi = std::min(hi, probe - 1);
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo + 1) / 2;
      if (find(mid, false).valid) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return find(lo, true);
  }

 private:
  struct Entry {
    HashPair hash;
    std::size_t i;
  };

  bool equal_at(std::size_t i, std::size_t j, std::size_t m) const {
    return std::equal(x_.begin() + static_cast<std::ptrdiff_t>(i),
                      x_.begin() + static_cast<std::ptrdiff_t>(i + m),
                      y_.begin() + static_cast<std::ptrdiff_t>(j));
  }

  // Smallest verified admissible i for y-start j within a hash group.
  std::optional<std::size_t> first_partner(std::span<const Entry> group,
                                           std::size_t j, std::size_t m) const {
    auto try_range = [&](std::size_t from, std::size_t to,
                         std::size_t i_max) -> std::optional<std::size_t> {
      for (std::size_t k = from; k < to && group[k].i <= i_max; ++k) {
        if (equal_at(group[k].i, j, m)) return group[k].i;
      }
      return std::nullopt;
    };
    auto lower = [&](std::size_t value) {
      return static_cast<std::size_t>(
          std::lower_bound(group.begin(), group.end(), value,
                           [](const Entry& e, std::size_t v) { return e.i < v; }) -
          group.begin());
    };
    constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();
    switch (c_.kind) {
      case ConstraintKind::All:
      case ConstraintKind::FarThirds:
        return try_range(0, group.size(), kNoLimit);
      case ConstraintKind::Diagonal:
        return try_range(lower(j), group.size(), j);
      case ConstraintKind::Band: {
        const std::size_t from = j > c_.alpha ? j - c_.alpha : 0;
        return try_range(lower(from), group.size(), j + c_.alpha);
      }
      case ConstraintKind::OffBand: {
        if (j > c_.alpha) {
          if (auto hit = try_range(0, group.size(), j - c_.alpha - 1)) return hit;
        }
        return try_range(lower(j + c_.alpha + 1), group.size(), kNoLimit);
      }
    }
    return std::nullopt;
  }

  // With want_witness, scans every j for the lexicographically smallest
  // admissible pair; otherwise stops at the first one.
  Candidate find(std::size_t m, bool want_witness) {
    Candidate out;
    entries_.clear();
    for (std::size_t i = 0; i < x_end_ && i + m <= x_.size(); ++i) {
      entries_.push_back(Entry{hx_.substring(i, m), i});
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return a.hash < b.hash || (a.hash == b.hash && a.i < b.i);
    });
    for (std::size_t j = y_begin_; j < n_ && j + m <= y_.size(); ++j) {
      const HashPair h = hy_.substring(j, m);
      const auto range = std::equal_range(
          entries_.begin(), entries_.end(), Entry{h, 0},
          [](const Entry& a, const Entry& b) { return a.hash < b.hash; });
      if (range.first == range.second) continue;
      const std::span<const Entry> group(&*range.first,
                                         static_cast<std::size_t>(range.second - range.first));
      if (auto i = first_partner(group, j, m)) {
        out.offer(m, *i, j);
        if (!want_witness) return out;
      }
    }
    return out;
  }

  std::span<const Symbol> x_, y_;
  std::size_t n_;
  MatchConstraint c_;
  RollingHash hx_, hy_;
  std::size_t x_end_ = 0, y_begin_ = 0;
  std::vector<Entry> entries_;
};

Candidate automaton_route(std::span<const Symbol> x, std::span<const Symbol> y,
                          std::size_t n, MatchConstraint c, unsigned alphabet) {
  Candidate out;
  if (c.kind == ConstraintKind::All) {
    const auto m = longest_common_substring(x, n, y, n, alphabet);
    out.offer(m.length, m.i, m.j);
  } else {
    const std::size_t b = far_thirds_y_begin(n);
    const auto m = longest_common_substring(x, far_thirds_x_limit(n),
                                            y.subspan(b), n - b, alphabet);
    out.offer(m.length, m.i, m.j + b);
  }
  return out;
}

}  // namespace

MatchResult lcs_match(std::span<const Symbol> x, std::span<const Symbol> y,
                      std::size_t n, MatchConstraint constraint,
                      LcsAlgorithm algorithm) {
  if (n == 0) throw DomainError("window length n must be positive");
  if (x.size() < n || y.size() < n) {
    throw LengthError("sequences are shorter than the window length n");
  }
  constraint.validate(n);
  const unsigned alphabet = alphabet_of(x, y);
  const ConstraintKind kind = constraint.kind;
  const bool band_covers_all =
      kind == ConstraintKind::Band && constraint.alpha + 1 >= n;

  if (algorithm == LcsAlgorithm::Auto) {
    const bool small_alphabet = alphabet <= SuffixAutomaton::kMaxAlphabet;
    if (kind == ConstraintKind::All || kind == ConstraintKind::FarThirds ||
        band_covers_all) {
      algorithm = small_alphabet ? LcsAlgorithm::SuffixAutomaton
                                 : LcsAlgorithm::RollingHash;
    } else if (kind == ConstraintKind::Diagonal || kind == ConstraintKind::Band) {
      algorithm = LcsAlgorithm::DiagonalScan;
    } else {
      algorithm = LcsAlgorithm::RollingHash;
    }
  }

  Candidate best;
  switch (algorithm) {
    case LcsAlgorithm::SuffixAutomaton: {
      if (band_covers_all) {
        best = automaton_route(x, y, n, MatchConstraint::all(), alphabet);
      } else if (kind == ConstraintKind::All || kind == ConstraintKind::FarThirds) {
        best = automaton_route(x, y, n, constraint, alphabet);
      } else {
        throw DomainError("suffix automaton route supports all/farthirds only");
      }
      break;
    }
    case LcsAlgorithm::DiagonalScan: {
      if (kind == ConstraintKind::Diagonal) {
        best = diagonal_scan(x, y, n, 0, 0);
      } else if (kind == ConstraintKind::Band) {
        const auto reach = static_cast<std::ptrdiff_t>(std::min(constraint.alpha, n - 1));
        best = diagonal_scan(x, y, n, -reach, reach);
      } else {
        throw DomainError("diagonal scan supports diag/band only");
      }
      break;
    }
    case LcsAlgorithm::RollingHash:
      best = HashMatcher(x, y, n, constraint).solve();
      break;
    case LcsAlgorithm::Auto:
      break;
  }

  MatchResult result;
  result.length = best.length;
  result.witness = best.witness;
  result.n = n;
  result.truncated = best.witness.i + best.length >= x.size() ||
                     best.witness.j + best.length >= y.size();
  return result;
}

namespace {

template <class P>
struct PointOps;

template <>
struct PointOps<double> {
  using Distance = double;
  static Distance distance(double a, double b) { return CircleSpace::distance(a, b); }
  // (to - from) mod 1, using the same arithmetic as distance().
  static Distance forward_gap(double from, double to) {
    return to >= from ? to - from : 1.0 + (to - from);
  }
  static void check(double p) {
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("circle coordinate outside [0, 1)");
  }
};

template <>
struct PointOps<CirclePoint> {
  using Distance = CirclePoint;
  static Distance distance(const CirclePoint& a, const CirclePoint& b) {
    return circle_distance(a, b);
  }
  static Distance forward_gap(const CirclePoint& from, const CirclePoint& to) {
    return circle_difference(to, from);
  }
  static void check(const CirclePoint& p) {
    if (p.limb_count() == 0) throw DomainError("circle point has no precision");
  }
};

template <class P>
class NearestSearch {
 public:
  using Ops = PointOps<P>;
  using Distance = typename Ops::Distance;

  NearestSearch(std::span<const P> xs, std::span<const P> ys, MatchConstraint c)
      : xs_(xs), ys_(ys), c_(c), n_(xs.size()) {}

  NearestMatch<Distance> run() {
    switch (c_.kind) {
      case ConstraintKind::Diagonal:
        for (std::size_t i = 0; i < n_; ++i) offer(i, i);
        break;
      case ConstraintKind::Band:
        for (std::size_t i = 0; i < n_; ++i) {
          const std::size_t lo = i > c_.alpha ? i - c_.alpha : 0;
          const std::size_t hi = std::min(n_ - 1, i + c_.alpha);
          for (std::size_t j = lo; j <= hi; ++j) offer(i, j);
        }
        break;
      case ConstraintKind::FarThirds:
        sweep(0, far_thirds_x_limit(n_), far_thirds_y_begin(n_), n_);
        break;
      case ConstraintKind::All:
      case ConstraintKind::OffBand:
        sweep(0, n_, 0, n_);
        break;
    }
    return NearestMatch<Distance>{*best_, witness_, n_};
  }

 private:
  void offer(std::size_t i, std::size_t j) {
    if (!c_.admits(i, j, n_)) return;
    Distance d = Ops::distance(xs_[i], ys_[j]);
    const Witness w{i, j};
    if (!best_ || d < *best_ || (d == *best_ && w < witness_)) {
      best_ = std::move(d);
      witness_ = w;
    }
  }

  // For each x point, walk the sorted y points outward in both directions
  // until the one-sided gap exceeds the best distance found so far. Every y
  // within the current best of x is visited, so ties are resolved exactly.
  void sweep(std::size_t x_begin, std::size_t x_end, std::size_t y_begin,
             std::size_t y_end) {
    std::vector<std::size_t> order(y_end - y_begin);
    std::iota(order.begin(), order.end(), y_begin);
    std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
      return ys_[a] < ys_[b];
    });
    const std::size_t m = order.size();
    for (std::size_t i = x_begin; i < x_end; ++i) {
      const P& x = xs_[i];
      const std::size_t p = static_cast<std::size_t>(
          std::lower_bound(order.begin(), order.end(), x,
                           [this](std::size_t k, const P& v) { return ys_[k] < v; }) -
          order.begin());
      for (std::size_t step = 0; step < m; ++step) {
        const std::size_t j = order[(p + step) % m];
        if (best_ && *best_ < Ops::forward_gap(x, ys_[j])) break;
        offer(i, j);
      }
      for (std::size_t step = 1; step <= m; ++step) {
        const std::size_t j = order[(p + m - (step % m)) % m];
        if (best_ && *best_ < Ops::forward_gap(ys_[j], x)) break;
        offer(i, j);
      }
    }
  }

  std::span<const P> xs_, ys_;
  MatchConstraint c_;
  std::size_t n_;
  std::optional<Distance> best_;
  Witness witness_;
};

template <class P>
NearestMatch<typename PointOps<P>::Distance> nearest(std::span<const P> xs,
                                                     std::span<const P> ys,
                                                     MatchConstraint c) {
  if (xs.empty() || ys.empty()) throw DomainError("empty orbit window");
  if (xs.size() != ys.size()) throw DomainError("orbit windows differ in length");
  c.validate(xs.size());
  for (const auto& p : xs) PointOps<P>::check(p);
  for (const auto& p : ys) PointOps<P>::check(p);
  return NearestSearch<P>(xs, ys, c).run();
}

}  // namespace

NearestMatch<double> min_dist_match(std::span<const double> xs,
                                    std::span<const double> ys,
                                    MatchConstraint constraint) {
  return nearest<double>(xs, ys, constraint);
}

NearestMatch<CirclePoint> min_dist_match(std::span<const CirclePoint> xs,
                                         std::span<const CirclePoint> ys,
                                         MatchConstraint constraint) {
  return nearest<CirclePoint>(xs, ys, constraint);
}

double to_distance(std::size_t m, double base) { return depth_to_distance(m, base); }

double to_log_distance(std::size_t m, double base) {
  return -static_cast<double>(m) * std::log(base);
}

namespace {

void require_window(std::size_t n) {
  if (n < 2) throw DomainError("exponent statistic needs n >= 2");
}

}  // namespace

ExponentValue exponent_statistic(const MatchResult& result, std::size_t n,
                                 double base) {
  require_window(n);
  return {static_cast<double>(result.length) * std::log(base) /
              std::log(static_cast<double>(n)),
          false};
}

ExponentValue exponent_statistic(const NearestMatch<double>& result,
                                 std::size_t n) {
  require_window(n);
  if (result.distance == 0.0) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  return {-std::log(result.distance) / std::log(static_cast<double>(n)), false};
}

ExponentValue exponent_statistic(const NearestMatch<CirclePoint>& result,
                                 std::size_t n) {
  require_window(n);
  if (result.distance.is_zero()) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  return {-result.distance.log2() * std::log(2.0) / std::log(static_cast<double>(n)),
          false};
}

}  // namespace minorbit
