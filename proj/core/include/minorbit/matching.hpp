#pragma once

// Minimal-distance statistics between two orbit windows of length n.
//
// On the shift with metric b^-k the minimal distance over admissible time
// pairs (i, j) is b^-m where m is the longest common extension of x[i..] and
// y[j..]; lcs_match computes that m exactly. On the circle min_dist_match
// computes the admissible nearest pair directly. Five index sets are
// supported: all pairs, the diagonal i = j, the band |i - j| <= alpha, its
// complement |i - j| > alpha, and far thirds i < n/3, 2n/3 <= j < n.

#include <compare>
#include <cstddef>
#include <span>
#include <string>

#include "minorbit/circle_point.hpp"
#include "minorbit/rds_core.hpp"

namespace minorbit {

enum class ConstraintKind { All, Diagonal, Band, OffBand, FarThirds };

struct MatchConstraint {
  ConstraintKind kind = ConstraintKind::All;
  std::size_t alpha = 0;  // Band / OffBand only

  static MatchConstraint all() { return {ConstraintKind::All, 0}; }
  static MatchConstraint diagonal() { return {ConstraintKind::Diagonal, 0}; }
  static MatchConstraint band(std::size_t a) { return {ConstraintKind::Band, a}; }
  static MatchConstraint off_band(std::size_t a) { return {ConstraintKind::OffBand, a}; }
  static MatchConstraint far_thirds() { return {ConstraintKind::FarThirds, 0}; }

  // Whether the time pair (i, j) belongs to the index set for window n.
  bool admits(std::size_t i, std::size_t j, std::size_t n) const noexcept;
  // Throws DomainError if the index set is empty or ill-formed for n.
  void validate(std::size_t n) const;
  std::string name() const;
};

// i < n/3 and 2n/3 <= j < n in integer form.
std::size_t far_thirds_x_limit(std::size_t n) noexcept;  // ceil(n/3)
std::size_t far_thirds_y_begin(std::size_t n) noexcept;  // ceil(2n/3)

struct Witness {
  std::size_t i = 0;
  std::size_t j = 0;
  friend auto operator<=>(const Witness&, const Witness&) = default;
};

// Symbolic result: length m of the longest admissible common extension.
struct MatchResult {
  std::size_t length = 0;
  Witness witness;
  // The witness extension stops at the end of x or y rather than at a
  // mismatch, so the true value may be larger.
  bool truncated = false;
  std::size_t n = 0;
};

enum class LcsAlgorithm {
  Auto,             // pick per constraint and alphabet
  SuffixAutomaton,  // All, FarThirds
  DiagonalScan,     // Diagonal, Band
  RollingHash,      // any constraint
};

// Throws LengthError if |x| or |y| < n, DomainError for an invalid
// constraint or an algorithm that does not support it.
MatchResult lcs_match(std::span<const Symbol> x, std::span<const Symbol> y,
                      std::size_t n, MatchConstraint constraint,
                      LcsAlgorithm algorithm = LcsAlgorithm::Auto);

// Metric result: the admissible nearest pair, smallest (i, j) on ties.
template <class Distance>
struct NearestMatch {
  Distance distance{};
  Witness witness;
  std::size_t n = 0;
};

NearestMatch<double> min_dist_match(std::span<const double> xs,
                                    std::span<const double> ys,
                                    MatchConstraint constraint);
NearestMatch<CirclePoint> min_dist_match(std::span<const CirclePoint> xs,
                                         std::span<const CirclePoint> ys,
                                         MatchConstraint constraint);

// b^-m. For b = 2 and m <= 1000 this is exact, so -log2 recovers m.
double to_distance(std::size_t m, double base);
// ln of b^-m without underflow.
double to_log_distance(std::size_t m, double base);

struct ExponentValue {
  double value = 0.0;
  bool collision = false;  // exact zero distance; value is +infinity
};

// -log(min distance) / log n. Throws DomainError for n < 2.
ExponentValue exponent_statistic(const MatchResult& result, std::size_t n,
                                 double base);
ExponentValue exponent_statistic(const NearestMatch<double>& result,
                                 std::size_t n);
ExponentValue exponent_statistic(const NearestMatch<CirclePoint>& result,
                                 std::size_t n);

}  // namespace minorbit
