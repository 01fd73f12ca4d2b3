#pragma once

// Correlation sums, correlation-dimension slope fits, and Renyi-2 entropies
// from cylinder sums (exact enumeration or plug-in estimates).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "minorbit/bernoulli.hpp"
#include "minorbit/rds_core.hpp"
#include "minorbit/rng.hpp"

namespace minorbit::dimension {

class RadiusGrid {
 public:
  // Radii r_max * ratio^k, k = 0..count-1. Throws DomainError unless
  // r_max > 0, 0 < ratio < 1 and count >= 4.
  RadiusGrid(double r_max, double ratio, std::size_t count);
  // count radii log-spaced from r_hi down to r_lo.
  static RadiusGrid log_spaced(double r_lo, double r_hi, std::size_t count);

  double r_max() const noexcept { return r_max_; }
  double ratio() const noexcept { return ratio_; }
  std::size_t count() const noexcept { return radii_.size(); }
  // Strictly decreasing.
  const std::vector<double>& radii() const noexcept { return radii_; }

 private:
  double r_max_;
  double ratio_;
  std::vector<double> radii_;
};

enum class CurveKind { Annealed, Quenched };

struct CurvePoint {
  double r;
  double c;
};

struct CorrelationCurve {
  std::vector<CurvePoint> points;  // increasing r
  CurveKind kind = CurveKind::Annealed;
  std::size_t env_count = 1;
  std::size_t points_per_env = 0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double residual = 0.0;  // RMS of ln C about the fitted line
  std::size_t used_points = 0;
};

// Fraction of ordered pairs (a, b), a != b, at circle distance <= r.
// Throws DomainError for fewer than two points or coordinates outside [0, 1).
double correlation_sum(std::span<const double> points, double r);
std::vector<double> correlation_sums(std::span<const double> points,
                                     std::span<const double> radii);

// Same, for words under the metric base^-(agreement depth). Two words that
// agree over their common length are at distance 0.
double correlation_sum(std::span<const std::vector<Symbol>> words, double base,
                       double r);
std::vector<double> correlation_sums(std::span<const std::vector<Symbol>> words,
                                     double base, std::span<const double> radii);

// Circle samplers return a coordinate in [0, 1); symbolic samplers a word.
using CircleSampler = std::function<double(std::uint64_t point_seed)>;
using CircleEnvSampler =
    std::function<double(std::uint64_t env_seed, std::uint64_t point_seed)>;
using WordSampler = std::function<std::vector<Symbol>(std::uint64_t point_seed)>;
using WordEnvSampler = std::function<std::vector<Symbol>(std::uint64_t env_seed,
                                                         std::uint64_t point_seed)>;

// Pooled sample of M points, each with its own environment. M >= 100.
CorrelationCurve annealed_curve(const CircleSampler& sampler, std::size_t m,
                                const RadiusGrid& grid, std::uint64_t seed);
CorrelationCurve annealed_curve(const WordSampler& sampler, double base,
                                std::size_t m, const RadiusGrid& grid,
                                std::uint64_t seed);

// Correlation sums of M points drawn under the single environment env_seed.
CorrelationCurve environment_curve(const CircleEnvSampler& sampler,
                                   std::uint64_t env_seed, std::size_t m,
                                   const RadiusGrid& grid, std::uint64_t seed);
CorrelationCurve environment_curve(const WordEnvSampler& sampler, double base,
                                   std::uint64_t env_seed, std::size_t m,
                                   const RadiusGrid& grid, std::uint64_t seed);

// Average of environment_curve over K environments. K >= 10, M >= 100.
CorrelationCurve quenched_curve(const CircleEnvSampler& sampler, std::size_t k,
                                std::size_t m, const RadiusGrid& grid,
                                std::uint64_t seed);
CorrelationCurve quenched_curve(const WordEnvSampler& sampler, double base,
                                std::size_t k, std::size_t m,
                                const RadiusGrid& grid, std::uint64_t seed);

// Seeds used for environment e and its point a inside quenched_curve.
std::uint64_t environment_seed(std::uint64_t seed, std::size_t e);
std::uint64_t point_seed(std::uint64_t seed, std::size_t a);

// Least squares of ln C on ln r over points with r_lo <= r <= r_hi and
// C > 0. Throws FitError with fewer than 4 such points.
SlopeFit fit_dimension(const CorrelationCurve& curve, double r_lo, double r_hi);
// Fit over the middle half of the curve's radii.
SlopeFit fit_dimension(const CorrelationCurve& curve);

// Slopes between consecutive points with C > 0, at the geometric mean radius.
std::vector<CurvePoint> local_slopes(const CorrelationCurve& curve);

// I.i.d. environment over `env_weights`; given the environment symbol e,
// the fiber symbol s has probability emission[e][s].
class ProductCylinderModel {
 public:
  ProductCylinderModel(std::vector<double> env_weights,
                       std::vector<std::vector<double>> emission);
  static ProductCylinderModel from_bernoulli(const bernoulli::BernoulliParams& params);

  std::size_t env_alphabet() const noexcept { return env_weights_.size(); }
  std::size_t alphabet() const noexcept { return emission_.front().size(); }
  double env_weight(std::size_t e) const { return env_weights_.at(e); }
  double emission(std::size_t e, std::size_t s) const { return emission_.at(e).at(s); }

 private:
  std::vector<double> env_weights_;
  std::vector<std::vector<double>> emission_;
};

enum class QuenchedEnumeration {
  // Every environment word with the per-symbol product of fiber sums.
  PerSymbol,
  // Every (environment word, cylinder) pair.
  FullEnvironment,
};

inline constexpr std::size_t kMaxExactDepth = 24;
inline constexpr std::size_t kMaxFullEnvironmentDepth = 12;

// Sum over all k-cylinders C of mu(C)^2, mu the annealed (environment-averaged)
// measure. Throws ResourceError for k > kMaxExactDepth.
double annealed_cylinder_sum(const ProductCylinderModel& model, std::size_t k);
// Environment average of sum_C mu_omega(C)^2. Throws ResourceError for k
// beyond the limit of the chosen enumeration.
double quenched_cylinder_sum(const ProductCylinderModel& model, std::size_t k,
                             QuenchedEnumeration mode = QuenchedEnumeration::PerSymbol);

struct EntropyEstimate {
  std::size_t k;
  double annealed;
  double quenched;
};

// -(1/k) log2 of the exact sums, for each k in [k_lo, k_hi].
std::vector<EntropyEstimate> renyi_from_cylinders(
    const ProductCylinderModel& model, std::size_t k_lo, std::size_t k_hi,
    QuenchedEnumeration mode = QuenchedEnumeration::PerSymbol);

// Plug-in sum over sliding k-grams of one word.
double empirical_cylinder_sum(std::span<const Symbol> word, std::size_t k);
// Plug-in entropy -(1/k) log2 of empirical_cylinder_sum.
double renyi_empirical(std::span<const Symbol> word, std::size_t k);

struct EmpiricalSums {
  double pooled;    // k-gram counts pooled over all words
  double averaged;  // mean over words of each word's own sum
};

// One word per sampled environment; words must have equal length so that
// averaged >= pooled holds exactly.
EmpiricalSums empirical_cylinder_sums(std::span<const std::vector<Symbol>> words,
                                      std::size_t k);
std::vector<EntropyEstimate> renyi_empirical(
    std::span<const std::vector<Symbol>> words, std::size_t k_lo, std::size_t k_hi);

}  // namespace minorbit::dimension
