#include "minorbit/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minorbit/errors.hpp"

namespace minorbit::dimension {

RadiusGrid::RadiusGrid(double r_max, double ratio, std::size_t count)
    : r_max_(r_max), ratio_(ratio) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw DomainError("radius grid needs a positive finite r_max");
  }
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw DomainError("radius grid ratio must lie in (0, 1)");
  }
  if (count < 4) throw DomainError("radius grid needs at least 4 radii");
  radii_.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double r = r_max * std::pow(ratio, static_cast<double>(k));
    if (!(r > 0.0) || (!radii_.empty() && !(r < radii_.back()))) {
      throw DomainError("radius grid underflows before reaching count radii");
    }
    radii_.push_back(r);
  }
}

RadiusGrid RadiusGrid::log_spaced(double r_lo, double r_hi, std::size_t count) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) {
    throw DomainError("log-spaced grid needs 0 < r_lo < r_hi");
  }
  if (count < 4) throw DomainError("radius grid needs at least 4 radii");
  const double ratio = std::pow(r_lo / r_hi, 1.0 / static_cast<double>(count - 1));
  return RadiusGrid(r_hi, ratio, count);
}

namespace {

void check_circle(std::span<const double> points) {
  if (points.size() < 2) throw DomainError("correlation sum needs at least 2 points");
  for (double p : points) {
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("circle coordinate outside [0, 1)");
  }
}

void check_radius(double r) {
  if (!(r >= 0.0)) throw DomainError("radius must be nonnegative");
}

double forward_gap(double from, double to) {
  return to >= from ? to - from : 1.0 + (to - from);
}

double ordered_pairs(std::size_t m) {
  return static_cast<double>(m) * static_cast<double>(m - 1);
}

// Ordered pairs within r of each other on sorted coordinates. The set of
// points within r of x is the union of a forward arc (a prefix of the order
// rotated to start at x) and a backward arc (a suffix of it), found by
// binary search on the one-sided gaps. When both arcs together hold fewer
// than all points they cannot overlap.
std::uint64_t circle_pair_count(const std::vector<double>& sorted, double r) {
  const std::size_t m = sorted.size();
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < m; ++a) {
    const double x = sorted[a];
    const std::size_t p = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
    auto at = [&](std::size_t step) { return sorted[(p + step) % m]; };
    // Forward arc: steps [0, f) with forward gap <= r.
    std::size_t lo = 0, hi = m;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (forward_gap(x, at(mid)) <= r) lo = mid + 1; else hi = mid;
    }
    const std::size_t f = lo;
    std::size_t within = f;
    if (f < m) {
      // Backward arc among the remaining steps, walking down from step m-1.
      const std::size_t rest = m - f;
      lo = 0;
      hi = rest;
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (forward_gap(at(m - 1 - mid), x) <= r) lo = mid + 1; else hi = mid;
      }
      within += lo;
    }
    total += within - 1;  // x itself sits in the forward arc
  }
  return total;
}

std::size_t common_depth(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
  return SymbolicSpace::agreement_depth(a, b);
}

}  // namespace

double correlation_sum(std::span<const double> points, double r) {
  const double radii[] = {r};
  return correlation_sums(points, radii).front();
}

std::vector<double> correlation_sums(std::span<const double> points,
                                     std::span<const double> radii) {
  check_circle(points);
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    check_radius(r);
    out.push_back(static_cast<double>(circle_pair_count(sorted, r)) /
                  ordered_pairs(sorted.size()));
  }
  return out;
}

double correlation_sum(std::span<const std::vector<Symbol>> words, double base,
                       double r) {
  const double radii[] = {r};
  return correlation_sums(words, base, radii).front();
}

std::vector<double> correlation_sums(std::span<const std::vector<Symbol>> words,
                                     double base, std::span<const double> radii) {
  if (words.size() < 2) throw DomainError("correlation sum needs at least 2 points");
  if (!(base > 1.0)) throw DomainError("metric base must exceed 1");
  const std::size_t length = words.front().size();
  for (const auto& w : words) {
    if (w.size() != length) throw DomainError("symbolic points must have equal length");
  }
  // With equal lengths the agreement depth is an ultrametric, so in sorted
  // order the points within any radius form contiguous runs.
  std::vector<const std::vector<Symbol>*> sorted;
  sorted.reserve(words.size());
  for (const auto& w : words) sorted.push_back(&w);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return *a < *b; });
  std::vector<std::size_t> lcp(sorted.size() - 1);
  for (std::size_t a = 0; a + 1 < sorted.size(); ++a) {
    lcp[a] = common_depth(*sorted[a], *sorted[a + 1]);
  }

  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    check_radius(r);
    // Smallest depth whose distance is within r; identical words (depth =
    // length, distance 0) always qualify.
    std::size_t need = 0;
    while (need < length && depth_to_distance(need, base) > r) ++need;
    std::uint64_t pairs = 0;
    std::uint64_t run = 1;
    for (std::size_t a = 0; a < lcp.size(); ++a) {
      if (lcp[a] >= need) {
        ++run;
      } else {
        pairs += run * (run - 1);
        run = 1;
      }
    }
    pairs += run * (run - 1);
    out.push_back(static_cast<double>(pairs) / ordered_pairs(sorted.size()));
  }
  return out;
}

std::uint64_t environment_seed(std::uint64_t seed, std::size_t e) {
  return rng::combine(rng::combine(seed, rng::hash_label("env")), e);
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t a) {
  return rng::combine(rng::combine(seed, rng::hash_label("point")), a);
}

namespace {

void check_sample_size(std::size_t m) {
  if (m < 100) throw DomainError("correlation curves need at least 100 points");
}

CorrelationCurve make_curve(const RadiusGrid& grid, const std::vector<double>& sums,
                            CurveKind kind, std::size_t envs, std::size_t m) {
  CorrelationCurve curve;
  curve.kind = kind;
  curve.env_count = envs;
  curve.points_per_env = m;
  const auto& radii = grid.radii();
  for (std::size_t k = radii.size(); k-- > 0;) {
    curve.points.push_back(CurvePoint{radii[k], sums[k]});
  }
  return curve;
}

template <class Point, class Sum>
CorrelationCurve sample_curve(std::size_t m, const RadiusGrid& grid,
                              std::uint64_t seed, CurveKind kind,
                              const std::function<Point(std::uint64_t)>& draw,
                              const Sum& sums) {
  check_sample_size(m);
  std::vector<Point> points;
  points.reserve(m);
  for (std::size_t a = 0; a < m; ++a) points.push_back(draw(point_seed(seed, a)));
  return make_curve(grid, sums(points, grid.radii()), kind, 1, m);
}

CorrelationCurve average_curves(const std::vector<CorrelationCurve>& curves,
                                std::size_t m) {
  CorrelationCurve out = curves.front();
  out.kind = CurveKind::Quenched;
  out.env_count = curves.size();
  out.points_per_env = m;
  for (std::size_t p = 0; p < out.points.size(); ++p) {
    double total = 0.0;
    for (const auto& c : curves) total += c.points[p].c;
    out.points[p].c = total / static_cast<double>(curves.size());
  }
  return out;
}

void check_env_count(std::size_t k) {
  if (k < 10) throw DomainError("quenched curves need at least 10 environments");
}

}  // namespace

CorrelationCurve annealed_curve(const CircleSampler& sampler, std::size_t m,
                                const RadiusGrid& grid, std::uint64_t seed) {
  return sample_curve<double>(
      m, grid, seed, CurveKind::Annealed, sampler,
      [](const std::vector<double>& pts, const std::vector<double>& radii) {
        return correlation_sums(pts, radii);
      });
}

CorrelationCurve annealed_curve(const WordSampler& sampler, double base,
                                std::size_t m, const RadiusGrid& grid,
                                std::uint64_t seed) {
  return sample_curve<std::vector<Symbol>>(
      m, grid, seed, CurveKind::Annealed, sampler,
      [base](const std::vector<std::vector<Symbol>>& pts,
             const std::vector<double>& radii) {
        return correlation_sums(pts, base, radii);
      });
}

CorrelationCurve environment_curve(const CircleEnvSampler& sampler,
                                   std::uint64_t env_seed, std::size_t m,
                                   const RadiusGrid& grid, std::uint64_t seed) {
  const std::function<double(std::uint64_t)> draw = [&](std::uint64_t s) {
    return sampler(env_seed, s);
  };
  return sample_curve<double>(
      m, grid, rng::combine(seed, env_seed), CurveKind::Quenched, draw,
      [](const std::vector<double>& pts, const std::vector<double>& radii) {
        return correlation_sums(pts, radii);
      });
}

CorrelationCurve environment_curve(const WordEnvSampler& sampler, double base,
                                   std::uint64_t env_seed, std::size_t m,
                                   const RadiusGrid& grid, std::uint64_t seed) {
  const std::function<std::vector<Symbol>(std::uint64_t)> draw =
      [&](std::uint64_t s) { return sampler(env_seed, s); };
  return sample_curve<std::vector<Symbol>>(
      m, grid, rng::combine(seed, env_seed), CurveKind::Quenched, draw,
      [base](const std::vector<std::vector<Symbol>>& pts,
             const std::vector<double>& radii) {
        return correlation_sums(pts, base, radii);
      });
}

CorrelationCurve quenched_curve(const CircleEnvSampler& sampler, std::size_t k,
                                std::size_t m, const RadiusGrid& grid,
                                std::uint64_t seed) {
  check_env_count(k);
  check_sample_size(m);
  std::vector<CorrelationCurve> curves;
  for (std::size_t e = 0; e < k; ++e) {
    curves.push_back(environment_curve(sampler, environment_seed(seed, e), m, grid, seed));
  }
  return average_curves(curves, m);
}

CorrelationCurve quenched_curve(const WordEnvSampler& sampler, double base,
                                std::size_t k, std::size_t m,
                                const RadiusGrid& grid, std::uint64_t seed) {
  check_env_count(k);
  check_sample_size(m);
  std::vector<CorrelationCurve> curves;
  for (std::size_t e = 0; e < k; ++e) {
    curves.push_back(
        environment_curve(sampler, base, environment_seed(seed, e), m, grid, seed));
  }
  return average_curves(curves, m);
}

SlopeFit fit_dimension(const CorrelationCurve& curve, double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !(r_hi >= r_lo)) {
    throw DomainError("fit range needs 0 < r_lo <= r_hi");
  }
  // Radii built by repeated multiplication can miss user-given endpoints by
  // an ulp or two.
  const double lo = r_lo * (1.0 - 1e-12);
  const double hi = r_hi * (1.0 + 1e-12);
  std::vector<double> xs, ys;
  for (const auto& p : curve.points) {
    if (p.r >= lo && p.r <= hi && p.c > 0.0) {
      xs.push_back(std::log(p.r));
      ys.push_back(std::log(p.c));
    }
  }
  if (xs.size() < 4) {
    throw FitError("slope fit needs at least 4 points with C(r) > 0 in range, got " +
                   std::to_string(xs.size()));
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_lo = r_lo;
  fit.r_hi = r_hi;
  fit.used_points = xs.size();
  double ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double e = ys[k] - (fit.intercept + fit.slope * xs[k]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / count);
  return fit;
}

SlopeFit fit_dimension(const CorrelationCurve& curve) {
  const std::size_t n = curve.points.size();
  if (n < 4) throw FitError("curve has fewer than 4 points");
  const std::size_t lo = n / 4;
  const std::size_t hi = n - 1 - n / 4;
  return fit_dimension(curve, curve.points[lo].r, curve.points[hi].r);
}

std::vector<CurvePoint> local_slopes(const CorrelationCurve& curve) {
  std::vector<CurvePoint> out;
  const CurvePoint* prev = nullptr;
  for (const auto& p : curve.points) {
    if (!(p.c > 0.0)) continue;
    if (prev != nullptr) {
      out.push_back(CurvePoint{std::sqrt(prev->r * p.r),
                               std::log(p.c / prev->c) / std::log(p.r / prev->r)});
    }
    prev = &p;
  }
  return out;
}

ProductCylinderModel::ProductCylinderModel(std::vector<double> env_weights,
                                           std::vector<std::vector<double>> emission)
    : env_weights_(std::move(env_weights)), emission_(std::move(emission)) {
  if (env_weights_.empty() || env_weights_.size() != emission_.size()) {
    throw DomainError("cylinder model needs one emission row per environment symbol");
  }
  auto check_distribution = [](const std::vector<double>& row, const char* what) {
    double total = 0.0;
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError(std::string(what) + " has an entry outside [0, 1]");
      }
      total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
      throw DomainError(std::string(what) + " does not sum to 1");
    }
  };
  check_distribution(env_weights_, "environment weights");
  const std::size_t alphabet = emission_.front().size();
  if (alphabet == 0) throw DomainError("empty emission alphabet");
  for (const auto& row : emission_) {
    if (row.size() != alphabet) throw DomainError("emission rows differ in length");
    check_distribution(row, "emission row");
  }
}

ProductCylinderModel ProductCylinderModel::from_bernoulli(
    const bernoulli::BernoulliParams& params) {
  return ProductCylinderModel(
      {0.5, 0.5}, {{params.p_a(), 1.0 - params.p_a()}, {params.p_b(), 1.0 - params.p_b()}});
}

namespace {

constexpr double kMaxLeaves = 16777216.0;  // 2^24

void check_leaves(std::size_t branching, std::size_t k, std::size_t depth_limit,
                  const char* what) {
  const double leaves = std::pow(static_cast<double>(branching), static_cast<double>(k));
  if (k > depth_limit || leaves > kMaxLeaves) {
    throw ResourceError(std::string(what) + ": depth " + std::to_string(k) +
                        " exceeds the exact enumeration limit");
  }
}

// Sum over all words w of length k of prod_t weight[w_t], squared if
// `square`, by depth-first enumeration.
double enumerate(const std::vector<double>& weight, std::size_t k, bool square) {
  double total = 0.0;
  std::vector<double> prefix(k + 1, 1.0);
  std::vector<std::size_t> digit(k, 0);
  std::size_t depth = 0;
  if (k == 0) return 1.0;
  // Iterative odometer over digits, reusing prefix products.
  while (true) {
    while (depth < k) {
      prefix[depth + 1] = prefix[depth] * weight[digit[depth]];
      ++depth;
    }
    const double v = prefix[k];
    total += square ? v * v : v;
    // Advance.
    std::size_t d = k;
    while (d > 0) {
      --d;
      if (++digit[d] < weight.size()) break;
      digit[d] = 0;
      if (d == 0) return total;
    }
    depth = d;
  }
}

}  // namespace

double annealed_cylinder_sum(const ProductCylinderModel& model, std::size_t k) {
  check_leaves(model.alphabet(), k, kMaxExactDepth, "annealed cylinder sum");
  std::vector<double> symbol(model.alphabet(), 0.0);
  for (std::size_t e = 0; e < model.env_alphabet(); ++e) {
    for (std::size_t s = 0; s < model.alphabet(); ++s) {
      symbol[s] += model.env_weight(e) * model.emission(e, s);
    }
  }
  return enumerate(symbol, k, true);
}

double quenched_cylinder_sum(const ProductCylinderModel& model, std::size_t k,
                             QuenchedEnumeration mode) {
  const std::size_t envs = model.env_alphabet();
  const std::size_t alphabet = model.alphabet();
  if (mode == QuenchedEnumeration::PerSymbol) {
    check_leaves(envs, k, kMaxExactDepth, "quenched cylinder sum");
    // Each environment word contributes its probability times
    // prod_t sum_s emission[w_t][s]^2; fold both into one per-symbol weight.
    std::vector<double> weight(envs, 0.0);
    for (std::size_t e = 0; e < envs; ++e) {
      double s2 = 0.0;
      for (std::size_t s = 0; s < alphabet; ++s) s2 += model.emission(e, s) * model.emission(e, s);
      weight[e] = model.env_weight(e) * s2;
    }
    return enumerate(weight, k, false);
  }

  check_leaves(envs * alphabet, k, kMaxFullEnvironmentDepth, "quenched cylinder sum");
  std::vector<double> env_weight(envs);
  for (std::size_t e = 0; e < envs; ++e) env_weight[e] = model.env_weight(e);
  double total = 0.0;
  std::vector<std::size_t> env_word(k, 0);
  while (true) {
    double p_env = 1.0;
    for (std::size_t t = 0; t < k; ++t) p_env *= env_weight[env_word[t]];
    // Cylinders under this environment word, enumerated explicitly.
    double cyl = 0.0;
    std::vector<std::size_t> word(k, 0);
    while (true) {
      double mu = 1.0;
      for (std::size_t t = 0; t < k; ++t) mu *= model.emission(env_word[t], word[t]);
      cyl += mu * mu;
      std::size_t d = k;
      bool done = true;
      while (d > 0) {
        --d;
        if (++word[d] < alphabet) { done = false; break; }
        word[d] = 0;
      }
      if (done) break;
    }
    total += p_env * cyl;
    std::size_t d = k;
    bool done = true;
    while (d > 0) {
      --d;
      if (++env_word[d] < envs) { done = false; break; }
      env_word[d] = 0;
    }
    if (done) break;
  }
  return total;
}

std::vector<EntropyEstimate> renyi_from_cylinders(const ProductCylinderModel& model,
                                                  std::size_t k_lo, std::size_t k_hi,
                                                  QuenchedEnumeration mode) {
  if (k_lo == 0 || k_hi < k_lo) throw DomainError("cylinder depth range must satisfy 1 <= k_lo <= k_hi");
  std::vector<EntropyEstimate> out;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const double kk = static_cast<double>(k);
    out.push_back(EntropyEstimate{k, -std::log2(annealed_cylinder_sum(model, k)) / kk,
                                  -std::log2(quenched_cylinder_sum(model, k, mode)) / kk});
  }
  return out;
}

namespace {

// Codes of all sliding k-grams, sorted.
std::vector<std::uint64_t> kgram_codes(std::span<const Symbol> word, std::size_t k,
                                       unsigned bits) {
  if (k == 0) throw DomainError("k-gram length must be positive");
  if (word.size() < k) throw DomainError("word shorter than k");
  if (static_cast<std::size_t>(bits) * k > 64) {
    throw ResourceError("k-gram does not fit a 64-bit code");
  }
  const std::uint64_t mask =
      bits * k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << (bits * k)) - 1;
  std::vector<std::uint64_t> codes;
  codes.reserve(word.size() - k + 1);
  std::uint64_t code = 0;
  for (std::size_t t = 0; t < word.size(); ++t) {
    code = ((code << bits) | word[t]) & mask;
    if (t + 1 >= k) codes.push_back(code);
  }
  std::sort(codes.begin(), codes.end());
  return codes;
}

double sum_of_squares(const std::vector<std::uint64_t>& codes) {
  const double total = static_cast<double>(codes.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < codes.size();) {
    std::size_t b = a;
    while (b < codes.size() && codes[b] == codes[a]) ++b;
    const double p = static_cast<double>(b - a) / total;
    sum += p * p;
    a = b;
  }
  return sum;
}

unsigned bits_for(unsigned top) {
  unsigned bits = 1;
  while ((1u << bits) <= top) ++bits;
  return bits;
}

unsigned max_symbol(std::span<const Symbol> word) {
  unsigned top = 0;
  for (Symbol s : word) top = std::max<unsigned>(top, s);
  return top;
}

}  // namespace

double empirical_cylinder_sum(std::span<const Symbol> word, std::size_t k) {
  return sum_of_squares(kgram_codes(word, k, bits_for(max_symbol(word))));
}

double renyi_empirical(std::span<const Symbol> word, std::size_t k) {
  return -std::log2(empirical_cylinder_sum(word, k)) / static_cast<double>(k);
}

EmpiricalSums empirical_cylinder_sums(std::span<const std::vector<Symbol>> words,
                                      std::size_t k) {
  if (words.empty()) throw DomainError("no words given");
  for (const auto& w : words) {
    if (w.size() != words.front().size()) {
      throw DomainError("words must have equal length");
    }
  }
  unsigned top = 0;
  for (const auto& w : words) top = std::max(top, max_symbol(w));
  const unsigned bits = bits_for(top);
  std::vector<std::uint64_t> pooled;
  double averaged = 0.0;
  for (const auto& w : words) {
    auto codes = kgram_codes(w, k, bits);
    averaged += sum_of_squares(codes);
    pooled.insert(pooled.end(), codes.begin(), codes.end());
  }
  std::sort(pooled.begin(), pooled.end());
  return EmpiricalSums{sum_of_squares(pooled),
                       averaged / static_cast<double>(words.size())};
}

std::vector<EntropyEstimate> renyi_empirical(std::span<const std::vector<Symbol>> words,
                                             std::size_t k_lo, std::size_t k_hi) {
  if (k_lo == 0 || k_hi < k_lo) throw DomainError("k range must satisfy 1 <= k_lo <= k_hi");
  std::vector<EntropyEstimate> out;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const auto sums = empirical_cylinder_sums(words, k);
    const double kk = static_cast<double>(k);
    out.push_back(EntropyEstimate{k, -std::log2(sums.pooled) / kk,
                                  -std::log2(sums.averaged) / kk});
  }
  return out;
}

}  // namespace minorbit::dimension
