#include "minorbit/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minorbit/errors.hpp"
#include "minorbit/rng.hpp"

namespace minorbit::bernoulli {

BernoulliParams::BernoulliParams(double p_a, double p_b) : p_a_(p_a), p_b_(p_b) {
  if (!(p_a > 0.0 && p_a < 1.0) || !(p_b > 0.0 && p_b < 1.0)) {
    throw DomainError("Bernoulli parameters must lie in (0, 1), got pA=" +
                      std::to_string(p_a) + " pB=" + std::to_string(p_b));
  }
}

std::string_view regime_name(Regime regime) noexcept {
  switch (regime) {
    case Regime::Annealed: return "annealed";
    case Regime::Quenched: return "quenched";
    case Regime::Boundary: return "boundary";
  }
  return "unknown";
}

double mu_cylinder_annealed(const BernoulliParams& params,
                            std::span<const Symbol> word) {
  if (word.empty()) throw DomainError("cylinder word must be non-empty");
  const double s = params.p_a() + params.p_b();
  double mu = 1.0;
  for (Symbol x : word) {
    if (x > 1) throw DomainError("fiber symbols must be 0 or 1");
    mu *= (x == 0 ? s : 2.0 - s) * 0.5;
  }
  return mu;
}

double mu_cylinder_quenched(const BernoulliParams& params,
                            std::span<const Symbol> env_word,
                            std::span<const Symbol> word) {
  if (env_word.size() != word.size()) {
    throw DomainError("environment and cylinder words differ in length");
  }
  double mu = 1.0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] > 1 || env_word[i] > 1) {
      throw DomainError("symbols must be binary");
    }
    mu *= params.fiber_prob(env_word[i], word[i]);
  }
  return mu;
}

double renyi_annealed(const BernoulliParams& params) noexcept {
  const double s = params.p_a() + params.p_b();
  return -std::log2((s * s - 2.0 * s + 2.0) / 2.0);
}

double renyi_quenched(const BernoulliParams& params) noexcept {
  const double a = params.p_a();
  const double b = params.p_b();
  const double collision =
      (a * a + b * b + (1.0 - a) * (1.0 - a) + (1.0 - b) * (1.0 - b)) / 2.0;
  return -std::log2(collision);
}

double renyi_quenched_alternate_form(const BernoulliParams& params) noexcept {
  const double a = params.p_a() * params.p_a() - 0.5;
  const double b = params.p_b() * params.p_b() - 0.5;
  return -std::log2(a * a + b * b + 0.5);
}

std::string_view quenched_formula_note() noexcept {
  return "H2_qu is computed from the cylinder sum "
         "-log2((pA^2+pB^2+(1-pA)^2+(1-pB)^2)/2). The alternate form "
         "-log2((pA^2-1/2)^2+(pB^2-1/2)^2+1/2) is not equal to it (at "
         "pA=pB=1/2 the log arguments are 1/2 vs 5/8); the commonly quoted diagonal "
         "boundary c- ~ 0.23205 is a root of the alternate form, while the "
         "cylinder-sum form gives c- = 1/2 - sqrt(sqrt(2)-1)/2 ~ 0.178203.";
}

Regime classify(double h2_an, double h2_qu) noexcept {
  const double annealed = 2.0 / h2_an;
  const double quenched = 1.0 / h2_qu;
  const double top = std::max(annealed, quenched);
  if (std::fabs(annealed - quenched) <= kBoundaryTolerance * top) {
    return Regime::Boundary;
  }
  return annealed > quenched ? Regime::Annealed : Regime::Quenched;
}

PhasePoint exponent(const BernoulliParams& params) {
  const double h2_an = renyi_annealed(params);
  const double h2_qu = renyi_quenched(params);
  return PhasePoint{params, h2_an, h2_qu,
                    std::max(2.0 / h2_an, 1.0 / h2_qu),
                    classify(h2_an, h2_qu)};
}

namespace {

constexpr double kBracketEdge = 1e-9;

double bisect(const std::function<double(double)>& g, double lo, double hi,
              double tol) {
  double g_lo = g(lo);
  const double g_hi = g(hi);
  if (!(g_lo * g_hi < 0.0)) {
    throw SolverError("boundary equation has no sign change on [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  if (std::fabs(g(root)) > tol) {
    throw SolverError("bisection root misses the boundary equation by more "
                      "than the tolerance");
  }
  return root;
}

}  // namespace

DiagonalBoundary phase_boundary_diag(double tol, const EntropyFn& h2_an,
                                     const EntropyFn& h2_qu) {
  if (!(tol >= 1e-12)) throw DomainError("boundary tolerance must be >= 1e-12");
  const auto g = [&](double p) {
    return 2.0 * h2_qu(p, 1.0 - p) - h2_an(p, 1.0 - p);
  };
  return DiagonalBoundary{bisect(g, kBracketEdge, 0.5, tol),
                          bisect(g, 0.5, 1.0 - kBracketEdge, tol)};
}

DiagonalBoundary phase_boundary_diag(double tol) {
  return phase_boundary_diag(
      tol,
      [](double a, double b) { return renyi_annealed(BernoulliParams(a, b)); },
      [](double a, double b) { return renyi_quenched(BernoulliParams(a, b)); });
}

DiagonalBoundary diagonal_boundary_closed_form() noexcept {
  const double half_width = 0.5 * std::sqrt(std::sqrt(2.0) - 1.0);
  return {0.5 - half_width, 0.5 + half_width};
}

DiagonalBoundary diagonal_boundary_alternate() noexcept {
  const double half_width =
      0.5 * std::sqrt(2.0 * std::sqrt(std::sqrt(2.0) - 1.0) - 1.0);
  return {0.5 - half_width, 0.5 + half_width};
}

std::vector<PhasePoint> phase_grid(std::size_t resolution) {
  if (resolution < 16) throw DomainError("phase grid resolution must be >= 16");
  std::vector<PhasePoint> grid;
  grid.reserve(resolution * resolution);
  const double step = 1.0 / static_cast<double>(resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double p_a = (static_cast<double>(i) + 0.5) * step;
    for (std::size_t j = 0; j < resolution; ++j) {
      const double p_b = (static_cast<double>(j) + 0.5) * step;
      grid.push_back(exponent(BernoulliParams(p_a, p_b)));
    }
  }
  return grid;
}

EnvPath sample_environment(std::uint64_t seed, std::size_t length) {
  return EnvPath::generate(seed, std::string(kEnvModelId), 2, 0,
                           static_cast<std::int64_t>(length));
}

std::vector<Symbol> sample_fiber_sequence(const BernoulliParams& params,
                                          const EnvPath& env,
                                          std::uint64_t seed,
                                          std::size_t length) {
  if (!env.covers(0, static_cast<std::int64_t>(length))) {
    throw LengthError("environment does not cover the fiber sequence");
  }
  const std::uint64_t key = rng::combine(seed, rng::hash_label("bernoulli-fiber"));
  std::vector<Symbol> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double u = rng::uniform(key, i);
    out[i] = u < params.p_zero(env[static_cast<std::int64_t>(i)]) ? 0 : 1;
  }
  return out;
}

}  // namespace minorbit::bernoulli
