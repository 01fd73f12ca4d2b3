#pragma once

// The random Bernoulli shift: the environment is a fair i.i.d. sequence over
// {A, B}, and given omega the fiber symbols are independent with
// P(x_i = 0) = p_{omega_i}. Everything here is closed form or an exact
// sampler; entropies are in bits.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "minorbit/rds_core.hpp"

namespace minorbit::bernoulli {

inline constexpr Symbol kEnvA = 0;
inline constexpr Symbol kEnvB = 1;
inline constexpr std::string_view kEnvModelId = "bernoulli-env";

class BernoulliParams {
 public:
  // Throws DomainError unless both probabilities lie in the open interval.
  BernoulliParams(double p_a, double p_b);

  double p_a() const noexcept { return p_a_; }
  double p_b() const noexcept { return p_b_; }
  // P(x = 0) under the fiber measure selected by env symbol A or B.
  double p_zero(Symbol env) const noexcept { return env == kEnvA ? p_a_ : p_b_; }
  // mu_env(symbol) with mu_A(0) = pA, mu_A(1) = 1 - pA, likewise for B.
  double fiber_prob(Symbol env, Symbol symbol) const noexcept {
    const double p = p_zero(env);
    return symbol == 0 ? p : 1.0 - p;
  }

 private:
  double p_a_;
  double p_b_;
};

enum class Regime { Annealed, Quenched, Boundary };
std::string_view regime_name(Regime regime) noexcept;

// Relative tolerance on |2/h2_an - 1/h2_qu| for declaring Boundary.
inline constexpr double kBoundaryTolerance = 1e-9;

struct PhasePoint {
  BernoulliParams params;
  double h2_an;
  double h2_qu;
  double exponent;  // max(2/h2_an, 1/h2_qu)
  Regime regime;
};

// Annealed cylinder measure: 2^-k (pA+pB)^#0 (2-pA-pB)^#1.
double mu_cylinder_annealed(const BernoulliParams& params,
                            std::span<const Symbol> word);
// Quenched cylinder measure: prod_i mu_{env_i}(word_i).
double mu_cylinder_quenched(const BernoulliParams& params,
                            std::span<const Symbol> env_word,
                            std::span<const Symbol> word);

double renyi_annealed(const BernoulliParams& params) noexcept;
// From the cylinder sum: -log2((pA^2 + pB^2 + (1-pA)^2 + (1-pB)^2) / 2).
double renyi_quenched(const BernoulliParams& params) noexcept;
// -log2((pA^2 - 1/2)^2 + (pB^2 - 1/2)^2 + 1/2). Does not agree with the
// cylinder sum; exposed only so reports can show the discrepancy.
double renyi_quenched_alternate_form(const BernoulliParams& params) noexcept;
std::string_view quenched_formula_note() noexcept;

Regime classify(double h2_an, double h2_qu) noexcept;
PhasePoint exponent(const BernoulliParams& params);

struct DiagonalBoundary {
  double c_minus;
  double c_plus;
};

// Entropy as a function of (pA, pB), bits per symbol.
using EntropyFn = std::function<double(double, double)>;

// Roots of 2*H_qu(p, 1-p) - H_an(p, 1-p) on (0, 1/2) and (1/2, 1), bisected
// to full double resolution. Throws SolverError if a bracket has no sign
// change or the root misses the equation by more than tol.
DiagonalBoundary phase_boundary_diag(double tol);
DiagonalBoundary phase_boundary_diag(double tol, const EntropyFn& h2_an,
                                     const EntropyFn& h2_qu);
// Closed form of the boundary for the cylinder-sum entropies:
// 1/2 -+ sqrt(sqrt(2) - 1) / 2.
DiagonalBoundary diagonal_boundary_closed_form() noexcept;
// 1/2 -+ sqrt(2 sqrt(sqrt(2) - 1) - 1) / 2, the commonly quoted boundary
// that goes with the alternate quenched form.
DiagonalBoundary diagonal_boundary_alternate() noexcept;

// resolution x resolution cell centres ((i + 1/2)/res, (j + 1/2)/res),
// pA-major.
std::vector<PhasePoint> phase_grid(std::size_t resolution);

// Fair i.i.d. {A, B} path on [0, length).
EnvPath sample_environment(std::uint64_t seed, std::size_t length);
// Fiber symbols x_0..x_{length-1}, independent given env, with
// P(x_i = 0) = p_{env_i}. Throws LengthError if env does not cover
// [0, length).
std::vector<Symbol> sample_fiber_sequence(const BernoulliParams& params,
                                          const EnvPath& env,
                                          std::uint64_t seed,
                                          std::size_t length);

}  // namespace minorbit::bernoulli
