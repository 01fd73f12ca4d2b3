#pragma once

// Discretized transfer operators of full-branch circle maps x -> l x mod 1
// with potentials phi, and fiber measures mu_omega obtained as normalized
// quotients of operator products along a window of the environment.
//
// A window (center c, back n, forward m) uses the operators selected by
// omega_{c-n}, ..., omega_{c-1} to build a back product h = L...L(1), and
// omega_c, ..., omega_{c+m} for the forward product; mu_omega at time c is
//   f -> [L_{c+m}...L_c (f h)](x) / [L_{c+m}...L_c h](x).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "minorbit/rds_core.hpp"

namespace minorbit::transfer {

// Values at the nodes k/G, evaluated in between by linear interpolation
// with wraparound.
class GridFunction {
 public:
  explicit GridFunction(std::vector<double> values);
  static GridFunction sample(std::size_t grid_size,
                             const std::function<double(double)>& f);
  static GridFunction constant(std::size_t grid_size, double value);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double at(std::size_t k) const { return values_.at(k); }
  double operator()(double x) const noexcept;

 private:
  std::vector<double> values_;
};

inline constexpr std::size_t kMinGridSize = 256;

class CircleMapFamily {
 public:
  // Throws DomainError for a degree below 2, a potential of the wrong size
  // or with non-finite values, or G < kMinGridSize.
  CircleMapFamily(std::vector<std::uint32_t> degrees,
                  std::vector<GridFunction> potentials);

  // phi_i = -ln l_i: Lebesgue is invariant for every map.
  static CircleMapFamily conformal(std::vector<std::uint32_t> degrees,
                                   std::size_t grid_size);
  // The doubling map with phi = -ln 2 + eps cos(2 pi x).
  static CircleMapFamily cosine_perturbed_doubling(double eps, std::size_t grid_size);

  std::size_t size() const noexcept { return degrees_.size(); }
  std::size_t grid_size() const noexcept { return grid_; }
  std::uint32_t degree(std::size_t i) const { return degrees_.at(i); }
  const GridFunction& potential(std::size_t i) const { return potentials_.at(i); }
  const std::vector<std::uint32_t>& degrees() const noexcept { return degrees_; }

  // out = A_i in and out = A_i^T in for the node matrix of L_i. Throws
  // DomainError for an invalid index.
  void apply(std::size_t i, std::span<const double> in, std::span<double> out) const;
  void apply_dual(std::size_t i, std::span<const double> in, std::span<double> out) const;

 private:
  struct Stencil {
    std::size_t width = 0;          // entries per row
    std::vector<std::uint32_t> col;
    std::vector<double> weight;
  };
  const Stencil& stencil(std::size_t i) const;

  std::vector<std::uint32_t> degrees_;
  std::vector<GridFunction> potentials_;
  std::size_t grid_ = 0;
  std::vector<Stencil> stencils_;
};

// (L_i f)(k/G) = sum over the l_i preimages y of k/G of e^{phi_i(y)} f(y).
GridFunction apply_transfer(const CircleMapFamily& family, std::size_t i,
                            const GridFunction& f);

struct FiberWindow {
  std::int64_t center = 0;
  std::size_t back = 1;     // n
  std::size_t forward = 1;  // m
};

using TestFunction = std::function<double(double)>;

// Periodic C^1 version of the indicator of [a, b], 0 <= a < b <= 1, with
// cubic ramps of the given width centred on a and b. Its integral over the
// circle is exactly b - a while width <= min(b - a, 1 - (b - a)).
TestFunction smoothed_indicator(double a, double b, double width);

struct FiberValue {
  double value = 0.0;
  // max - min over nodes of the primal quotient; goes to 0 as the window
  // grows.
  double residual = 0.0;
};

// mu_omega at one window. The node-0 functional of the forward product
// times the back product gives nodal weights; integrals use them as a
// piecewise-linear density with per-cell Gauss-Legendre quadrature, so the
// constant function integrates to 1 exactly and x to 1/2 exactly in the
// conformal case.
class FiberMeasure {
 public:
  // Throws DomainError for n or m = 0 or an environment symbol outside the
  // family, LengthError if omega does not cover [c - n, c + m].
  FiberMeasure(const CircleMapFamily& family, const EnvPath& omega,
               FiberWindow window);

  const FiberWindow& window() const noexcept { return window_; }
  // Nonnegative nodal density values rho_k; the piecewise-linear
  // interpolant integrates to 1.
  const std::vector<double>& density() const noexcept { return density_; }

  double integrate(const TestFunction& f) const;
  double residual(const TestFunction& f) const;
  FiberValue evaluate(const TestFunction& f) const;

  // Exact CDF of the piecewise-linear density at t.
  double cdf(double t) const;

 private:
  const CircleMapFamily* family_;
  std::vector<Symbol> forward_ops_;
  FiberWindow window_;
  std::vector<double> back_;     // h, normalized to max 1
  std::vector<double> dual_;     // node-0 functional, normalized
  std::vector<double> density_;
  std::vector<double> cell_mass_prefix_;  // CDF at the nodes
};

FiberValue fiber_measure(const CircleMapFamily& family, const EnvPath& omega,
                         FiberWindow window, const TestFunction& f);
FiberValue fiber_measure(const CircleMapFamily& family, const EnvPath& omega,
                         FiberWindow window, const GridFunction& f);

struct AdaptiveResult {
  FiberValue value;
  std::size_t depth = 0;  // n = m at the accepted window
  std::vector<double> residual_trace;
};

// Doubles n = m from `start` until the residual is at most tol. Throws
// ConvergenceError once the residual has failed to decrease over 5
// consecutive doublings, LengthError if omega runs out first.
AdaptiveResult fiber_measure_adaptive(const CircleMapFamily& family,
                                      const EnvPath& omega, std::int64_t center,
                                      const TestFunction& f, double tol,
                                      std::size_t start = 4);

struct CdfTable {
  std::vector<double> t;  // j / B, j = 0..B
  std::vector<double> F;  // nondecreasing, F.front() = 0, F.back() = 1
  // Inverse by linear interpolation between table points.
  double quantile(double u) const;
};

// Throws DomainError for B < 64.
CdfTable fiber_cdf(const CircleMapFamily& family, const EnvPath& omega,
                   FiberWindow window, std::size_t bins);

// max over f of |mu_omega(f o T_{omega_c}) - mu_{theta omega}(f)|, with
// mu_{theta omega} taken at center c + 1 and the same n, m. Needs omega to
// cover [c - n, c + m + 1].
double pushforward_residual(const CircleMapFamily& family, const EnvPath& omega,
                            FiberWindow window, std::span<const TestFunction> tests);

struct MixingCurve {
  std::vector<double> values;  // k = 0..k_max
  double log_slope = 0.0;      // fitted d ln(value) / dk
  std::size_t fitted_points = 0;
};

inline constexpr double kMixingFloor = 1e-14;

// |mu_omega(f g o T_omega^k) - mu_omega(f) mu_{theta^k omega}(g)| for
// k = 0..k_max, with g o T^k pulled out through k operator applications.
// The forward end of the window stays at c + m, so k_max <= m is required.
// The slope is a least-squares fit of ln(value) on k over values clipped
// at kMixingFloor, up to and including the first clipped one; it is 0 when
// fewer than two points remain.
MixingCurve fiber_mixing_curve(const CircleMapFamily& family, const EnvPath& omega,
                               FiberWindow window, const TestFunction& f,
                               const TestFunction& g, std::size_t k_max);

}  // namespace minorbit::transfer
