#include "minorbit/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "minorbit/errors.hpp"

namespace minorbit::transfer {

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("grid function needs at least one node");
}

GridFunction GridFunction::sample(std::size_t grid_size,
                                  const std::function<double(double)>& f) {
  std::vector<double> v(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    v[k] = f(static_cast<double>(k) / static_cast<double>(grid_size));
  }
  return GridFunction(std::move(v));
}

GridFunction GridFunction::constant(std::size_t grid_size, double value) {
  return GridFunction(std::vector<double>(grid_size, value));
}

double GridFunction::operator()(double x) const noexcept {
  const std::size_t g = values_.size();
  double t = (x - std::floor(x)) * static_cast<double>(g);
  auto k = static_cast<std::size_t>(t);
  if (k >= g) k = g - 1;  // x just below 1 rounding up
  const double frac = t - static_cast<double>(k);
  const double a = values_[k];
  const double b = values_[(k + 1) % g];
  return a + frac * (b - a);
}

CircleMapFamily::CircleMapFamily(std::vector<std::uint32_t> degrees,
                                 std::vector<GridFunction> potentials)
    : degrees_(std::move(degrees)), potentials_(std::move(potentials)) {
  if (degrees_.empty() || degrees_.size() != potentials_.size()) {
    throw DomainError("circle map family needs one potential per map");
  }
  grid_ = potentials_.front().size();
  if (grid_ < kMinGridSize) {
    throw DomainError("grid size must be at least " + std::to_string(kMinGridSize));
  }
  for (std::size_t i = 0; i < degrees_.size(); ++i) {
    if (degrees_[i] < 2) throw DomainError("circle map degrees must be at least 2");
    if (potentials_[i].size() != grid_) {
      throw DomainError("all potentials must live on the same grid");
    }
    for (double v : potentials_[i].values()) {
      if (!std::isfinite(v)) throw DomainError("potential has a non-finite value");
    }
  }

  // Row k of A_i: for each branch m the preimage y = (k/G + m)/l sits at
  // grid coordinate (k + m G)/l, between nodes q and q+1 with fraction r/l.
  stencils_.resize(degrees_.size());
  for (std::size_t i = 0; i < degrees_.size(); ++i) {
    const std::uint64_t l = degrees_[i];
    const auto& phi = potentials_[i].values();
    Stencil& s = stencils_[i];
    s.width = 2 * l;
    s.col.resize(grid_ * s.width);
    s.weight.resize(grid_ * s.width);
    for (std::size_t k = 0; k < grid_; ++k) {
      for (std::uint64_t m = 0; m < l; ++m) {
        const std::uint64_t num = k + m * grid_;
        const std::size_t q = static_cast<std::size_t>(num / l) % grid_;
        const std::size_t q1 = (q + 1) % grid_;
        const double frac = static_cast<double>(num % l) / static_cast<double>(l);
        const double w = std::exp(phi[q] + frac * (phi[q1] - phi[q]));
        const std::size_t at = k * s.width + 2 * m;
        s.col[at] = static_cast<std::uint32_t>(q);
        s.weight[at] = w * (1.0 - frac);
        s.col[at + 1] = static_cast<std::uint32_t>(q1);
        s.weight[at + 1] = w * frac;
      }
    }
  }
}

CircleMapFamily CircleMapFamily::conformal(std::vector<std::uint32_t> degrees,
                                           std::size_t grid_size) {
  std::vector<GridFunction> potentials;
  for (std::uint32_t l : degrees) {
    potentials.push_back(GridFunction::constant(grid_size, -std::log(static_cast<double>(l))));
  }
  return CircleMapFamily(std::move(degrees), std::move(potentials));
}

CircleMapFamily CircleMapFamily::cosine_perturbed_doubling(double eps,
                                                           std::size_t grid_size) {
  auto phi = GridFunction::sample(grid_size, [eps](double x) {
    return -std::numbers::ln2 + eps * std::cos(2.0 * std::numbers::pi * x);
  });
  return CircleMapFamily({2}, {std::move(phi)});
}

const CircleMapFamily::Stencil& CircleMapFamily::stencil(std::size_t i) const {
  if (i >= stencils_.size()) {
    throw DomainError("map index " + std::to_string(i) + " outside the family");
  }
  return stencils_[i];
}

void CircleMapFamily::apply(std::size_t i, std::span<const double> in,
                            std::span<double> out) const {
  const Stencil& s = stencil(i);
  if (in.size() != grid_ || out.size() != grid_) {
    throw DomainError("vector length differs from the grid size");
  }
  for (std::size_t k = 0; k < grid_; ++k) {
    double acc = 0.0;
    const std::size_t base = k * s.width;
    for (std::size_t e = 0; e < s.width; ++e) acc += s.weight[base + e] * in[s.col[base + e]];
    out[k] = acc;
  }
}

void CircleMapFamily::apply_dual(std::size_t i, std::span<const double> in,
                                 std::span<double> out) const {
  const Stencil& s = stencil(i);
  if (in.size() != grid_ || out.size() != grid_) {
    throw DomainError("vector length differs from the grid size");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < grid_; ++k) {
    const std::size_t base = k * s.width;
    for (std::size_t e = 0; e < s.width; ++e) out[s.col[base + e]] += s.weight[base + e] * in[k];
  }
}

GridFunction apply_transfer(const CircleMapFamily& family, std::size_t i,
                            const GridFunction& f) {
  if (f.size() != family.grid_size()) {
    throw DomainError("function grid differs from the family grid");
  }
  std::vector<double> out(f.size());
  family.apply(i, f.values(), out);
  return GridFunction(std::move(out));
}

namespace {

void scale_by_max(std::vector<double>& v) {
  double top = 0.0;
  for (double x : v) top = std::max(top, std::fabs(x));
  if (!(top > 0.0) || !std::isfinite(top)) {
    throw ConvergenceError("operator product vanished or overflowed");
  }
  for (double& x : v) x /= top;
}

void require_window(const CircleMapFamily& family, const EnvPath& omega,
                    std::int64_t first, std::int64_t end) {
  if (!omega.covers(first, end)) {
    throw LengthError("environment window [" + std::to_string(omega.first_index()) +
                      ", " + std::to_string(omega.end_index()) + ") does not cover [" +
                      std::to_string(first) + ", " + std::to_string(end) + ")");
  }
  for (std::int64_t t = first; t < end; ++t) {
    if (omega[t] >= family.size()) {
      throw DomainError("environment symbol outside the map family");
    }
  }
}

std::vector<double> back_product(const CircleMapFamily& family, const EnvPath& omega,
                                 const FiberWindow& w) {
  const std::size_t g = family.grid_size();
  std::vector<double> h(g, 1.0), tmp(g);
  for (std::int64_t t = w.center - static_cast<std::int64_t>(w.back); t < w.center; ++t) {
    family.apply(omega[t], h, tmp);
    h.swap(tmp);
    scale_by_max(h);
  }
  return h;
}

// Dual vectors v_k = (A_{c+m} ... A_{c+k})^T e_0 for k = k_lo..m, index k - k_lo.
std::vector<std::vector<double>> dual_chain(const CircleMapFamily& family,
                                            const EnvPath& omega, const FiberWindow& w,
                                            std::size_t k_lo) {
  const std::size_t g = family.grid_size();
  std::vector<std::vector<double>> out(w.forward + 1 - k_lo);
  std::vector<double> v(g, 0.0), tmp(g);
  v[0] = 1.0;
  for (std::size_t k = w.forward + 1; k-- > k_lo;) {
    family.apply_dual(omega[w.center + static_cast<std::int64_t>(k)], v, tmp);
    v.swap(tmp);
    scale_by_max(v);
    out[k - k_lo] = v;
  }
  return out;
}

constexpr double kGaussNodes[4] = {-0.8611363115940526, -0.3399810435848563,
                                   0.3399810435848563, 0.8611363115940526};
constexpr double kGaussWeights[4] = {0.3478548451374538, 0.6521451548625461,
                                     0.6521451548625461, 0.3478548451374538};

}  // namespace

TestFunction smoothed_indicator(double a, double b, double width) {
  const double len = b - a;
  if (!(a >= 0.0 && b <= 1.0 && len > 0.0)) {
    throw DomainError("smoothed indicator needs 0 <= a < b <= 1");
  }
  if (!(width > 0.0) || width > std::min(len, 1.0 - len)) {
    throw DomainError("smoothed indicator ramp is wider than the interval or its complement");
  }
  auto ramp = [width](double u) {
    const double t = std::clamp(u / width + 0.5, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
  };
  // u is the position measured from a; the third term is the rising edge
  // at a seen from just below u = 1.
  return [=](double x) {
    double u = x - a;
    u -= std::floor(u);
    return ramp(u) - ramp(u - len) + ramp(u - 1.0);
  };
}

FiberMeasure::FiberMeasure(const CircleMapFamily& family, const EnvPath& omega,
                           FiberWindow window)
    : family_(&family), window_(window) {
  if (window.back == 0 || window.forward == 0) {
    throw DomainError("fiber window needs n, m >= 1");
  }
  const std::int64_t first = window.center - static_cast<std::int64_t>(window.back);
  const std::int64_t end = window.center + static_cast<std::int64_t>(window.forward) + 1;
  require_window(family, omega, first, end);
  for (std::int64_t t = window.center; t < end; ++t) forward_ops_.push_back(omega[t]);

  back_ = back_product(family, omega, window);
  dual_ = std::move(dual_chain(family, omega, window, 0).front());

  const std::size_t g = family.grid_size();
  density_.resize(g);
  double total = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    density_[k] = dual_[k] * back_[k];
    total += density_[k];
  }
  if (!(total > 0.0)) throw ConvergenceError("fiber measure has zero mass");
  const double scale = static_cast<double>(g) / total;
  for (double& d : density_) d *= scale;

  cell_mass_prefix_.assign(g + 1, 0.0);
  for (std::size_t k = 0; k < g; ++k) {
    cell_mass_prefix_[k + 1] =
        cell_mass_prefix_[k] + 0.5 * (density_[k] + density_[(k + 1) % g]);
  }
  const double mass = cell_mass_prefix_[g];
  for (double& c : cell_mass_prefix_) c /= mass;
  cell_mass_prefix_[g] = 1.0;
}

double FiberMeasure::integrate(const TestFunction& f) const {
  const std::size_t g = density_.size();
  const double gd = static_cast<double>(g);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    const double r0 = density_[k];
    const double r1 = density_[(k + 1) % g];
    for (int q = 0; q < 4; ++q) {
      const double t = 0.5 * (1.0 + kGaussNodes[q]);
      const double rho = r0 + t * (r1 - r0);
      const double w = kGaussWeights[q] * rho;
      num += w * f((static_cast<double>(k) + t) / gd);
      den += w;
    }
  }
  return num / den;
}

double FiberMeasure::residual(const TestFunction& f) const {
  const std::size_t g = density_.size();
  std::vector<double> num(g), den = back_, tmp(g);
  for (std::size_t k = 0; k < g; ++k) {
    num[k] = f(static_cast<double>(k) / static_cast<double>(g)) * back_[k];
  }
  for (Symbol op : forward_ops_) {
    family_->apply(op, num, tmp);
    num.swap(tmp);
    family_->apply(op, den, tmp);
    den.swap(tmp);
    double top = 0.0;
    for (double d : den) top = std::max(top, d);
    if (!(top > 0.0) || !std::isfinite(top)) {
      throw ConvergenceError("operator product vanished or overflowed");
    }
    for (std::size_t k = 0; k < g; ++k) {
      num[k] /= top;
      den[k] /= top;
    }
  }
  double lo = num[0] / den[0], hi = lo;
  for (std::size_t k = 1; k < g; ++k) {
    const double q = num[k] / den[k];
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return hi - lo;
}

FiberValue FiberMeasure::evaluate(const TestFunction& f) const {
  return FiberValue{integrate(f), residual(f)};
}

double FiberMeasure::cdf(double t) const {
  if (!(t > 0.0)) return 0.0;
  if (!(t < 1.0)) return 1.0;
  const std::size_t g = density_.size();
  const double pos = t * static_cast<double>(g);
  auto k = static_cast<std::size_t>(pos);
  if (k >= g) return 1.0;
  const double s = pos - static_cast<double>(k);
  const double r0 = density_[k];
  const double r1 = density_[(k + 1) % g];
  const double full = 0.5 * (r0 + r1);
  const double part = r0 * s + 0.5 * (r1 - r0) * s * s;
  const double cell = cell_mass_prefix_[k + 1] - cell_mass_prefix_[k];
  const double frac = full > 0.0 ? part / full : s;
  return std::min(1.0, cell_mass_prefix_[k] + cell * frac);
}

FiberValue fiber_measure(const CircleMapFamily& family, const EnvPath& omega,
                         FiberWindow window, const TestFunction& f) {
  return FiberMeasure(family, omega, window).evaluate(f);
}

FiberValue fiber_measure(const CircleMapFamily& family, const EnvPath& omega,
                         FiberWindow window, const GridFunction& f) {
  return fiber_measure(family, omega, window, TestFunction([&f](double x) { return f(x); }));
}

AdaptiveResult fiber_measure_adaptive(const CircleMapFamily& family,
                                      const EnvPath& omega, std::int64_t center,
                                      const TestFunction& f, double tol,
                                      std::size_t start) {
  if (start == 0) throw DomainError("adaptive start depth must be positive");
  AdaptiveResult result;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (std::size_t depth = start;; depth *= 2) {
    const FiberWindow w{center, depth, depth};
    result.value = FiberMeasure(family, omega, w).evaluate(f);
    result.depth = depth;
    result.residual_trace.push_back(result.value.residual);
    if (result.value.residual <= tol) return result;
    if (result.value.residual < best) {
      best = result.value.residual;
      stalled = 0;
    } else if (++stalled >= 5) {
      throw ConvergenceError("fiber measure residual did not decrease over 5 doublings");
    }
  }
}

double CdfTable::quantile(double u) const {
  if (!(u > 0.0)) return t.front();
  if (!(u < 1.0)) return t.back();
  const auto it = std::lower_bound(F.begin(), F.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - F.begin());
  if (j == 0) return t.front();
  const double f0 = F[j - 1], f1 = F[j];
  const double frac = f1 > f0 ? (u - f0) / (f1 - f0) : 0.0;
  return t[j - 1] + frac * (t[j] - t[j - 1]);
}

CdfTable fiber_cdf(const CircleMapFamily& family, const EnvPath& omega,
                   FiberWindow window, std::size_t bins) {
  if (bins < 64) throw DomainError("CDF table needs at least 64 bins");
  const FiberMeasure mu(family, omega, window);
  CdfTable table;
  table.t.resize(bins + 1);
  table.F.resize(bins + 1);
  for (std::size_t j = 0; j <= bins; ++j) {
    table.t[j] = static_cast<double>(j) / static_cast<double>(bins);
    table.F[j] = mu.cdf(table.t[j]);
  }
  table.F.front() = 0.0;
  table.F.back() = 1.0;
  for (std::size_t j = 1; j <= bins; ++j) table.F[j] = std::max(table.F[j], table.F[j - 1]);
  return table;
}

double pushforward_residual(const CircleMapFamily& family, const EnvPath& omega,
                            FiberWindow window, std::span<const TestFunction> tests) {
  const FiberMeasure here(family, omega, window);
  const FiberMeasure next(family, omega,
                          FiberWindow{window.center + 1, window.back, window.forward});
  const double l = family.degree(omega[window.center]);
  double worst = 0.0;
  for (const auto& f : tests) {
    const double pulled = here.integrate([&](double x) {
      const double y = l * x;
      return f(y - std::floor(y));
    });
    worst = std::max(worst, std::fabs(pulled - next.integrate(f)));
  }
  return worst;
}

MixingCurve fiber_mixing_curve(const CircleMapFamily& family, const EnvPath& omega,
                               FiberWindow window, const TestFunction& f,
                               const TestFunction& g, std::size_t k_max) {
  if (window.back == 0 || window.forward == 0) {
    throw DomainError("fiber window needs n, m >= 1");
  }
  if (k_max > window.forward) {
    throw DomainError("mixing curve needs k_max <= m");
  }
  const std::int64_t first = window.center - static_cast<std::int64_t>(window.back);
  const std::int64_t end = window.center + static_cast<std::int64_t>(window.forward) + 1;
  require_window(family, omega, first, end);

  const std::size_t n = family.grid_size();
  std::vector<double> fv(n), gv(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(n);
    fv[k] = f(x);
    gv[k] = g(x);
  }
  const auto duals = dual_chain(family, omega, window, 0);
  std::vector<double> b = back_product(family, omega, window);
  std::vector<double> a(n), tmp(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = fv[k] * b[k];

  MixingCurve curve;
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (k > 0) {
      const Symbol op = omega[window.center + static_cast<std::int64_t>(k) - 1];
      family.apply(op, a, tmp);
      a.swap(tmp);
      family.apply(op, b, tmp);
      b.swap(tmp);
      double top = 0.0;
      for (double x : b) top = std::max(top, x);
      for (std::size_t j = 0; j < n; ++j) {
        a[j] /= top;
        b[j] /= top;
      }
    }
    const auto& v = duals[k];
    double vb = 0.0, va = 0.0, vga = 0.0, vgb = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      vb += v[j] * b[j];
      va += v[j] * a[j];
      vga += v[j] * gv[j] * a[j];
      vgb += v[j] * gv[j] * b[j];
    }
    curve.values.push_back(std::fabs(vga / vb - (va / vb) * (vgb / vb)));
  }

  // Values are clipped at the floor and the fit stops at the first clipped
  // one, so a curve that collapses to rounding noise still has a slope.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    const bool floored = !(curve.values[k] > kMixingFloor);
    const double x = static_cast<double>(k);
    const double y = std::log(floored ? kMixingFloor : curve.values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
    if (floored) break;
  }
  curve.fitted_points = used;
  if (used >= 2) {
    const double u = static_cast<double>(used);
    curve.log_slope = (u * sxy - sx * sy) / (u * sxx - sx * sx);
  }
  return curve;
}

}  // namespace minorbit::transfer
