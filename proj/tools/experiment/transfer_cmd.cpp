#include <algorithm>
#include <cmath>
#include <numbers>

#include "experiment.hpp"
#include "minorbit/errors.hpp"
#include "minorbit/rng.hpp"
#include "minorbit/transfer.hpp"

namespace minorbit::experiment {

namespace tr = minorbit::transfer;

namespace {

struct NamedTest {
  const char* name;
  tr::TestFunction f;
  double lebesgue;  // exact integral against dx
};

std::vector<NamedTest> test_functions() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return {
      {"x", [](double x) { return x; }, 0.5},
      {"cos_2pi_x", [=](double x) { return std::cos(two_pi * x); }, 0.0},
      {"smoothed_step_0_half", tr::smoothed_indicator(0.0, 0.5, 1.0 / 32.0), 0.5},
      {"smoothed_step_quarter", tr::smoothed_indicator(0.25, 0.5, 1.0 / 64.0), 0.25},
  };
}

tr::CircleMapFamily build_family(const TransferConfig& c) {
  if (c.preset == "conformal") return tr::CircleMapFamily::conformal(c.degrees, c.grid);
  if (c.preset == "cosine-doubling") return tr::CircleMapFamily::cosine_perturbed_doubling(c.eps, c.grid);
  throw UsageError("unknown transfer preset '" + c.preset +
                   "' (expected conformal or cosine-doubling)");
}

}  // namespace

json transfer_diagnostics(const TransferConfig& c) {
  if (c.depth < 2) throw UsageError("transfer depth must be at least 2");
  if (c.k_max > c.depth) throw UsageError("k_max must not exceed depth");
  const tr::CircleMapFamily family = build_family(c);
  const auto reach = static_cast<std::int64_t>(2 * c.depth + 2);
  const EnvPath env = EnvPath::generate(rng::stream_key(c.seed, 0, "env"), "transfer-env",
                                        static_cast<unsigned>(family.size()), -reach, reach);
  const tr::FiberWindow window{0, c.depth, c.depth};
  const bool conformal = c.preset == "conformal";

  double sup_l1 = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto l1 = tr::apply_transfer(family, i, tr::GridFunction::constant(c.grid, 1.0));
    for (double v : l1.values()) sup_l1 = std::max(sup_l1, std::fabs(v - 1.0));
  }

  const tr::FiberMeasure mu(family, env, window);
  json integrals = json::object();
  double worst_lebesgue = 0.0;
  std::vector<tr::TestFunction> tests;
  for (const auto& t : test_functions()) {
    const tr::FiberValue v = mu.evaluate(t.f);
    json entry{{"value", v.value}, {"residual", v.residual}};
    if (conformal) {
      entry["lebesgue"] = t.lebesgue;
      entry["abs_error"] = std::fabs(v.value - t.lebesgue);
      worst_lebesgue = std::max(worst_lebesgue, std::fabs(v.value - t.lebesgue));
    }
    integrals[t.name] = entry;
    if (std::string_view(t.name) != "x") tests.push_back(t.f);
  }
  const double one = mu.integrate([](double) { return 1.0; });

  const double push = tr::pushforward_residual(family, env, window, tests);

  json trend = json::array();
  const auto probe = tr::smoothed_indicator(0.0, 0.5, 1.0 / 32.0);
  for (std::size_t d = 2; d <= c.depth; d *= 2) {
    const tr::FiberValue v = tr::fiber_measure(family, env, tr::FiberWindow{0, d, d}, probe);
    trend.push_back(json{{"depth", d}, {"value", v.value}, {"residual", v.residual}});
  }

  const tr::TestFunction cosine = [](double x) { return std::cos(2.0 * std::numbers::pi * x); };
  const auto mixing = tr::fiber_mixing_curve(family, env, window, cosine, cosine, c.k_max);

  json j{{"tool", kToolVersion},
         {"command", "transfer"},
         {"seed", c.seed},
         {"config", to_json(c)},
         {"sup_abs_L1_minus_1", sup_l1},
         {"integral_of_one", one},
         {"integral_of_one_is_exact", one == 1.0},
         {"fiber_integrals", integrals},
         {"pushforward_residual", push},
         {"residual_trend", trend},
         {"mixing",
          {{"f", "cos_2pi_x"},
           {"g", "cos_2pi_x"},
           {"values", mixing.values},
           {"log_slope", mixing.log_slope},
           {"fitted_points", mixing.fitted_points},
           {"floor", tr::kMixingFloor}}}};
  if (conformal) j["max_abs_error_vs_lebesgue"] = worst_lebesgue;
  return j;
}

}  // namespace minorbit::experiment
