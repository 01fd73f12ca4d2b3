#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "experiment.hpp"
#include "minorbit/bernoulli.hpp"
#include "minorbit/errors.hpp"
#include "minorbit/rng.hpp"

namespace minorbit::experiment {

namespace bn = minorbit::bernoulli;

std::size_t initial_cap(std::size_t n_max) {
  const auto bits = static_cast<std::size_t>(std::ceil(8.0 * std::log2(static_cast<double>(n_max))));
  return std::max<std::size_t>(64, bits);
}

namespace {

using ReplicaTable = std::vector<std::vector<ReplicaValue>>;  // [n][statistic]

MatchConstraint constraint_for(ConstraintKind kind, std::size_t n, double c4) {
  MatchConstraint c{kind, 0};
  if (kind == ConstraintKind::Band || kind == ConstraintKind::OffBand) c.alpha = gap_alpha(n, c4);
  return c;
}

ReplicaTable symbolic_replica(const ExperimentConfig& cfg, std::size_t r, std::size_t cap) {
  const std::size_t n_max = cfg.n_schedule.back();
  const std::size_t length = n_max + cap;
  const bn::BernoulliParams params(cfg.model.p_a, cfg.model.p_b);
  const EnvPath env = EnvPath::generate(rng::stream_key(cfg.seed, r, "env"),
                                        std::string(bn::kEnvModelId), 2, 0,
                                        static_cast<std::int64_t>(length));
  const auto x = bn::sample_fiber_sequence(params, env, rng::stream_key(cfg.seed, r, "x"), length);
  const auto y = bn::sample_fiber_sequence(params, env, rng::stream_key(cfg.seed, r, "y"), length);
  ReplicaTable table;
  for (std::size_t n : cfg.n_schedule) {
    auto& row = table.emplace_back();
    for (ConstraintKind kind : cfg.statistics) {
      const MatchResult m = lcs_match(x, y, n, constraint_for(kind, n, cfg.c4));
      row.push_back(ReplicaValue{exponent_statistic(m, n, 2.0).value,
                                 static_cast<double>(m.length), m.truncated, false});
    }
  }
  return table;
}

ReplicaTable circle_replica(const ExperimentConfig& cfg, std::size_t r) {
  const std::vector<std::uint32_t> degrees =
      cfg.model.kind == ModelKind::DeterministicDoubling ? std::vector<std::uint32_t>{2}
                                                         : cfg.model.degrees;
  const CircleMaps maps(degrees);
  const std::size_t n_max = cfg.n_schedule.back();
  const std::size_t bits = maps.precision_bits_for(n_max);
  const EnvPath env = EnvPath::generate(rng::stream_key(cfg.seed, r, "env"), "circle-env",
                                        static_cast<unsigned>(degrees.size()), 0,
                                        static_cast<std::int64_t>(n_max));
  const auto ox = iterate_orbit(maps, env, CirclePoint::random(rng::stream_key(cfg.seed, r, "x"), bits), n_max);
  const auto oy = iterate_orbit(maps, env, CirclePoint::random(rng::stream_key(cfg.seed, r, "y"), bits), n_max);
  const std::span<const CirclePoint> xs(ox.points), ys(oy.points);
  ReplicaTable table;
  for (std::size_t n : cfg.n_schedule) {
    auto& row = table.emplace_back();
    for (ConstraintKind kind : cfg.statistics) {
      const auto m = min_dist_match(xs.first(n), ys.first(n), constraint_for(kind, n, cfg.c4));
      const ExponentValue e = exponent_statistic(m, n);
      const double raw = e.collision ? std::numeric_limits<double>::infinity() : -m.distance.log2();
      row.push_back(ReplicaValue{e.value, raw, false, e.collision});
    }
  }
  return table;
}

// Runs compute(r) for each listed replica on `workers` threads. Results land
// in out[r]; the lowest-index failure is rethrown after all threads join.
template <class Compute>
void run_replicas(const std::vector<std::size_t>& ids, std::size_t workers,
                  std::vector<ReplicaTable>& out, const Compute& compute) {
  std::vector<std::exception_ptr> errors(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= ids.size()) return;
      try {
        out[ids[k]] = compute(ids[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(workers, ids.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void summarize(ExponentReport& report) {
  const auto& cfg = report.config;
  report.rows.clear();
  for (std::size_t a = 0; a < cfg.n_schedule.size(); ++a) {
    for (std::size_t s = 0; s < cfg.statistics.size(); ++s) {
      StatisticSummary row;
      row.n = cfg.n_schedule[a];
      row.statistic = cfg.statistics[s];
      row.alpha = constraint_for(row.statistic, row.n, cfg.c4).alpha;
      std::vector<double> values, raws;
      for (const auto& table : report.values) {
        if (table.empty()) continue;
        const ReplicaValue& v = table[a][s];
        values.push_back(v.exponent);
        raws.push_back(v.raw);
        row.truncated += v.truncated ? 1 : 0;
        row.collisions += v.collision ? 1 : 0;
      }
      row.replicas = values.size();
      if (!values.empty()) {
        std::sort(values.begin(), values.end());
        std::sort(raws.begin(), raws.end());
        row.q25 = quantile_sorted(values, 0.25);
        row.median = quantile_sorted(values, 0.5);
        row.q75 = quantile_sorted(values, 0.75);
        row.median_raw = quantile_sorted(raws, 0.5);
      }
      report.rows.push_back(row);
    }
  }
}

}  // namespace

ExponentReport run_exponent_mc(const ExperimentConfig& config) {
  validate(config);
  ExponentReport report;
  report.config = config;
  report.values.assign(config.replicas, {});
  const bool symbolic = config.model.kind == ModelKind::Bernoulli;

  if (symbolic) {
    const auto point = bn::exponent(bn::BernoulliParams(config.model.p_a, config.model.p_b));
    report.theory = TheoryLines{2.0 / point.h2_an, 1.0 / point.h2_qu, point.exponent};
  } else {
    // Lebesgue is the fiber measure of every conformal family: D2 = 1.
    report.theory = TheoryLines{2.0, 1.0, 2.0};
  }

  std::vector<std::size_t> ids(config.replicas);
  for (std::size_t r = 0; r < ids.size(); ++r) ids[r] = r;

  if (!symbolic) {
    run_replicas(ids, config.workers, report.values,
                 [&](std::size_t r) { return circle_replica(config, r); });
    summarize(report);
    return report;
  }

  report.cap = initial_cap(config.n_schedule.back());
  run_replicas(ids, config.workers, report.values,
               [&](std::size_t r) { return symbolic_replica(config, r, report.cap); });

  // Sequences are counter-based, so extending the cap leaves every
  // untruncated value unchanged and only truncated replicas need rerunning.
  for (;;) {
    summarize(report);
    double worst = 0.0;
    std::size_t worst_n = 0;
    for (const auto& row : report.rows) {
      const double rate = static_cast<double>(row.truncated) / static_cast<double>(row.replicas);
      if (rate > worst) {
        worst = rate;
        worst_n = row.n;
      }
    }
    if (worst <= 0.01) break;
    const std::size_t next_cap = report.cap * 2;
    report.warnings.push_back("truncation rate " + format_double(worst) + " at n=" +
                              std::to_string(worst_n) + " with cap " +
                              std::to_string(report.cap) + "; raising cap to " +
                              std::to_string(next_cap));
    if (next_cap > config.max_cap) {
      throw PartialResultError("sequence cap would exceed max_cap=" +
                                   std::to_string(config.max_cap),
                               report);
    }
    report.cap = next_cap;
    std::vector<std::size_t> rerun;
    for (std::size_t r = 0; r < report.values.size(); ++r) {
      bool any = false;
      for (const auto& row : report.values[r]) {
        for (const auto& v : row) any = any || v.truncated;
      }
      if (any) rerun.push_back(r);
    }
    run_replicas(rerun, config.workers, report.values,
                 [&](std::size_t r) { return symbolic_replica(config, r, report.cap); });
  }
  return report;
}

std::string exponent_csv(const ExponentReport& report) {
  std::string out =
      "n,statistic,alpha,replicas,q25,median,q75,median_raw,truncated,collisions,"
      "theory_annealed,theory_quenched,theory_max\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.n) + ',' + MatchConstraint{row.statistic, 0}.name() + ',' +
           std::to_string(row.alpha) + ',' + std::to_string(row.replicas) + ',' +
           csv_double(row.q25) + ',' + csv_double(row.median) + ',' + csv_double(row.q75) +
           ',' + csv_double(row.median_raw) + ',' + std::to_string(row.truncated) + ',' +
           std::to_string(row.collisions) + ',';
    if (report.theory) {
      out += csv_double(report.theory->annealed) + ',' + csv_double(report.theory->quenched) +
             ',' + csv_double(report.theory->max);
    } else {
      out += ",,";
    }
    out += '\n';
  }
  return out;
}

std::string replica_csv(const ExponentReport& report) {
  std::string out = "replica,n,statistic,exponent,raw,truncated,collision\n";
  const auto& cfg = report.config;
  for (std::size_t r = 0; r < report.values.size(); ++r) {
    if (report.values[r].empty()) continue;
    for (std::size_t a = 0; a < cfg.n_schedule.size(); ++a) {
      for (std::size_t s = 0; s < cfg.statistics.size(); ++s) {
        const ReplicaValue& v = report.values[r][a][s];
        out += std::to_string(r) + ',' + std::to_string(cfg.n_schedule[a]) + ',' +
               MatchConstraint{cfg.statistics[s], 0}.name() + ',' + csv_double(v.exponent) +
               ',' + csv_double(v.raw) + ',' + (v.truncated ? "1" : "0") + ',' +
               (v.collision ? "1" : "0") + '\n';
      }
    }
  }
  return out;
}

json exponent_json(const ExponentReport& report) {
  // JSON has no infinity; collisions are reported as null.
  auto finite = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back(json{{"n", row.n},
                        {"statistic", MatchConstraint{row.statistic, 0}.name()},
                        {"alpha", row.alpha},
                        {"replicas", row.replicas},
                        {"q25", finite(row.q25)},
                        {"median", finite(row.median)},
                        {"q75", finite(row.q75)},
                        {"median_raw", finite(row.median_raw)},
                        {"truncated", row.truncated},
                        {"collisions", row.collisions}});
  }
  json j{{"tool", kToolVersion},
         {"command", "exponent-mc"},
         {"seed", report.config.seed},
         {"config", to_json(report.config)},
         {"rows", rows},
         {"warnings", report.warnings}};
  if (report.config.model.kind == ModelKind::Bernoulli) {
    j["cap"] = report.cap;
    j["note"] = bn::quenched_formula_note();
  }
  if (report.theory) {
    j["theory"] = {{"annealed", report.theory->annealed},
                   {"quenched", report.theory->quenched},
                   {"max", report.theory->max}};
  } else {
    j["theory"] = nullptr;
  }
  return j;
}

}  // namespace minorbit::experiment
