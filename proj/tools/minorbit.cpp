// minorbit: command-line front end for the experiment drivers.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiment/experiment.hpp"
#include "minorbit/errors.hpp"

namespace ex = minorbit::experiment;
using ex::json;

namespace {

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  const std::string text = ex::read_text_file(path);
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ex::UsageError("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ex::UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

// The flag value if given on the command line, else the config value, else
// the default.
template <class T>
T pick(const CLI::Option* opt, const T& flag, const json& cfg, const char* key,
       const T& fallback) {
  if (opt->count() > 0) return flag;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ex::UsageError(std::string("config field '") + key + "': " + e.what());
    }
  }
  return fallback;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    ex::write_text_file(path, text);
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
std::vector<T> parse_numbers(const std::string& s, const char* what) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw ex::UsageError(std::string("bad ") + what + " list '" + s + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal orbit distances, Renyi entropies and fiber measures of random dynamical systems"};
  app.set_version_flag("--version", std::string(ex::kToolVersion));
  app.require_subcommand(1);

  // entropy
  auto* entropy = app.add_subcommand("entropy", "Closed-form entropies and exponent of a Bernoulli point");
  std::string entropy_config;
  double p_a = 0.5, p_b = 0.5;
  std::string entropy_out;
  entropy->add_option("--config", entropy_config, "JSON config file");
  auto* opt_pa = entropy->add_option("--pA", p_a, "P(x=0) under environment A");
  auto* opt_pb = entropy->add_option("--pB", p_b, "P(x=0) under environment B");
  auto* opt_entropy_out = entropy->add_option("--out", entropy_out, "JSON output path");

  // phase-diagram
  auto* phase = app.add_subcommand("phase-diagram", "Regime and exponent over a (pA, pB) grid");
  std::string phase_config, phase_out, phase_svg;
  std::size_t resolution = 64;
  phase->add_option("--config", phase_config, "JSON config file");
  auto* opt_res = phase->add_option("--resolution", resolution, "cells per axis");
  auto* opt_phase_out = phase->add_option("--out", phase_out, "CSV output path");
  auto* opt_phase_svg = phase->add_option("--svg", phase_svg, "optional SVG output path");

  // diag-scan
  auto* diag = app.add_subcommand("diag-scan", "Exponent along pB = 1 - pA and the phase boundary");
  std::string diag_config, diag_out, diag_report, diag_svg;
  std::size_t steps = 200;
  diag->add_option("--config", diag_config, "JSON config file");
  auto* opt_steps = diag->add_option("--steps", steps, "scan points: pA = i/steps");
  auto* opt_diag_out = diag->add_option("--out", diag_out, "CSV output path");
  auto* opt_diag_report = diag->add_option("--report", diag_report, "boundary report JSON path (default stdout)");
  auto* opt_diag_svg = diag->add_option("--svg", diag_svg, "optional SVG output path");

  // exponent-mc
  auto* mc = app.add_subcommand("exponent-mc", "Monte Carlo minimal-distance exponents");
  std::string mc_config, mc_model, mc_schedule, mc_stats, mc_degrees, mc_csv, mc_json, mc_replica_csv;
  double mc_pa = 0.5, mc_pb = 0.5, mc_c4 = 2.0;
  std::size_t mc_replicas = 200, mc_workers = 1, mc_max_cap = 1 << 16;
  std::uint64_t mc_seed = 1;
  mc->add_option("--config", mc_config, "JSON config file");
  auto* o_model = mc->add_option("--model", mc_model, "bernoulli | circle | deterministic-doubling");
  auto* o_pa = mc->add_option("--pA", mc_pa, "Bernoulli pA");
  auto* o_pb = mc->add_option("--pB", mc_pb, "Bernoulli pB");
  auto* o_deg = mc->add_option("--degrees", mc_degrees, "circle degrees, comma separated");
  auto* o_sched = mc->add_option("--n-schedule", mc_schedule, "window lengths, comma separated");
  auto* o_reps = mc->add_option("--replicas", mc_replicas, "replica count");
  auto* o_seed = mc->add_option("--seed", mc_seed, "master seed");
  auto* o_stats = mc->add_option("--statistics", mc_stats, "all,diag,band,offband,farthirds");
  auto* o_c4 = mc->add_option("--c4", mc_c4, "gap exponent: alpha = (ln n)^c4");
  auto* o_workers = mc->add_option("--workers", mc_workers, "worker threads");
  auto* o_cap = mc->add_option("--max-cap", mc_max_cap, "ceiling for the sequence cap");
  auto* o_csv = mc->add_option("--csv", mc_csv, "summary CSV path");
  auto* o_json = mc->add_option("--json", mc_json, "report JSON path (default stdout)");
  auto* o_rcsv = mc->add_option("--replica-csv", mc_replica_csv, "per-replica CSV path");

  // transfer
  auto* transfer = app.add_subcommand("transfer", "Transfer-operator and fiber-measure diagnostics");
  std::string tr_config, tr_preset, tr_degrees, tr_out;
  double tr_eps = 0.1;
  std::size_t tr_grid = 4096, tr_depth = 40, tr_kmax = 20;
  std::uint64_t tr_seed = 1;
  transfer->add_option("--config", tr_config, "JSON config file");
  auto* t_preset = transfer->add_option("--preset", tr_preset, "conformal | cosine-doubling");
  auto* t_deg = transfer->add_option("--degrees", tr_degrees, "conformal degrees, comma separated");
  auto* t_eps = transfer->add_option("--eps", tr_eps, "cosine perturbation size");
  auto* t_grid = transfer->add_option("--grid", tr_grid, "grid size G");
  auto* t_depth = transfer->add_option("--depth", tr_depth, "window depth n = m");
  auto* t_kmax = transfer->add_option("--k-max", tr_kmax, "mixing curve length");
  auto* t_seed = transfer->add_option("--seed", tr_seed, "environment seed");
  auto* t_out = transfer->add_option("--out", tr_out, "JSON output path");

  // lcs
  auto* lcs = app.add_subcommand("lcs", "Constrained longest common extension of two files");
  std::string lcs_config, lcs_x, lcs_y, lcs_constraint = "all";
  std::size_t lcs_n = 0, lcs_alpha = 0;
  double lcs_c4 = 2.0;
  bool lcs_bytes = false;
  lcs->add_option("--config", lcs_config, "JSON config file");
  auto* l_x = lcs->add_option("file_x", lcs_x, "first symbol file");
  auto* l_y = lcs->add_option("file_y", lcs_y, "second symbol file");
  auto* l_n = lcs->add_option("--n", lcs_n, "window length (default min length)");
  auto* l_c = lcs->add_option("--constraint", lcs_constraint, "all | diag | band | offband | farthirds");
  auto* l_alpha = lcs->add_option("--alpha", lcs_alpha, "band half-width (default (ln n)^c4)");
  auto* l_c4 = lcs->add_option("--c4", lcs_c4, "gap exponent for the default alpha");
  auto* l_bytes = lcs->add_flag("--bytes", lcs_bytes, "treat files as raw byte streams");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ex::kExitUsage;
  }

  std::optional<ex::ExponentReport> partial;
  std::string partial_csv, partial_json, partial_rcsv;
  try {
    if (entropy->parsed()) {
      const json cfg = load_config(entropy_config);
      const double a = pick(opt_pa, p_a, cfg, "pA", 0.5);
      const double b = pick(opt_pb, p_b, cfg, "pB", 0.5);
      const std::string out = pick(opt_entropy_out, entropy_out, cfg, "out", std::string());
      emit(out, ex::entropy_record(a, b).dump(2) + "\n");
    } else if (phase->parsed()) {
      const json cfg = load_config(phase_config);
      const auto res = pick(opt_res, resolution, cfg, "resolution", std::size_t{64});
      const std::string out = pick(opt_phase_out, phase_out, cfg, "out", std::string());
      const std::string svg = pick(opt_phase_svg, phase_svg, cfg, "svg", std::string());
      if (out.empty()) throw ex::UsageError("phase-diagram needs --out");
      ex::write_text_file(out, ex::phase_diagram_csv(res));
      if (!svg.empty()) ex::write_text_file(svg, ex::phase_diagram_svg(res));
    } else if (diag->parsed()) {
      const json cfg = load_config(diag_config);
      const auto s = pick(opt_steps, steps, cfg, "steps", std::size_t{200});
      const std::string out = pick(opt_diag_out, diag_out, cfg, "out", std::string());
      const std::string report = pick(opt_diag_report, diag_report, cfg, "report", std::string());
      const std::string svg = pick(opt_diag_svg, diag_svg, cfg, "svg", std::string());
      if (out.empty()) throw ex::UsageError("diag-scan needs --out");
      const ex::DiagScan scan = ex::diag_scan(s);
      ex::write_text_file(out, scan.csv);
      emit(report, scan.report.dump(2) + "\n");
      if (!svg.empty()) ex::write_text_file(svg, scan.svg);
    } else if (mc->parsed()) {
      const json cfg = load_config(mc_config);
      ex::ExperimentConfig c = ex::merge_config(cfg, ex::ExperimentConfig{});
      if (o_model->count() > 0) c.model.kind = ex::parse_model(mc_model);
      if (o_pa->count() > 0) c.model.p_a = mc_pa;
      if (o_pb->count() > 0) c.model.p_b = mc_pb;
      if (o_deg->count() > 0) c.model.degrees = parse_numbers<std::uint32_t>(mc_degrees, "degree");
      if (o_sched->count() > 0) c.n_schedule = parse_numbers<std::size_t>(mc_schedule, "n_schedule");
      if (o_reps->count() > 0) c.replicas = mc_replicas;
      if (o_seed->count() > 0) c.seed = mc_seed;
      if (o_stats->count() > 0) {
        c.statistics.clear();
        for (const auto& s : split_list(mc_stats)) c.statistics.push_back(ex::parse_statistic(s));
      }
      if (o_c4->count() > 0) c.c4 = mc_c4;
      if (o_workers->count() > 0) c.workers = mc_workers;
      if (o_cap->count() > 0) c.max_cap = mc_max_cap;
      if (c.n_schedule.empty()) c.n_schedule = ex::default_schedule(c.model.kind);
      partial_csv = pick(o_csv, mc_csv, cfg, "csv", std::string());
      partial_json = pick(o_json, mc_json, cfg, "json", std::string());
      partial_rcsv = pick(o_rcsv, mc_replica_csv, cfg, "replica_csv", std::string());
      try {
        const ex::ExponentReport report = ex::run_exponent_mc(c);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
        if (!partial_csv.empty()) ex::write_text_file(partial_csv, ex::exponent_csv(report));
        if (!partial_rcsv.empty()) ex::write_text_file(partial_rcsv, ex::replica_csv(report));
        emit(partial_json, ex::exponent_json(report).dump(2) + "\n");
      } catch (const ex::PartialResultError& e) {
        partial = e.partial();
        throw;
      }
    } else if (transfer->parsed()) {
      const json cfg = load_config(tr_config);
      ex::TransferConfig c = ex::merge_transfer_config(cfg, ex::TransferConfig{});
      if (t_preset->count() > 0) c.preset = tr_preset;
      if (t_deg->count() > 0) c.degrees = parse_numbers<std::uint32_t>(tr_degrees, "degree");
      if (t_eps->count() > 0) c.eps = tr_eps;
      if (t_grid->count() > 0) c.grid = tr_grid;
      if (t_depth->count() > 0) c.depth = tr_depth;
      if (t_kmax->count() > 0) c.k_max = tr_kmax;
      if (t_seed->count() > 0) c.seed = tr_seed;
      const std::string out = pick(t_out, tr_out, cfg, "out", std::string());
      emit(out, ex::transfer_diagnostics(c).dump(2) + "\n");
    } else if (lcs->parsed()) {
      const json cfg = load_config(lcs_config);
      ex::LcsRequest req;
      req.file_x = pick(l_x, lcs_x, cfg, "file_x", std::string());
      req.file_y = pick(l_y, lcs_y, cfg, "file_y", std::string());
      if (req.file_x.empty() || req.file_y.empty()) throw ex::UsageError("lcs needs two input files");
      if (l_n->count() > 0 || cfg.contains("n")) req.n = pick(l_n, lcs_n, cfg, "n", std::size_t{0});
      req.constraint = ex::parse_statistic(pick(l_c, lcs_constraint, cfg, "constraint", std::string("all")));
      if (l_alpha->count() > 0 || cfg.contains("alpha")) {
        req.alpha = pick(l_alpha, lcs_alpha, cfg, "alpha", std::size_t{0});
      }
      req.c4 = pick(l_c4, lcs_c4, cfg, "c4", 2.0);
      req.bytes = pick(l_bytes, lcs_bytes, cfg, "bytes", false);
      std::cout << ex::lcs_record(req).dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (partial) {
      // Whatever finished is still written, marked by the exit status.
      try {
        for (const auto& w : partial->warnings) std::cerr << "warning: " << w << "\n";
        if (!partial_csv.empty()) ex::write_text_file(partial_csv, ex::exponent_csv(*partial));
        if (!partial_rcsv.empty()) ex::write_text_file(partial_rcsv, ex::replica_csv(*partial));
        json j = ex::exponent_json(*partial);
        j["partial"] = true;
        emit(partial_json, j.dump(2) + "\n");
      } catch (const std::exception& w) {
        std::cerr << "error: " << w.what() << "\n";
      }
    }
    return ex::exit_code_for(e);
  }
  return ex::kExitOk;
}
