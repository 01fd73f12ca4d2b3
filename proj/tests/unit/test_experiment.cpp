#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "experiment/experiment.hpp"
#include "minorbit/errors.hpp"

using namespace minorbit;
using namespace minorbit::experiment;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "minorbit_experiment_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

ExperimentConfig small_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.model.kind = ModelKind::Bernoulli;
  c.model.p_a = 0.3;
  c.model.p_b = 0.6;
  c.n_schedule = {256, 1024};
  c.replicas = 12;
  c.seed = seed;
  c.statistics = {ConstraintKind::All, ConstraintKind::Diagonal, ConstraintKind::FarThirds};
  return c;
}

}  // namespace

TEST(Quantile, Type7Interpolation) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted({7.0}, 0.3), 7.0);
}

TEST(Formatting, CsvDoubleSpellsNonFinite) {
  EXPECT_EQ(csv_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(csv_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(csv_double(std::nan("")), "nan");
  EXPECT_EQ(csv_double(0.5), "0.5");
  EXPECT_EQ(std::stod(csv_double(0.1)), 0.1);
}

TEST(SymbolFile, BinaryAndBytes) {
  EXPECT_EQ(parse_symbol_file("0110\n", false), (std::vector<Symbol>{0, 1, 1, 0}));
  EXPECT_EQ(parse_symbol_file("01", false), (std::vector<Symbol>{0, 1}));
  EXPECT_THROW(parse_symbol_file("01\n\n", false), UsageError);
  EXPECT_THROW(parse_symbol_file("0120", false), UsageError);
  EXPECT_THROW(parse_symbol_file("", false), UsageError);
  EXPECT_THROW(parse_symbol_file("\n", false), UsageError);
  EXPECT_EQ(parse_symbol_file("ab\n", true), (std::vector<Symbol>{'a', 'b'}));
}

TEST(Entropy, RecordValues) {
  const json fair = entropy_record(0.5, 0.5);
  EXPECT_NEAR(fair["exponent"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(fair["regime"], "annealed");
  EXPECT_NEAR(fair["h2_qu_alternate_form"].get<double>(), -std::log2(5.0 / 8.0), 1e-12);
  EXPECT_TRUE(fair.contains("note"));

  const json skew = entropy_record(0.1, 0.9);
  EXPECT_NEAR(skew["exponent"].get<double>(), 3.49278, 1e-5);
  EXPECT_EQ(skew["regime"], "quenched");

  const json mid = entropy_record(0.3, 0.6);
  EXPECT_NEAR(mid["h2_an"].get<double>(), -std::log2(0.505), 1e-12);
  EXPECT_NEAR(mid["exponent"].get<double>(), 2.0291287, 1e-6);

  EXPECT_THROW(entropy_record(1.5, 0.5), std::exception);
}

TEST(PhaseDiagram, CsvShapeAndDeterminism) {
  const std::string csv = phase_diagram_csv(64);
  EXPECT_EQ(count_lines(csv), 64u * 64u + 1u);
  EXPECT_EQ(csv.rfind("pA,pB,h2_an,h2_qu,exponent,regime\n", 0), 0u);
  EXPECT_NE(csv.find(",annealed\n"), std::string::npos);
  EXPECT_NE(csv.find(",quenched\n"), std::string::npos);
  EXPECT_EQ(csv, phase_diagram_csv(64));
  EXPECT_NE(phase_diagram_svg(16).find("<svg"), std::string::npos);
}

TEST(DiagScan, ReportAndSymmetry) {
  const DiagScan scan = diag_scan(200);
  EXPECT_EQ(count_lines(scan.csv), 200u);

  // Parse the CSV back: pA,exponent,regime.
  std::istringstream in(scan.csv);
  std::string line;
  std::getline(in, line);
  std::vector<double> exps;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    const double p = std::stod(line.substr(0, a));
    exps.push_back(std::stod(line.substr(a + 1, b - a - 1)));
    if (std::fabs(p - 0.5) < 1e-12) EXPECT_NEAR(exps.back(), 2.0, 1e-12);
  }
  ASSERT_EQ(exps.size(), 199u);
  for (std::size_t i = 0; i < exps.size(); ++i) {
    EXPECT_NEAR(exps[i], exps[exps.size() - 1 - i], 1e-12);
  }

  const json& b = scan.report["boundary"];
  EXPECT_NEAR(b["bisection"]["c_minus"].get<double>(), 0.178203, 1e-5);
  EXPECT_NEAR(b["closed_form"]["c_minus"].get<double>(), 0.178203, 1e-5);
  EXPECT_NEAR(b["bisection_cylinder_sums_k12"]["c_minus"].get<double>(), 0.178203, 1e-5);
  EXPECT_NEAR(b["alternate_form"]["c_minus"].get<double>(), 0.23205, 1e-5);
  EXPECT_NEAR(b["bisection"]["c_plus"].get<double>(), 0.821797, 1e-5);
  EXPECT_THROW(diag_scan(2), UsageError);
}

TEST(ExponentMc, ByteIdenticalAcrossWorkerCounts) {
  ExperimentConfig c = small_config(5);
  c.workers = 1;
  const std::string one = exponent_csv(run_exponent_mc(c));
  const std::string one_replicas = replica_csv(run_exponent_mc(c));
  for (std::size_t w : {4u, 8u}) {
    c.workers = w;
    const auto report = run_exponent_mc(c);
    EXPECT_EQ(exponent_csv(report), one) << w << " workers";
    EXPECT_EQ(replica_csv(report), one_replicas) << w << " workers";
  }
}

TEST(ExponentMc, ReportShapeAndTheory) {
  const ExperimentConfig c = small_config(6);
  const auto report = run_exponent_mc(c);
  ASSERT_EQ(report.rows.size(), 6u);
  EXPECT_EQ(report.rows[0].n, 256u);
  EXPECT_EQ(report.rows[3].n, 1024u);
  EXPECT_EQ(report.rows[1].statistic, ConstraintKind::Diagonal);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.replicas, 12u);
    EXPECT_LE(row.q25, row.median);
    EXPECT_LE(row.median, row.q75);
  }
  ASSERT_TRUE(report.theory.has_value());
  EXPECT_NEAR(report.theory->annealed, 2.0 / -std::log2(0.505), 1e-12);
  EXPECT_NEAR(report.theory->max, 2.0291287, 1e-6);
  EXPECT_GE(report.cap, initial_cap(1024));

  const std::string csv = exponent_csv(report);
  EXPECT_EQ(count_lines(csv), 7u);
  EXPECT_EQ(count_lines(replica_csv(report)), 1u + 12u * 6u);
  const json j = exponent_json(report);
  EXPECT_EQ(j["rows"].size(), 6u);
  EXPECT_EQ(j["seed"], 6u);
  EXPECT_FALSE(j["config"].contains("workers"));
}

TEST(ExponentMc, DeterministicModelsAndSeeds) {
  ExperimentConfig c;
  c.model.kind = ModelKind::DeterministicDoubling;
  c.n_schedule = {512};
  c.replicas = 20;
  c.seed = 3;
  const auto a = exponent_csv(run_exponent_mc(c));
  EXPECT_EQ(a, exponent_csv(run_exponent_mc(c)));
  c.seed = 4;
  EXPECT_NE(a, exponent_csv(run_exponent_mc(c)));

  ExperimentConfig circle;
  circle.model.kind = ModelKind::Circle;
  circle.model.degrees = {2, 3};
  circle.n_schedule = {256};
  circle.replicas = 10;
  const auto report = run_exponent_mc(circle);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_GT(report.rows[0].median, 0.0);
}

TEST(ExponentMc, CapCeilingGivesPartialResult) {
  ExperimentConfig c;
  c.model.p_a = 0.999;
  c.model.p_b = 0.999;
  c.n_schedule = {1024};
  c.replicas = 4;
  c.max_cap = 128;
  try {
    run_exponent_mc(c);
    FAIL() << "expected a partial result";
  } catch (const PartialResultError& e) {
    EXPECT_EQ(exit_code_for(e), kExitResource);
    EXPECT_FALSE(e.partial().warnings.empty());
  }
}

TEST(ExponentMc, ValidationRejectsBadConfigs) {
  ExperimentConfig c = small_config(1);
  c.n_schedule = {};
  EXPECT_THROW(validate(c), UsageError);
  c.n_schedule = {512, 256};
  EXPECT_THROW(validate(c), UsageError);
  c = small_config(1);
  c.replicas = 0;
  EXPECT_THROW(validate(c), UsageError);
  c = small_config(1);
  c.model.p_a = 1.0;
  EXPECT_THROW(validate(c), UsageError);
  c = small_config(1);
  c.model.kind = ModelKind::Circle;
  c.model.degrees = {1};
  EXPECT_THROW(validate(c), UsageError);
  c.model.degrees = {2};
  c.model.potentials = "cosine";
  EXPECT_THROW(validate(c), UsageError);
  EXPECT_NO_THROW(validate(small_config(1)));
}

TEST(Config, MergeOverridesAndErrors) {
  const json j = json::parse(R"({"model": {"kind": "bernoulli", "pA": 0.2},
                                 "n_schedule": [64, 128], "replicas": 7,
                                 "statistics": ["diag", "band"], "seed": 99})");
  const auto c = merge_config(j, ExperimentConfig{});
  EXPECT_DOUBLE_EQ(c.model.p_a, 0.2);
  EXPECT_DOUBLE_EQ(c.model.p_b, 0.5);
  EXPECT_EQ(c.n_schedule, (std::vector<std::size_t>{64, 128}));
  EXPECT_EQ(c.replicas, 7u);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.statistics, (std::vector<ConstraintKind>{ConstraintKind::Diagonal,
                                                       ConstraintKind::Band}));
  EXPECT_EQ(merge_config(json::parse(R"({"model": "circle"})"), ExperimentConfig{}).model.kind,
            ModelKind::Circle);

  EXPECT_THROW(merge_config(json::parse(R"({"replicas": "many"})"), {}), UsageError);
  EXPECT_THROW(merge_config(json::parse(R"({"statistics": ["sideways"]})"), {}), UsageError);
  EXPECT_THROW(merge_config(json::parse("[1, 2]"), {}), UsageError);
  EXPECT_THROW(merge_transfer_config(json::parse(R"({"grid": -3})"), {}), UsageError);

  const auto t = merge_transfer_config(json::parse(R"({"preset": "cosine-doubling", "eps": 0.2})"), {});
  EXPECT_EQ(t.preset, "cosine-doubling");
  EXPECT_DOUBLE_EQ(t.eps, 0.2);
}

TEST(Transfer, ConformalDiagnostics) {
  TransferConfig c;
  c.grid = 1024;
  c.depth = 20;
  c.k_max = 10;
  const json j = transfer_diagnostics(c);
  EXPECT_TRUE(j["integral_of_one_is_exact"].get<bool>());
  EXPECT_LE(j["max_abs_error_vs_lebesgue"].get<double>(), 1e-6);
  EXPECT_LE(j["pushforward_residual"].get<double>(), 1e-10);
  EXPECT_EQ(j["mixing"]["values"].size(), 11u);
}

TEST(Transfer, CosineDiagnostics) {
  TransferConfig c;
  c.preset = "cosine-doubling";
  c.grid = 1024;
  c.depth = 30;
  c.k_max = 10;
  const json j = transfer_diagnostics(c);
  EXPECT_LE(j["pushforward_residual"].get<double>(), 1e-5);
  EXPECT_FALSE(j.contains("max_abs_error_vs_lebesgue"));
  EXPECT_LT(j["mixing"]["log_slope"].get<double>(), 0.0);

  c.preset = "sideways";
  EXPECT_THROW(transfer_diagnostics(c), UsageError);
}

TEST(Lcs, RecordFromFiles) {
  const auto dir = scratch_dir();
  const auto x = (dir / "x.txt").string();
  const auto y = (dir / "y.txt").string();
  write_text_file(x, "00101\n");
  write_text_file(y, "10100\n");

  LcsRequest req;
  req.file_x = x;
  req.file_y = y;
  json j = lcs_record(req);
  EXPECT_EQ(j["m"], 3u);
  EXPECT_EQ(j["witness"]["i"], 1u);
  EXPECT_EQ(j["witness"]["j"], 1u);
  EXPECT_EQ(j["n"], 5u);
  EXPECT_DOUBLE_EQ(j["distance"].get<double>(), 0.125);

  req.file_y = x;
  j = lcs_record(req);
  EXPECT_EQ(j["m"], 5u);
  EXPECT_TRUE(j["truncated"].get<bool>());

  req.file_x = (dir / "missing.txt").string();
  try {
    lcs_record(req);
    FAIL() << "expected an I/O error";
  } catch (const std::exception& e) {
    EXPECT_EQ(exit_code_for(e), kExitIo);
  }
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(UsageError("x")), kExitUsage);
  EXPECT_EQ(exit_code_for(IoError("x")), kExitIo);
  EXPECT_EQ(exit_code_for(DomainError("x")), kExitUsage);
  EXPECT_EQ(exit_code_for(ResourceError("x")), kExitResource);
  EXPECT_EQ(exit_code_for(ConvergenceError("x")), kExitConvergence);
  EXPECT_EQ(exit_code_for(FitError("x")), kExitConvergence);
}
