#pragma once

// Experiment drivers behind the `minorbit` command line: closed-form
// entropy reports, phase-diagram and diagonal scans, Monte Carlo exponent
// runs, transfer-operator diagnostics and file-based matching.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "minorbit/matching.hpp"

namespace minorbit::experiment {

using nlohmann::json;

inline constexpr std::string_view kToolVersion = "minorbit 0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitResource = 4,
  kExitConvergence = 5,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maps a caught exception to the process exit code.
int exit_code_for(const std::exception& e) noexcept;

// printf("%.17g").
std::string format_double(double v);
// CSV cell for a double: %.17g, with inf/nan spelled "inf", "-inf", "nan".
std::string csv_double(double v);

void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

// ---------------------------------------------------------------- entropy

json entropy_record(double p_a, double p_b);

// ---------------------------------------------------------- phase diagram

std::string phase_diagram_csv(std::size_t resolution);
std::string phase_diagram_svg(std::size_t resolution);

struct DiagScan {
  std::string csv;
  json report;
  std::string svg;
};
// p_A = i / steps for i = 1..steps-1 on p_B = 1 - p_A.
DiagScan diag_scan(std::size_t steps);

// ------------------------------------------------------------ exponent mc

enum class ModelKind { Bernoulli, Circle, DeterministicDoubling };

struct ModelSpec {
  ModelKind kind = ModelKind::Bernoulli;
  double p_a = 0.5;
  double p_b = 0.5;
  std::vector<std::uint32_t> degrees{2, 3};
  std::string potentials = "conformal";
};

struct ExperimentConfig {
  ModelSpec model;
  std::vector<std::size_t> n_schedule;
  std::size_t replicas = 200;
  std::uint64_t seed = 1;
  std::vector<ConstraintKind> statistics{ConstraintKind::All};
  double c4 = 2.0;
  std::size_t workers = 1;
  std::size_t max_cap = 1 << 16;  // ceiling for automatic cap doubling
};

// {2^10, ..., 2^18} for symbolic models, {2^10, 2^12, 2^14} for circles.
std::vector<std::size_t> default_schedule(ModelKind kind);
// Throws UsageError for an ill-formed configuration.
void validate(const ExperimentConfig& config);
json to_json(const ExperimentConfig& config);
// Values present in `j` override `base`. Throws UsageError on bad fields.
ExperimentConfig merge_config(const json& j, ExperimentConfig base);

ConstraintKind parse_statistic(std::string_view name);
ModelKind parse_model(std::string_view name);
std::string_view model_name(ModelKind kind) noexcept;

// Symbolic models extend both sequences this far past n_max.
std::size_t initial_cap(std::size_t n_max);

struct ReplicaValue {
  double exponent = 0.0;
  double raw = 0.0;  // match length, or -log2 of the minimal distance
  bool truncated = false;
  bool collision = false;
};

struct StatisticSummary {
  std::size_t n = 0;
  ConstraintKind statistic = ConstraintKind::All;
  std::size_t alpha = 0;
  std::size_t replicas = 0;
  double q25 = 0.0, median = 0.0, q75 = 0.0;
  double median_raw = 0.0;
  std::size_t truncated = 0;
  std::size_t collisions = 0;
};

struct TheoryLines {
  double annealed;  // 2 / H2_an (or 2 / D2)
  double quenched;  // 1 / H2_qu
  double max;
};

struct ExponentReport {
  ExperimentConfig config;
  std::size_t cap = 0;
  std::vector<StatisticSummary> rows;  // n-major, statistics in config order
  std::optional<TheoryLines> theory;
  std::vector<std::string> warnings;
  // values[replica][n index][statistic index]
  std::vector<std::vector<std::vector<ReplicaValue>>> values;
};

// Thrown when the cap would exceed max_cap; carries what was finished.
class PartialResultError : public std::runtime_error {
 public:
  PartialResultError(const std::string& what, ExponentReport partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const ExponentReport& partial() const noexcept { return partial_; }

 private:
  ExponentReport partial_;
};

// Deterministic in (config minus workers): replicas run on `workers`
// threads and are merged by replica index.
ExponentReport run_exponent_mc(const ExperimentConfig& config);

std::string exponent_csv(const ExponentReport& report);
std::string replica_csv(const ExponentReport& report);
json exponent_json(const ExponentReport& report);

// Sample quantile, linear interpolation between order statistics
// (Hyndman-Fan type 7). `sorted` must be sorted and non-empty.
double quantile_sorted(const std::vector<double>& sorted, double p);

// --------------------------------------------------------------- transfer

struct TransferConfig {
  std::string preset = "conformal";  // or "cosine-doubling"
  std::vector<std::uint32_t> degrees{2, 3};
  double eps = 0.1;
  std::size_t grid = 4096;
  std::size_t depth = 40;  // n = m
  std::size_t k_max = 20;
  std::uint64_t seed = 1;
};

json to_json(const TransferConfig& config);
TransferConfig merge_transfer_config(const json& j, TransferConfig base);
// Throws ConvergenceError (exit 5) if a diagnostic fails to converge.
json transfer_diagnostics(const TransferConfig& config);

// -------------------------------------------------------------------- lcs

// Symbols from a file: '0'/'1' characters, or raw bytes with `bytes`.
// One trailing LF is accepted; anything else malformed throws UsageError.
std::vector<Symbol> parse_symbol_file(std::string_view contents, bool bytes);

struct LcsRequest {
  std::string file_x, file_y;
  std::optional<std::size_t> n;  // defaults to min(|x|, |y|)
  ConstraintKind constraint = ConstraintKind::All;
  std::optional<std::size_t> alpha;  // defaults to gap_alpha(n, c4)
  double c4 = 2.0;
  bool bytes = false;
};

json lcs_record(const LcsRequest& request);

}  // namespace minorbit::experiment
