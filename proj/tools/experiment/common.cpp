#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "experiment.hpp"
#include "minorbit/errors.hpp"

namespace minorbit::experiment {

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const UsageError*>(&e) != nullptr ||
      dynamic_cast<const std::invalid_argument*>(&e) != nullptr ||
      dynamic_cast<const std::length_error*>(&e) != nullptr) {
    return kExitUsage;
  }
  if (dynamic_cast<const IoError*>(&e) != nullptr) return kExitIo;
  if (dynamic_cast<const ResourceError*>(&e) != nullptr ||
      dynamic_cast<const PartialResultError*>(&e) != nullptr) {
    return kExitResource;
  }
  if (dynamic_cast<const ConvergenceError*>(&e) != nullptr ||
      dynamic_cast<const SolverError*>(&e) != nullptr ||
      dynamic_cast<const FitError*>(&e) != nullptr) {
    return kExitConvergence;
  }
  return 1;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return buf.str();
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size() || frac == 0.0) return sorted[lo];
  const double a = sorted[lo], b = sorted[lo + 1];
  if (std::isinf(b)) return b;
  return a + frac * (b - a);
}

}  // namespace minorbit::experiment
