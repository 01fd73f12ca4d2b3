#include <algorithm>
#include <string>
#include <type_traits>
#include <vector>

#include "experiment.hpp"

namespace minorbit::experiment {

ConstraintKind parse_statistic(std::string_view name) {
  if (name == "all") return ConstraintKind::All;
  if (name == "diag") return ConstraintKind::Diagonal;
  if (name == "band") return ConstraintKind::Band;
  if (name == "offband") return ConstraintKind::OffBand;
  if (name == "farthirds") return ConstraintKind::FarThirds;
  throw UsageError("unknown statistic '" + std::string(name) +
                   "' (expected all, diag, band, offband, farthirds)");
}

ModelKind parse_model(std::string_view name) {
  if (name == "bernoulli") return ModelKind::Bernoulli;
  if (name == "circle") return ModelKind::Circle;
  if (name == "deterministic-doubling") return ModelKind::DeterministicDoubling;
  throw UsageError("unknown model '" + std::string(name) +
                   "' (expected bernoulli, circle, deterministic-doubling)");
}

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Bernoulli: return "bernoulli";
    case ModelKind::Circle: return "circle";
    case ModelKind::DeterministicDoubling: return "deterministic-doubling";
  }
  return "unknown";
}

std::vector<std::size_t> default_schedule(ModelKind kind) {
  if (kind == ModelKind::Bernoulli) return {1 << 10, 1 << 12, 1 << 14, 1 << 16, 1 << 18};
  return {1 << 10, 1 << 12, 1 << 14};
}

void validate(const ExperimentConfig& c) {
  if (c.n_schedule.empty()) throw UsageError("n_schedule is empty");
  for (std::size_t k = 0; k < c.n_schedule.size(); ++k) {
    if (c.n_schedule[k] < 3) throw UsageError("window lengths must be at least 3");
    if (k > 0 && c.n_schedule[k] <= c.n_schedule[k - 1]) {
      throw UsageError("n_schedule must be strictly increasing");
    }
  }
  if (c.replicas < 1) throw UsageError("replicas must be at least 1");
  if (c.workers < 1) throw UsageError("workers must be at least 1");
  if (c.statistics.empty()) throw UsageError("no statistics requested");
  if (!(c.c4 > 0.0)) throw UsageError("c4 must be positive");
  if (c.model.kind == ModelKind::Bernoulli) {
    const double a = c.model.p_a, b = c.model.p_b;
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
      throw UsageError("Bernoulli parameters must lie in (0, 1)");
    }
  }
  if (c.model.kind == ModelKind::Circle) {
    if (c.model.degrees.empty()) throw UsageError("circle model needs degrees");
    for (auto l : c.model.degrees) {
      if (l < 2) throw UsageError("circle degrees must be at least 2");
    }
    if (c.model.potentials != "conformal") {
      throw UsageError("exact orbit experiments support conformal potentials only");
    }
  }
}

json to_json(const ExperimentConfig& c) {
  json model{{"kind", model_name(c.model.kind)}};
  if (c.model.kind == ModelKind::Bernoulli) {
    model["pA"] = c.model.p_a;
    model["pB"] = c.model.p_b;
  } else if (c.model.kind == ModelKind::Circle) {
    model["degrees"] = c.model.degrees;
    model["potentials"] = c.model.potentials;
  }
  json stats = json::array();
  for (auto s : c.statistics) stats.push_back(MatchConstraint{s, 0}.name());
  return json{{"model", model},       {"n_schedule", c.n_schedule},
              {"replicas", c.replicas}, {"seed", c.seed},
              {"statistics", stats},    {"c4", c.c4},
              {"max_cap", c.max_cap}};
}

namespace {

template <class T>
struct unsigned_field : std::is_unsigned<T> {};
template <class U>
struct unsigned_field<std::vector<U>> : std::is_unsigned<U> {};

// Unsigned fields must hold non-negative integers; nlohmann would wrap -3.
bool bad_unsigned(const json& v) {
  if (v.is_array()) return std::any_of(v.begin(), v.end(), bad_unsigned);
  return v.is_number_float() || (v.is_number_integer() && !v.is_number_unsigned());
}

template <class T>
T get_field(const json& j, const char* key) {
  if constexpr (unsigned_field<T>::value) {
    if (j.contains(key) && bad_unsigned(j.at(key))) {
      throw UsageError(std::string("config field '") + key + "' must be a non-negative integer");
    }
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig merge_config(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  if (j.contains("model")) {
    const json& m = j.at("model");
    if (m.is_string()) {
      c.model.kind = parse_model(m.get<std::string>());
    } else if (m.is_object()) {
      if (m.contains("kind")) c.model.kind = parse_model(get_field<std::string>(m, "kind"));
      if (m.contains("pA")) c.model.p_a = get_field<double>(m, "pA");
      if (m.contains("pB")) c.model.p_b = get_field<double>(m, "pB");
      if (m.contains("degrees")) c.model.degrees = get_field<std::vector<std::uint32_t>>(m, "degrees");
      if (m.contains("potentials")) c.model.potentials = get_field<std::string>(m, "potentials");
    } else {
      throw UsageError("config field 'model' must be a string or object");
    }
  }
  if (j.contains("n_schedule")) c.n_schedule = get_field<std::vector<std::size_t>>(j, "n_schedule");
  if (j.contains("replicas")) c.replicas = get_field<std::size_t>(j, "replicas");
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
  if (j.contains("statistics")) {
    c.statistics.clear();
    for (const auto& s : get_field<std::vector<std::string>>(j, "statistics")) {
      c.statistics.push_back(parse_statistic(s));
    }
  }
  if (j.contains("c4")) c.c4 = get_field<double>(j, "c4");
  if (j.contains("workers")) c.workers = get_field<std::size_t>(j, "workers");
  if (j.contains("max_cap")) c.max_cap = get_field<std::size_t>(j, "max_cap");
  return c;
}

json to_json(const TransferConfig& c) {
  json j{{"preset", c.preset}, {"grid", c.grid}, {"depth", c.depth},
         {"k_max", c.k_max},   {"seed", c.seed}};
  if (c.preset == "conformal") j["degrees"] = c.degrees;
  if (c.preset == "cosine-doubling") j["eps"] = c.eps;
  return j;
}

TransferConfig merge_transfer_config(const json& j, TransferConfig c) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  if (j.contains("preset")) c.preset = get_field<std::string>(j, "preset");
  if (j.contains("degrees")) c.degrees = get_field<std::vector<std::uint32_t>>(j, "degrees");
  if (j.contains("eps")) c.eps = get_field<double>(j, "eps");
  if (j.contains("grid")) c.grid = get_field<std::size_t>(j, "grid");
  if (j.contains("depth")) c.depth = get_field<std::size_t>(j, "depth");
  if (j.contains("k_max")) c.k_max = get_field<std::size_t>(j, "k_max");
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
  return c;
}

}  // namespace minorbit::experiment
