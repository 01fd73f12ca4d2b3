#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "experiment.hpp"
#include "minorbit/bernoulli.hpp"
#include "minorbit/dimension.hpp"
#include "minorbit/errors.hpp"

namespace minorbit::experiment {

namespace bn = minorbit::bernoulli;

namespace {

json boundary_json(const bn::DiagonalBoundary& b) {
  return json{{"c_minus", b.c_minus}, {"c_plus", b.c_plus}};
}

// Small formatting helper for SVG coordinates.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string svg_header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// Blue for annealed, orange for quenched; darker for larger exponents.
std::string regime_colour(bn::Regime regime, double exponent, double top) {
  const double t = std::clamp((exponent - 2.0) / std::max(top - 2.0, 1e-9), 0.0, 1.0);
  const int shade = static_cast<int>(std::lround(230.0 - 150.0 * t));
  char buf[16];
  if (regime == bn::Regime::Quenched) {
    std::snprintf(buf, sizeof buf, "#ff%02x%02x", shade, shade / 3);
  } else {
    std::snprintf(buf, sizeof buf, "#%02x%02xff", shade / 2, shade);
  }
  return buf;
}

}  // namespace

json entropy_record(double p_a, double p_b) {
  const bn::BernoulliParams params(p_a, p_b);
  const bn::PhasePoint point = bn::exponent(params);
  return json{
      {"tool", kToolVersion},
      {"command", "entropy"},
      {"config", {{"pA", p_a}, {"pB", p_b}}},
      {"h2_an", point.h2_an},
      {"h2_qu", point.h2_qu},
      {"annealed_exponent", 2.0 / point.h2_an},
      {"quenched_exponent", 1.0 / point.h2_qu},
      {"exponent", point.exponent},
      {"regime", bn::regime_name(point.regime)},
      {"h2_qu_alternate_form", bn::renyi_quenched_alternate_form(params)},
      {"note", bn::quenched_formula_note()},
  };
}

std::string phase_diagram_csv(std::size_t resolution) {
  std::string out = "pA,pB,h2_an,h2_qu,exponent,regime\n";
  for (const auto& p : bn::phase_grid(resolution)) {
    out += csv_double(p.params.p_a()) + ',' + csv_double(p.params.p_b()) + ',' +
           csv_double(p.h2_an) + ',' + csv_double(p.h2_qu) + ',' +
           csv_double(p.exponent) + ',' + std::string(bn::regime_name(p.regime)) + '\n';
  }
  return out;
}

std::string phase_diagram_svg(std::size_t resolution) {
  const auto grid = bn::phase_grid(resolution);
  const double size = 512.0, margin = 40.0;
  const double cell = size / static_cast<double>(resolution);
  double top = 2.0;
  for (const auto& p : grid) top = std::max(top, p.exponent);
  std::string svg = svg_header(size + 2 * margin, size + 2 * margin);
  for (const auto& p : grid) {
    const double x = margin + (p.params.p_a() - 0.5 / resolution) * size;
    const double y = margin + (1.0 - p.params.p_b() - 0.5 / resolution) * size;
    svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) +
           "\" height=\"" + num(cell) + "\" fill=\"" +
           regime_colour(p.regime, p.exponent, std::min(top, 8.0)) + "\"/>\n";
  }
  svg += "<text x=\"" + num(margin + size / 2) + "\" y=\"" + num(size + 1.6 * margin) +
         "\" text-anchor=\"middle\" font-size=\"14\">pA</text>\n";
  svg += "<text x=\"" + num(margin / 3) + "\" y=\"" + num(margin + size / 2) +
         "\" font-size=\"14\">pB</text>\n</svg>\n";
  return svg;
}

DiagScan diag_scan(std::size_t steps) {
  if (steps < 4) throw UsageError("diag-scan needs at least 4 steps");
  DiagScan scan;
  scan.csv = "pA,exponent,regime\n";
  std::vector<std::pair<double, bn::PhasePoint>> rows;
  for (std::size_t i = 1; i < steps; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(steps);
    const bn::PhasePoint point = bn::exponent(bn::BernoulliParams(p, 1.0 - p));
    scan.csv += csv_double(p) + ',' + csv_double(point.exponent) + ',' +
                std::string(bn::regime_name(point.regime)) + '\n';
    rows.emplace_back(p, point);
  }

  const double tol = 1e-9;
  const auto bisected = bn::phase_boundary_diag(tol);
  const std::size_t k = 12;
  const auto cylinder_an = [k](double a, double b) {
    const auto model = dimension::ProductCylinderModel::from_bernoulli(bn::BernoulliParams(a, b));
    return -std::log2(dimension::annealed_cylinder_sum(model, k)) / static_cast<double>(k);
  };
  const auto cylinder_qu = [k](double a, double b) {
    const auto model = dimension::ProductCylinderModel::from_bernoulli(bn::BernoulliParams(a, b));
    return -std::log2(dimension::quenched_cylinder_sum(model, k)) / static_cast<double>(k);
  };
  const auto from_cylinders = bn::phase_boundary_diag(tol, cylinder_an, cylinder_qu);
  const auto alternate = bn::diagonal_boundary_alternate();

  scan.report = json{
      {"tool", kToolVersion},
      {"command", "diag-scan"},
      {"config", {{"steps", steps}}},
      {"rows", rows.size()},
      {"boundary",
       {{"bisection", boundary_json(bisected)},
        {"bisection_cylinder_sums_k12", boundary_json(from_cylinders)},
        {"closed_form", boundary_json(bn::diagonal_boundary_closed_form())},
        {"alternate_form", boundary_json(alternate)}}},
      {"c_minus_alternate_minus_bisection", alternate.c_minus - bisected.c_minus},
      {"note", bn::quenched_formula_note()},
  };

  const double w = 640.0, h = 400.0, margin = 40.0;
  double top = 0.0;
  for (const auto& [p, point] : rows) top = std::max(top, point.exponent);
  top = std::min(top, 12.0);
  auto px = [&](double p) { return margin + p * (w - 2 * margin); };
  auto py = [&](double e) { return h - margin - std::min(e, top) / top * (h - 2 * margin); };
  std::string line, an, qu;
  for (const auto& [p, point] : rows) {
    line += num(px(p)) + "," + num(py(point.exponent)) + " ";
    an += num(px(p)) + "," + num(py(2.0 / point.h2_an)) + " ";
    qu += num(px(p)) + "," + num(py(1.0 / point.h2_qu)) + " ";
  }
  scan.svg = svg_header(w, h);
  scan.svg += "<polyline fill=\"none\" stroke=\"#4060ff\" stroke-dasharray=\"4 3\" points=\"" + an + "\"/>\n";
  scan.svg += "<polyline fill=\"none\" stroke=\"#ff8020\" stroke-dasharray=\"4 3\" points=\"" + qu + "\"/>\n";
  scan.svg += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"" + line + "\"/>\n";
  for (double c : {bisected.c_minus, bisected.c_plus}) {
    scan.svg += "<line x1=\"" + num(px(c)) + "\" y1=\"" + num(margin) + "\" x2=\"" +
                num(px(c)) + "\" y2=\"" + num(h - margin) + "\" stroke=\"grey\"/>\n";
  }
  scan.svg += "<text x=\"" + num(w / 2) + "\" y=\"" + num(h - 8) +
              "\" text-anchor=\"middle\" font-size=\"14\">pA (pB = 1 - pA)</text>\n</svg>\n";
  return scan;
}

std::vector<Symbol> parse_symbol_file(std::string_view contents, bool bytes) {
  if (!contents.empty() && contents.back() == '\n') contents.remove_suffix(1);
  if (contents.empty()) throw UsageError("symbol file is empty");
  std::vector<Symbol> out;
  out.reserve(contents.size());
  for (std::size_t k = 0; k < contents.size(); ++k) {
    const char c = contents[k];
    if (bytes) {
      if (c == '\n') throw UsageError("newline inside symbol stream at byte " + std::to_string(k));
      out.push_back(static_cast<Symbol>(static_cast<unsigned char>(c)));
    } else {
      if (c != '0' && c != '1') {
        throw UsageError("expected '0' or '1' at byte " + std::to_string(k));
      }
      out.push_back(static_cast<Symbol>(c - '0'));
    }
  }
  return out;
}

json lcs_record(const LcsRequest& request) {
  const auto x = parse_symbol_file(read_text_file(request.file_x), request.bytes);
  const auto y = parse_symbol_file(read_text_file(request.file_y), request.bytes);
  const std::size_t n = request.n.value_or(std::min(x.size(), y.size()));
  MatchConstraint constraint{request.constraint, 0};
  if (constraint.kind == ConstraintKind::Band || constraint.kind == ConstraintKind::OffBand) {
    constraint.alpha = request.alpha.has_value() ? *request.alpha : gap_alpha(n, request.c4);
  }
  const MatchResult result = lcs_match(x, y, n, constraint);
  json config{{"file_x", request.file_x},
              {"file_y", request.file_y},
              {"n", n},
              {"constraint", constraint.name()},
              {"bytes", request.bytes}};
  if (constraint.kind == ConstraintKind::Band || constraint.kind == ConstraintKind::OffBand) {
    config["alpha"] = constraint.alpha;
  }
  return json{
      {"tool", kToolVersion},
      {"command", "lcs"},
      {"config", config},
      {"m", result.length},
      {"witness", {{"i", result.witness.i}, {"j", result.witness.j}}},
      {"distance", to_distance(result.length, 2.0)},
      {"log2_distance", -static_cast<double>(result.length)},
      {"truncated", result.truncated},
      {"n", n},
  };
}

}  // namespace minorbit::experiment
