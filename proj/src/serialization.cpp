#include "maxlab/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "maxlab/errors.hpp"

namespace maxlab {

namespace {

using nlohmann::json;

// Strings go through parse_rational directly; number tokens are re-serialized
// first, which preserves their decimal spelling and so converts exactly.
Rational read_rational(const json& el, const std::string& field) {
  try {
    if (el.is_string()) return parse_rational(el.get<std::string>());
    if (el.is_number()) return parse_rational(el.dump());
  } catch (const std::invalid_argument& e) {
    throw InputError("field '" + field + "': " + e.what());
  }
  throw InputError("field '" + field + "': expected a number or fraction string, got " +
                   el.dump());
}

const json& require_field(const json& j, const std::string& name, const std::string& where) {
  if (!j.is_object()) {
    throw InputError(where + ": expected an object with field '" + name + "'");
  }
  const auto it = j.find(name);
  if (it == j.end()) throw InputError(where + ": missing field '" + name + "'");
  return *it;
}

std::vector<Rational> read_rational_array(const json& el, const std::string& field) {
  if (!el.is_array()) throw InputError("field '" + field + "': expected an array");
  std::vector<Rational> out;
  out.reserve(el.size());
  for (size_t i = 0; i < el.size(); ++i) {
    out.push_back(read_rational(el[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json endpoint_to_json(const Interval& I, bool low) {
  if (low ? I.lo_infinite() : I.hi_infinite()) return json(low ? "-inf" : "inf");
  return json(to_fraction_string(low ? I.lo() : I.hi()));
}

std::optional<Rational> read_endpoint(const json& el, const std::string& field) {
  if (el.is_string()) {
    const auto s = el.get<std::string>();
    if (s == "inf" || s == "-inf") return std::nullopt;
  }
  return read_rational(el, field);
}

bool read_bool(const json& el, const std::string& field) {
  if (!el.is_boolean()) throw InputError("field '" + field + "': expected true or false");
  return el.get<bool>();
}

}  // namespace

json measure_to_json(const Measure& mu) {
  json atoms = json::array();
  for (const Atom& a : mu.atoms()) {
    atoms.push_back({{"x", to_fraction_string(a.position)}, {"w", to_fraction_string(a.weight)}});
  }
  json breaks = json::array(), values = json::array();
  for (const Rational& b : mu.density_breakpoints()) breaks.push_back(to_fraction_string(b));
  for (const Rational& v : mu.density_values()) values.push_back(to_fraction_string(v));
  return json{{"atoms", std::move(atoms)},
              {"density", {{"breakpoints", std::move(breaks)}, {"values", std::move(values)}}}};
}

Measure measure_from_json(const json& j) {
  if (!j.is_object()) throw InputError("measure: expected an object");
  std::vector<Atom> atoms;
  if (const auto it = j.find("atoms"); it != j.end()) {
    if (!it->is_array()) throw InputError("field 'atoms': expected an array");
    for (size_t i = 0; i < it->size(); ++i) {
      const std::string where = "atoms[" + std::to_string(i) + "]";
      const json& a = (*it)[i];
      atoms.push_back({read_rational(require_field(a, "x", where), where + ".x"),
                       read_rational(require_field(a, "w", where), where + ".w")});
    }
  }
  const json& density = require_field(j, "density", "measure");
  auto breaks = read_rational_array(require_field(density, "breakpoints", "density"),
                                    "density.breakpoints");
  auto values = read_rational_array(require_field(density, "values", "density"),
                                    "density.values");
  return Measure(std::move(atoms), std::move(breaks), std::move(values));
}

json step_function_to_json(const StepFunction& f) {
  json breaks = json::array(), values = json::array(), points = json::array();
  for (const Rational& b : f.breakpoints()) breaks.push_back(to_fraction_string(b));
  for (const Rational& v : f.values()) values.push_back(to_fraction_string(v));
  for (const Rational& v : f.point_values()) points.push_back(to_fraction_string(v));
  return json{{"breakpoints", std::move(breaks)},
              {"values", std::move(values)},
              {"point_values", std::move(points)}};
}

StepFunction step_function_from_json(const json& j) {
  auto breaks =
      read_rational_array(require_field(j, "breakpoints", "step function"), "breakpoints");
  auto values = read_rational_array(require_field(j, "values", "step function"), "values");
  std::optional<std::vector<Rational>> points;
  if (const auto it = j.find("point_values"); it != j.end()) {
    points = read_rational_array(*it, "point_values");
  }
  return StepFunction(std::move(breaks), std::move(values), std::move(points));
}

json covering_to_json(const CoveringFamily& family) {
  json balls = json::array();
  for (const CoveringBall& b : family.balls) {
    balls.push_back({{"lo", endpoint_to_json(b.ball, true)},
                     {"hi", endpoint_to_json(b.ball, false)},
                     {"lo_closed", b.ball.lo_closed()},
                     {"hi_closed", b.ball.hi_closed()},
                     {"average", to_fraction_string(b.average)}});
  }
  return json{{"t", to_fraction_string(family.t)}, {"balls", std::move(balls)}};
}

CoveringFamily covering_from_json(const json& j) {
  CoveringFamily family;
  family.t = read_rational(require_field(j, "t", "covering"), "t");
  const json& balls = require_field(j, "balls", "covering");
  if (!balls.is_array()) throw InputError("field 'balls': expected an array");
  for (size_t i = 0; i < balls.size(); ++i) {
    const std::string where = "balls[" + std::to_string(i) + "]";
    const json& b = balls[i];
    auto lo = read_endpoint(require_field(b, "lo", where), where + ".lo");
    auto hi = read_endpoint(require_field(b, "hi", where), where + ".hi");
    const bool lo_closed = read_bool(require_field(b, "lo_closed", where), where + ".lo_closed");
    const bool hi_closed = read_bool(require_field(b, "hi_closed", where), where + ".hi_closed");
    Rational avg = read_rational(require_field(b, "average", where), where + ".average");
    try {
      family.balls.push_back(
          {Interval(std::move(lo), std::move(hi), lo_closed, hi_closed), std::move(avg), ""});
    } catch (const std::invalid_argument& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return family;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::string out = "experiment,p,t_or_seed,value,bound,margin\n";
  for (const CsvRow& r : rows) {
    out += r.experiment;
    out += ',';
    out += format_double(r.p);
    out += ',';
    out += r.t_or_seed;
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += format_double(r.bound);
    out += ',';
    out += format_double(r.margin);
    out += '\n';
  }
  return out;
}

std::string line_plot_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::string& title) {
  if (xs.size() != ys.size()) throw PreconditionViolated("plot needs equal-length x and y");
  constexpr int W = 640, H = 400, M = 50;  // canvas and margin
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (!xs.empty()) {
    x_lo = *std::min_element(xs.begin(), xs.end());
    x_hi = *std::max_element(xs.begin(), xs.end());
    y_lo = *std::min_element(ys.begin(), ys.end());
    y_hi = *std::max_element(ys.begin(), ys.end());
  }
  if (x_hi - x_lo <= 0.0) x_hi = x_lo + 1.0;
  if (y_hi - y_lo <= 0.0) y_hi = y_lo + 1.0;
  const auto px = [&](double x) { return M + (W - 2 * M) * (x - x_lo) / (x_hi - x_lo); };
  const auto py = [&](double y) { return H - M - (H - 2 * M) * (y - y_lo) / (y_hi - y_lo); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
      << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"14\">"
      << title << "</text>\n"
      << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\""
      << H - 2 * M << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!xs.empty()) {
    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i) svg << ' ';
      svg << format_double(px(xs[i])) << ',' << format_double(py(ys[i]));
    }
    svg << "\"/>\n";
  }
  svg << "<text x=\"" << M << "\" y=\"" << H - M + 20
      << "\" font-family=\"monospace\" font-size=\"12\">" << format_double(x_lo) << "</text>\n"
      << "<text x=\"" << W - M << "\" y=\"" << H - M + 20
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">"
      << format_double(x_hi) << "</text>\n"
      << "<text x=\"" << M - 6 << "\" y=\"" << H - M
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">"
      << format_double(y_lo) << "</text>\n"
      << "<text x=\"" << M - 6 << "\" y=\"" << M + 4
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">"
      << format_double(y_hi) << "</text>\n</svg>\n";
  return svg.str();
}

}  // namespace maxlab
