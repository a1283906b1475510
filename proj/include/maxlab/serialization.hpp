#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "maxlab/coverings.hpp"
#include "maxlab/measure.hpp"
#include "maxlab/step_function.hpp"

namespace maxlab {

// JSON schemas (all numeric fields are exact fraction strings like "7/3";
// plain JSON numbers are accepted on input and converted exactly):
//
//   measure   {"atoms": [{"x": ..., "w": ...}],
//              "density": {"breakpoints": [...], "values": [...]}}
//   step fn   {"breakpoints": [...], "values": [...], "point_values": [...]}
//   covering  {"t": ..., "balls": [{"lo": ..., "hi": ..., "lo_closed": bool,
//              "hi_closed": bool, "average": ...}]}
//
// "atoms" and "point_values" may be omitted. Infinite interval endpoints are
// the strings "-inf" / "inf". Malformed input throws InputError naming the
// offending field; writing then re-reading reproduces the object exactly.

nlohmann::json measure_to_json(const Measure& mu);
Measure measure_from_json(const nlohmann::json& j);

nlohmann::json step_function_to_json(const StepFunction& f);
StepFunction step_function_from_json(const nlohmann::json& j);

nlohmann::json covering_to_json(const CoveringFamily& family);
CoveringFamily covering_from_json(const nlohmann::json& j);

// Parse a whole file; wraps open/parse failures in InputError.
nlohmann::json load_json_file(const std::string& path);

// One row of experiment output. The shared column layout keeps every
// experiment's CSV concatenable:
//   experiment,p,t_or_seed,value,bound,margin
struct CsvRow {
  std::string experiment;
  double p = 0.0;
  std::string t_or_seed;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
};

// Header plus one line per row, every double pinned to 15 significant digits
// so reruns are byte-identical.
std::string to_csv(const std::vector<CsvRow>& rows);

// Minimal standalone SVG line plot of y against x (equal lengths, xs
// ascending). Deterministic output for fixed input.
std::string line_plot_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::string& title);

}  // namespace maxlab
