// Command-line front end: every experiment the library supports, emitted as
// CSV/JSON/SVG with deterministic bytes for fixed inputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maxlab/bounds_lab.hpp"
#include "maxlab/coverings.hpp"
#include "maxlab/errors.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/norms.hpp"
#include "maxlab/serialization.hpp"

namespace {

using namespace maxlab;

struct GlobalOpts {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string output_dir;
  std::string format = "csv";  // csv | json
  bool plot = false;
};

// stdout by default; --output-dir redirects each artifact to a named file.
void emit(const GlobalOpts& g, const std::string& name, const std::string& content) {
  if (g.output_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(g.output_dir);
  const auto path = std::filesystem::path(g.output_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
}

std::string rows_to_json(const std::vector<CsvRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CsvRow& r : rows) {
    arr.push_back({{"experiment", r.experiment},
                   {"p", format_double(r.p)},
                   {"t_or_seed", r.t_or_seed},
                   {"value", format_double(r.value)},
                   {"bound", format_double(r.bound)},
                   {"margin", format_double(r.margin)}});
  }
  return arr.dump(2) + "\n";
}

void emit_rows(const GlobalOpts& g, const std::string& stem, const std::vector<CsvRow>& rows) {
  if (g.format == "json") {
    emit(g, stem + ".json", rows_to_json(rows));
  } else {
    emit(g, stem + ".csv", to_csv(rows));
  }
}

Measure load_measure(const std::string& path) { return measure_from_json(load_json_file(path)); }

StepFunction load_function(const std::string& path) {
  return step_function_from_json(load_json_file(path));
}

std::vector<Rational> parse_mesh(const std::string& mesh, const std::string& grid) {
  std::vector<Rational> points;
  if (!mesh.empty()) {
    size_t start = 0;
    while (start <= mesh.size()) {
      const size_t comma = mesh.find(',', start);
      const std::string tok = mesh.substr(start, comma == std::string::npos ? comma : comma - start);
      try {
        points.push_back(parse_rational(tok));
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--mesh: ") + e.what());
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return points;
  }
  // lo:hi:n — n+1 equally spaced points, all exact
  const size_t c1 = grid.find(':'), c2 = grid.rfind(':');
  if (c1 == std::string::npos || c2 == c1) throw InputError("--grid: expected lo:hi:n");
  try {
    const Rational lo = parse_rational(grid.substr(0, c1));
    const Rational hi = parse_rational(grid.substr(c1 + 1, c2 - c1 - 1));
    const long n = std::stol(grid.substr(c2 + 1));
    if (n < 1 || hi <= lo) throw InputError("--grid: need lo < hi and n >= 1");
    const Rational step = (hi - lo) / n;
    for (long i = 0; i <= n; ++i) points.push_back(lo + step * i);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--grid: ") + e.what());
  }
  return points;
}

EvalKind parse_kind(const std::string& kind) {
  if (kind == "two-sided") return EvalKind::two_sided;
  if (kind == "plus") return EvalKind::one_sided_plus;
  if (kind == "minus") return EvalKind::one_sided_minus;
  throw InputError("--kind: expected two-sided, plus or minus, got '" + kind + "'");
}

std::string endpoint_token(const Interval& I, bool low) {
  if (low ? I.lo_infinite() : I.hi_infinite()) return low ? "-inf" : "inf";
  return to_fraction_string(low ? I.lo() : I.hi());
}

int cmd_eval(const GlobalOpts& g, const std::string& measure_path, const std::string& fn_path,
             const std::string& mesh, const std::string& grid, const std::string& kind) {
  const Measure mu = load_measure(measure_path);
  const StepFunction f = load_function(fn_path);
  const auto result = evaluate_on_mesh(mu, f, parse_mesh(mesh, grid), parse_kind(kind));

  std::string csv = "x,value,witness_lo,witness_hi,witness_lo_closed,witness_hi_closed\n";
  for (size_t i = 0; i < result.mesh.size(); ++i) {
    const MaximalValue& v = result.values[i];
    csv += to_fraction_string(result.mesh[i]);
    csv += ',';
    csv += to_fraction_string(v.value);
    if (v.witness) {
      csv += ',' + endpoint_token(*v.witness, true) + ',' + endpoint_token(*v.witness, false);
      csv += v.witness->lo_closed() ? ",true" : ",false";
      csv += v.witness->hi_closed() ? ",true" : ",false";
    } else {
      csv += ",,,,";
    }
    csv += '\n';
  }
  emit(g, "eval.csv", csv);
  if (g.plot) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < result.mesh.size(); ++i) {
      xs.push_back(to_double(result.mesh[i]));
      ys.push_back(to_double(result.values[i].value));
    }
    emit(g, "eval.svg", line_plot_svg(xs, ys, "maximal function"));
  }
  return 0;
}

int cmd_norm(const GlobalOpts& g, const std::string& measure_path, const std::string& fn_path,
             double p) {
  const Measure mu = load_measure(measure_path);
  const StepFunction f = load_function(fn_path);
  const NormResult nf = lp_norm_step(mu, f, p);
  const NormResult nm = lp_norm_maximal(mu, f, p, g.tol);
  emit_rows(g, "norm",
            {{"norm-f", p, "-", nf.value, nf.error_bound, 0.0},
             {"norm-maximal", p, "-", nm.value, nm.error_bound, 0.0}});
  return 0;
}

int cmd_ratio(const GlobalOpts& g, const std::string& measure_path, const std::string& fn_path,
              double p) {
  const Measure mu = load_measure(measure_path);
  const StepFunction f = load_function(fn_path);
  const NormResult r = lp_ratio(mu, f, p, g.tol);
  emit_rows(g, "ratio", {{"ratio", p, "-", r.value, r.error_bound, r.value - lerner_constant(p)}});
  return 0;
}

int cmd_sunrise(const GlobalOpts& g, const std::string& measure_path, const std::string& fn_path,
                const std::string& t_text, double max_residual) {
  const Measure mu = load_measure(measure_path);
  const StepFunction f = load_function(fn_path);
  const Rational t = parse_rational(t_text);
  const SunriseReport report = sunrise_check(mu, f, t, g.tol);
  emit_rows(g, "sunrise-check",
            {{"sunrise", 0.0, to_fraction_string(t), report.residual, max_residual,
              max_residual - report.residual}});
  if (report.residual > max_residual) {
    std::cerr << "sunrise residual " << format_double(report.residual) << " exceeds "
              << format_double(max_residual) << "\n";
    return 1;
  }
  return 0;
}

int cmd_cover(const GlobalOpts& g, const std::string& measure_path, const std::string& fn_path,
              const std::string& t_text, long L, bool unimodal, bool verify) {
  const Measure mu = load_measure(measure_path);
  const StepFunction f = load_function(fn_path);
  const Rational t = parse_rational(t_text);
  const CoveringFamily family =
      unimodal ? unimodal_covering(mu, f, t) : covering_selection(mu, f, t);
  emit(g, "cover.json", covering_to_json(family).dump(2) + "\n");
  if (verify) {
    const CoveringCheck check = verify_covering(family, mu, f, t, L);
    if (!check.passed()) {
      for (const std::string& line : check.failures) std::cerr << line << "\n";
      return 1;
    }
  }
  return 0;
}

int cmd_search(const GlobalOpts& g, const std::string& measure_path, double p, int k, long budget,
               int restarts) {
  const Measure mu = measure_path.empty() ? Measure::lebesgue() : load_measure(measure_path);
  const SearchResult res = search_min_ratio(mu, p, k, budget, g.seed, restarts);
  emit_rows(g, "search-min-ratio",
            {{"search-min-ratio", p, std::to_string(res.seed), res.best_ratio, lerner_constant(p),
              res.best_ratio - lerner_constant(p)}});
  if (!g.output_dir.empty()) {
    emit(g, "search-best-f.json", step_function_to_json(res.best_f).dump(2) + "\n");
  }
  if (g.plot) {
    std::vector<double> xs, ys;
    for (const auto& [n, ratio] : res.history) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(ratio);
    }
    emit(g, "search-min-ratio.svg", line_plot_svg(xs, ys, "best ratio by evaluation"));
  }
  return 0;
}

int cmd_reproduce_discrete(const GlobalOpts& g, const std::string& t_text, double p, long N) {
  const Rational t = parse_rational(t_text);
  const ExamplePair ex = example_discrete_atoms(t, N);
  const double computed = lp_ratio(ex.mu, ex.f, p, g.tol).value;
  const double closed = std::pow(discrete_ratio_power_closed_form(to_double(t), p), 1.0 / p);
  emit_rows(g, "reproduce",
            {{"example-4.1", p, to_fraction_string(t), computed, closed,
              std::abs(computed - closed)}});
  return 0;
}

int cmd_reproduce_one_atom(const GlobalOpts& g, const std::string& t_text, double p) {
  const Rational t = parse_rational(t_text);
  const ExamplePair ex = example_one_atom(t);
  const NormResult nm = lp_norm_maximal(ex.mu, ex.f, p, g.tol);
  const double power = std::pow(nm.value, p);
  const double closed = one_atom_norm_power_closed_form(to_double(t), p);
  const double upper = one_atom_norm_power_upper_bound(to_double(t), p);
  emit_rows(g, "reproduce",
            {{"example-final", p, to_fraction_string(t), power, closed, std::abs(power - closed)},
             {"example-final-upper", p, to_fraction_string(t), power, upper, upper - power}});
  return 0;
}

int cmd_constants(const GlobalOpts& g, double p, long L) {
  const BoundConstants c = constants(p, L);
  emit_rows(g, "constants",
            {{"lerner", p, "-", c.lerner, c.lerner, 0.0},
             {"besicovitch", p, std::to_string(L), c.besicovitch, c.besicovitch, 0.0}});
  return 0;
}

int cmd_holder(const GlobalOpts& g, const std::string& measure_path,
               const std::vector<double>& p_list, const std::vector<double>& r_list, int k,
               long budget) {
  const Measure mu = measure_path.empty() ? Measure::lebesgue() : load_measure(measure_path);
  const auto rows_in = holder_experiment(mu, p_list, r_list, k, budget, g.seed);
  std::vector<CsvRow> rows;
  for (const HolderRow& h : rows_in) {
    // value: est_p^(p/r); bound: est_r. Report-only comparison, no assertion.
    rows.push_back({"holder", h.p, format_double(h.r), h.est_p_powered, h.est_r,
                    h.est_r - h.est_p_powered});
  }
  emit_rows(g, "holder", rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("MAXLAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(threads, &end, 10);
    if (end == threads || *end != '\0' || n < 1) {
      std::cerr << "MAXLAB_THREADS: expected a positive integer, got '" << threads << "'\n";
      return 2;
    }
    // Accepted cap; the current engine is single-threaded, so any valid value
    // selects the same serial execution.
  }

  CLI::App app{"Exact maximal-function laboratory"};
  app.require_subcommand(1);
  // let --seed/--tol/--output-dir/--format/--plot appear after the subcommand
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "random seed for stochastic subcommands");
  app.add_option("--tol", g.tol, "norm/quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", g.output_dir, "write artifacts here instead of stdout");
  app.add_option("--format", g.format, "tabular output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--plot", g.plot, "also emit an SVG plot where supported");

  std::string measure_path, fn_path, mesh, grid, kind = "two-sided", t_text = "1";
  double p = 2.0;
  long L = 1, N = 40, budget = 2000;
  int k = 6, restarts = 8;
  double max_residual = 1e-9;
  bool unimodal = false, verify = false;
  std::vector<double> p_list, r_list;

  auto* eval = app.add_subcommand("eval", "maximal function on a mesh, with exact witnesses");
  eval->add_option("--measure", measure_path)->required();
  eval->add_option("--function", fn_path)->required();
  eval->add_option("--mesh", mesh, "comma-separated rational points");
  eval->add_option("--grid", grid, "lo:hi:n equally spaced points");
  eval->add_option("--kind", kind, "two-sided, plus or minus");

  auto* norm = app.add_subcommand("norm", "Lp norms of f and of Mf");
  norm->add_option("--measure", measure_path)->required();
  norm->add_option("--function", fn_path)->required();
  norm->add_option("--p", p)->required();

  auto* ratio = app.add_subcommand("ratio", "||Mf||_p / ||f||_p");
  ratio->add_option("--measure", measure_path)->required();
  ratio->add_option("--function", fn_path)->required();
  ratio->add_option("--p", p)->required();

  auto* sunrise = app.add_subcommand("sunrise-check", "one-sided level-set identity residual");
  sunrise->add_option("--measure", measure_path)->required();
  sunrise->add_option("--function", fn_path)->required();
  sunrise->add_option("--t", t_text)->required();
  sunrise->add_option("--max-residual", max_residual);

  auto* cover = app.add_subcommand("cover", "disjoint balls of average t covering {f > t}");
  cover->add_option("--measure", measure_path)->required();
  cover->add_option("--function", fn_path)->required();
  cover->add_option("--t", t_text)->required();
  cover->add_option("--L", L, "overlap bound used by --verify");
  cover->add_flag("--unimodal", unimodal, "single-ball construction");
  cover->add_flag("--verify", verify, "check the family; exit 1 on failure");

  auto* search = app.add_subcommand("search-min-ratio", "simplex search for the minimal ratio");
  search->add_option("--measure", measure_path, "defaults to Lebesgue");
  search->add_option("--p", p)->required();
  search->add_option("--k", k, "number of pieces");
  search->add_option("--budget", budget, "objective evaluations");
  search->add_option("--restarts", restarts);

  auto* reproduce = app.add_subcommand("reproduce", "named constructions with closed forms");
  reproduce->require_subcommand(1);
  auto* rep_discrete = reproduce->add_subcommand("example-4.1", "discrete geometric atoms");
  rep_discrete->add_option("--t", t_text)->required();
  rep_discrete->add_option("--p", p)->required();
  rep_discrete->add_option("--N", N, "truncation length");
  auto* rep_final = reproduce->add_subcommand("example-final", "one atom plus right-tail density");
  rep_final->add_option("--t", t_text)->required();
  rep_final->add_option("--p", p)->required();

  auto* consts = app.add_subcommand("constants", "lower-bound constants");
  consts->add_option("--p", p)->required();
  consts->add_option("--L", L);

  auto* holder = app.add_subcommand("holder", "cross-exponent comparison of searched minima");
  holder->add_option("--measure", measure_path, "defaults to Lebesgue");
  holder->add_option("--p-list", p_list)->required()->delimiter(',');
  holder->add_option("--r-list", r_list)->required()->delimiter(',');
  holder->add_option("--k", k, "number of pieces");
  holder->add_option("--budget", budget, "objective evaluations per exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (eval->parsed()) {
      if (mesh.empty() == grid.empty()) throw InputError("eval: give exactly one of --mesh, --grid");
      return cmd_eval(g, measure_path, fn_path, mesh, grid, kind);
    }
    if (norm->parsed()) return cmd_norm(g, measure_path, fn_path, p);
    if (ratio->parsed()) return cmd_ratio(g, measure_path, fn_path, p);
    if (sunrise->parsed()) return cmd_sunrise(g, measure_path, fn_path, t_text, max_residual);
    if (cover->parsed()) return cmd_cover(g, measure_path, fn_path, t_text, L, unimodal, verify);
    if (search->parsed()) return cmd_search(g, measure_path, p, k, budget, restarts);
    if (rep_discrete->parsed()) return cmd_reproduce_discrete(g, t_text, p, N);
    if (rep_final->parsed()) return cmd_reproduce_one_atom(g, t_text, p);
    if (consts->parsed()) return cmd_constants(g, p, L);
    if (holder->parsed()) return cmd_holder(g, measure_path, p_list, r_list, k, budget);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionViolated& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedDimension& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
