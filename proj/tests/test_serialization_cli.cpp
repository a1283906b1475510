#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "maxlab/coverings.hpp"
#include "maxlab/errors.hpp"
#include "maxlab/measure.hpp"
#include "maxlab/rational.hpp"
#include "maxlab/serialization.hpp"
#include "maxlab/step_function.hpp"
#include "support/generators.hpp"

using namespace maxlab;
using testgen::Rng;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "maxlab_cli_tests";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int status = -1;
  std::string out, err;
};

// Run the CLI under test with the given arguments (optionally with an
// environment prefix such as "MAXLAB_THREADS=2"), capturing both streams.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const char* bin = std::getenv("MAXLAB_CLI");
  REQUIRE(bin != nullptr);
  static int counter = 0;
  const fs::path out = scratch() / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = scratch() / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = env_prefix.empty() ? "" : env_prefix + " ";
  cmd += std::string("\"") + bin + "\" " + args + " >" + out.string() + " 2>" + err.string();
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

fs::path lebesgue_json() {
  const fs::path p = scratch() / "lebesgue.json";
  write_file(p, R"({"density": {"breakpoints": [], "values": ["1"]}})");
  return p;
}

fs::path box_json() {
  const fs::path p = scratch() / "box.json";
  write_file(p, R"({"breakpoints": ["0", "1"], "values": ["1"]})");
  return p;
}

}  // namespace

TEST_CASE("measures and step functions survive a JSON round trip exactly") {
  Rng rng(181);
  for (int trial = 0; trial < 20; ++trial) {
    const Measure mu = testgen::random_mixed_measure(rng);
    CHECK(measure_from_json(measure_to_json(mu)) == mu);
    const StepFunction f = testgen::random_unit_step(rng);
    CHECK(step_function_from_json(step_function_to_json(f)) == f);
  }

  // exact fractions ride through as strings
  const Measure third({{make_rational(1, 3), make_rational(2, 7)}}, {}, {Rational(1)});
  const nlohmann::json j = measure_to_json(third);
  CHECK(j["atoms"][0]["x"] == "1/3");
  CHECK(j["atoms"][0]["w"] == "2/7");
}

TEST_CASE("plain JSON numbers are converted through their decimal spelling") {
  const auto j = nlohmann::json::parse(R"({"breakpoints": [0.25, 1], "values": [0.1]})");
  const StepFunction f = step_function_from_json(j);
  CHECK(f.breakpoints()[0] == make_rational(1, 4));
  // 0.1 means the decimal 1/10, not the nearest binary64
  CHECK(f.values()[0] == make_rational(1, 10));
}

TEST_CASE("malformed input names the offending field") {
  const auto check_mentions = [](const auto& fn, const std::vector<std::string>& needles) {
    try {
      fn();
      FAIL_CHECK("expected InputError mentioning " << needles.front());
    } catch (const InputError& e) {
      const std::string what = e.what();
      for (const auto& needle : needles) {
        CHECK(what.find(needle) != std::string::npos);
      }
    }
  };
  check_mentions([] { measure_from_json(nlohmann::json::object()); }, {"density"});
  check_mentions(
      [] {
        measure_from_json(nlohmann::json::parse(
            R"({"density": {"breakpoints": [], "values": ["1"]}, "atoms": [{"x": "0"}]})"));
      },
      {"atoms[0]", "'w'"});
  check_mentions(
      [] { step_function_from_json(nlohmann::json::parse(R"({"breakpoints": "zap"})")); },
      {"breakpoints"});
  check_mentions(
      [] {
        covering_from_json(nlohmann::json::parse(
            R"({"t": "1/2", "balls": [{"lo": "0", "hi": "1", "lo_closed": "yes",)"
            R"( "hi_closed": false, "average": "1/2"}]})"));
      },
      {"balls[0].lo_closed"});
  // structurally fine but mathematically invalid intervals also fail as input
  CHECK_THROWS_AS(covering_from_json(nlohmann::json::parse(
                      R"({"t": "1/2", "balls": [{"lo": "2", "hi": "1", "lo_closed": true,)"
                      R"( "hi_closed": true, "average": "1/2"}]})")),
                  InputError);
}

TEST_CASE("coverings round-trip, including infinite endpoints") {
  CoveringFamily fam{make_rational(1, 2), {}};
  fam.balls.push_back({Interval::ray_below(Rational(2), true), make_rational(1, 2), "left"});
  fam.balls.push_back({Interval::open(Rational(3), Rational(7)), make_rational(1, 2), "right"});
  const nlohmann::json j = covering_to_json(fam);
  CHECK(j["balls"][0]["lo"] == "-inf");
  CHECK(j["balls"][0]["hi"] == "2");
  CHECK(covering_to_json(covering_from_json(j)) == j);

  const CoveringFamily back = covering_from_json(j);
  REQUIRE(back.balls.size() == 2);
  CHECK(back.balls[0].ball == Interval::ray_below(Rational(2), true));
  CHECK(back.t == make_rational(1, 2));
}

TEST_CASE("file loading failures are input errors") {
  CHECK_THROWS_AS(load_json_file((scratch() / "no_such_file.json").string()), InputError);
  const fs::path broken = scratch() / "broken.json";
  write_file(broken, "{oops");
  CHECK_THROWS_AS(load_json_file(broken.string()), InputError);
}

TEST_CASE("CSV layout is pinned byte for byte") {
  CHECK(to_csv({{"demo", 2.0, "3", 1.5, 2.25, 0.75}}) ==
        "experiment,p,t_or_seed,value,bound,margin\n"
        "demo,2,3,1.5,2.25,0.75\n");
  CHECK(to_csv({}) == "experiment,p,t_or_seed,value,bound,margin\n");
}

TEST_CASE("SVG plots are deterministic and degrade gracefully") {
  const std::string s = line_plot_svg({0.0, 1.0, 2.0}, {3.0, 5.0, 4.0}, "demo");
  CHECK(s == line_plot_svg({0.0, 1.0, 2.0}, {3.0, 5.0, 4.0}, "demo"));
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("polyline") != std::string::npos);
  CHECK(s.find("demo") != std::string::npos);
  const std::string empty = line_plot_svg({}, {}, "empty");
  CHECK(empty.find("<svg") != std::string::npos);
  CHECK(empty.find("polyline") == std::string::npos);
  CHECK_THROWS_AS(line_plot_svg({1.0}, {}, "bad"), PreconditionViolated);
}

TEST_CASE("cli: constants output is byte-stable") {
  const CliResult r = run_cli("constants --p 2 --L 5");
  CHECK(r.status == 0);
  CHECK(r.out ==
        "experiment,p,t_or_seed,value,bound,margin\n"
        "lerner,2,-,1.4142135623731,1.4142135623731,0\n"
        "besicovitch,2,5,1.09544511501033,1.09544511501033,0\n");
  CHECK(run_cli("constants --p 2 --L 5").out == r.out);
}

TEST_CASE("cli: evaluation emits exact fractions and witnesses") {
  const std::string args = "eval --measure " + lebesgue_json().string() + " --function " +
                           box_json().string() + " --mesh 1/2,3 --kind two-sided";
  const CliResult r = run_cli(args);
  CHECK(r.status == 0);
  CHECK(r.out.find("x,value,witness_lo,witness_hi,witness_lo_closed,witness_hi_closed\n") !=
        std::string::npos);
  CHECK(r.out.find("1/2,1,0,1/2,false,true\n") != std::string::npos);
  CHECK(r.out.find("3,1/3,0,3,false,true\n") != std::string::npos);
}

TEST_CASE("cli: search runs are reproducible byte for byte") {
  const std::string args = "--seed 9 search-min-ratio --p 2 --k 3 --budget 200 --restarts 2";
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("cli: bad inputs exit 2 with a named complaint") {
  const fs::path bad = scratch() / "bad_measure.json";
  write_file(bad, R"({"densit": 3})");
  const CliResult r =
      run_cli("eval --measure " + bad.string() + " --function " + box_json().string() +
              " --mesh 0 --kind two-sided");
  CHECK(r.status == 2);
  CHECK(r.err.find("input error") != std::string::npos);
  CHECK(r.err.find("density") != std::string::npos);

  CHECK(run_cli("eval --no-such-flag").status == 2);
  CHECK(run_cli("--help").status == 0);
  CHECK(run_cli("constants --p 2", "MAXLAB_THREADS=frog").status == 2);
  CHECK(run_cli("constants --p 2", "MAXLAB_THREADS=2").status == 0);
}

TEST_CASE("cli: sunrise residual gate") {
  const std::string base = "sunrise-check --measure " + lebesgue_json().string() +
                           " --function " + box_json().string() + " --t 1/3";
  const CliResult ok = run_cli(base);
  CHECK(ok.status == 0);
  const CliResult tight = run_cli(base + " --max-residual 1e-15");
  CHECK(tight.status == 1);
  CHECK(tight.err.find("residual") != std::string::npos);
}

TEST_CASE("cli: cover writes a verifiable family to the output directory") {
  const fs::path dir = scratch() / "cover_out";
  fs::remove_all(dir);
  const CliResult r = run_cli("--output-dir " + dir.string() + " cover --measure " +
                              lebesgue_json().string() + " --function " + box_json().string() +
                              " --t 1/2 --verify");
  CHECK(r.status == 0);
  const CoveringFamily fam = covering_from_json(load_json_file((dir / "cover.json").string()));
  REQUIRE(fam.balls.size() == 1);
  CHECK(fam.balls[0].ball == Interval::open(Rational(-1), Rational(1)));
  CHECK(fam.t == make_rational(1, 2));
}

TEST_CASE("cli: json format and plots") {
  const CliResult r = run_cli("constants --p 2 --L 1 --format json");
  CHECK(r.status == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["experiment"] == "lerner");
  CHECK(j[0]["value"] == j[1]["value"]);  // L = 1: the two constants coincide

  const fs::path dir = scratch() / "plot_out";
  fs::remove_all(dir);
  const CliResult e = run_cli("--output-dir " + dir.string() + " eval --measure " +
                              lebesgue_json().string() + " --function " + box_json().string() +
                              " --grid -2:3:40 --kind two-sided --plot");
  CHECK(e.status == 0);
  const std::string svg = read_file(dir / "eval.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}
