#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <vector>

#include "maxlab/bounds_lab.hpp"
#include "maxlab/errors.hpp"
#include "maxlab/interval.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/measure.hpp"
#include "maxlab/rational.hpp"
#include "maxlab/step_function.hpp"
#include "support/generators.hpp"

using namespace maxlab;
using testgen::Rng;

namespace {

// c * f, exact
StepFunction scale_step(const StepFunction& f, const Rational& c) {
  std::vector<Rational> vals = f.values();
  for (auto& v : vals) v = Rational(v * c);
  std::vector<Rational> pvals = f.point_values();
  for (auto& v : pvals) v = Rational(v * c);
  return StepFunction(f.breakpoints(), std::move(vals), std::move(pvals));
}

// f + g on the merged breakpoint set, exact
StepFunction add_steps(const StepFunction& f, const StepFunction& g) {
  std::vector<Rational> breaks = f.breakpoints();
  breaks.insert(breaks.end(), g.breakpoints().begin(), g.breakpoints().end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<Rational> vals, pvals;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Rational mid = (breaks[i] + breaks[i + 1]) / 2;
    vals.push_back(Rational(f.value_at(mid) + g.value_at(mid)));
  }
  for (const auto& b : breaks) pvals.push_back(Rational(f.value_at(b) + g.value_at(b)));
  return StepFunction(std::move(breaks), std::move(vals), std::move(pvals));
}

// probe mesh: structure points, midpoints between them, and one point
// beyond each end
std::vector<Rational> probe_points(const Measure& mu, const StepFunction& f) {
  std::vector<Rational> cand = candidate_points(mu, f);
  std::vector<Rational> probes = cand;
  for (size_t i = 0; i + 1 < cand.size(); ++i) probes.push_back((cand[i] + cand[i + 1]) / 2);
  probes.push_back(cand.front() - make_rational(3, 2));
  probes.push_back(cand.back() + make_rational(3, 2));
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

// Every witness must contain the query point, have positive finite measure,
// and reproduce the reported value as its average.
void check_witness(const Measure& mu, const StepFunction& f, const Rational& x,
                   const MaximalValue& mv) {
  if (!mv.witness.has_value()) return;
  const Interval& w = *mv.witness;
  CHECK(w.contains(x));
  const ExtendedNonneg m = measure_of(mu, w);
  CHECK(!m.is_infinite());
  CHECK(!m.is_zero());
  CHECK(average(mu, f, w) == mv.value);
}

// Mirror of the grid oracle's admissible family, evaluated pair-by-pair with
// the exact set-function primitives instead of cumulative tables: endpoints
// on the uniform grid (plus x), closed low ends at g <= x, open low ends at
// g < x, closed high ends at g >= x, open high ends at g > x, maximum ratio
// over pairs of positive finite measure, zero if there are none.
Rational brute_grid_sup(const Measure& mu, const StepFunction& f, const Rational& x, long n) {
  const Rational glo = f.support_lo() - 1, ghi = f.support_hi() + 1;
  const Rational delta = (ghi - glo) / Rational(n - 1);
  std::vector<Rational> grid;
  for (long k = 0; k < n; ++k) grid.push_back(Rational(glo + delta * Rational(k)));
  grid.push_back(x);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  Rational best(0);
  for (const auto& l : grid) {
    if (l > x) continue;
    for (const auto& r : grid) {
      if (r < x || r < l) continue;
      for (int lc = 0; lc < 2; ++lc) {
        for (int hc = 0; hc < 2; ++hc) {
          if (!lc && l == x) continue;  // open low end at x would exclude x
          if (!hc && r == x) continue;
          if (l == r && !(lc && hc)) continue;
          const Interval I(l, r, lc != 0, hc != 0);
          const ExtendedNonneg m = measure_of(mu, I);
          if (m.is_zero() || m.is_infinite()) continue;
          const Rational v = integral_of(mu, f, I) / m.value();
          if (v > best) best = v;
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("atom-plus-density example: pointwise values and ray witnesses") {
  // weight-t atom at 1 over unit density on (0, inf); f = 1_(0,1). The
  // maximal function is 1 left of 1 and 1/(t+x) from 1 on, attained by the
  // ray (-inf, x] once x >= 1.
  const Rational t(3);
  const auto [mu, f] = example_one_atom(t);

  for (const Rational& x :
       {Rational(-2), Rational(0), make_rational(1, 4), make_rational(7, 8)}) {
    CHECK(maximal_at(mu, f, x).value == Rational(1));
  }
  for (long j = 0; j <= 50; ++j) {
    const Rational x = 1 + make_rational(j, 7);
    const MaximalValue mv = maximal_at(mu, f, x);
    CHECK(mv.value == Rational(1) / Rational(t + x));
    REQUIRE(mv.witness.has_value());
    CHECK(*mv.witness == Interval::ray_below(x, true));
    check_witness(mu, f, x, mv);
  }
  // inside the support the tie-break also lands on the left ray
  const MaximalValue inside = maximal_at(mu, f, make_rational(1, 2));
  REQUIRE(inside.witness.has_value());
  CHECK(*inside.witness == Interval::ray_below(make_rational(1, 2), true));
  check_witness(mu, f, make_rational(1, 2), inside);
}

TEST_CASE("geometric atom chain: maximal value at atom i is t^-i") {
  const Rational t(2);
  const long N = 8;
  const auto [mu, f] = example_discrete_atoms(t, N);
  for (long i = 0; i <= N; ++i) {
    const MaximalValue mv = maximal_at(mu, f, Rational(i));
    CHECK(mv.value == rational_pow(t, -i));
    check_witness(mu, f, Rational(i), mv);
  }
  // also with a non-integer base: exactness survives ugly rationals
  const Rational t2 = make_rational(7, 3);
  const auto [mu2, f2] = example_discrete_atoms(t2, 5);
  for (long i = 0; i <= 5; ++i) {
    CHECK(maximal_at(mu2, f2, Rational(i)).value == rational_pow(t2, -i));
  }
}

TEST_CASE("atom singleton witnesses") {
  const Measure mu({{Rational(0), Rational(1)}}, {}, {Rational(1)});  // delta_0 + Lebesgue
  const StepFunction f = StepFunction::point_indicator(Rational(0));
  const MaximalValue at0 = maximal_at(mu, f, Rational(0));
  CHECK(at0.value == Rational(1));
  REQUIRE(at0.witness.has_value());
  CHECK(at0.witness->is_singleton());
  CHECK(*at0.witness == Interval::singleton(Rational(0)));

  // away from the atom the best interval stretches back to swallow it
  const MaximalValue at_half = maximal_at(mu, f, make_rational(1, 2));
  CHECK(at_half.value == make_rational(2, 3));
  REQUIRE(at_half.witness.has_value());
  CHECK(*at_half.witness == Interval::closed(Rational(0), make_rational(1, 2)));
  check_witness(mu, f, make_rational(1, 2), at_half);
}

TEST_CASE("domination at atoms and inside positive-density regions") {
  Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    const Measure mu = testgen::random_mixed_measure(rng);
    const StepFunction f = testgen::random_unit_step(rng);
    for (const auto& a : mu.atoms()) {
      const MaximalValue mv = maximal_at(mu, f, a.position);
      CHECK(mv.value >= f.value_at(a.position));
      check_witness(mu, f, a.position, mv);
    }
    const std::vector<Rational> cand = candidate_points(mu, f);
    for (size_t i = 0; i + 1 < cand.size(); ++i) {
      const Rational mid = (cand[i] + cand[i + 1]) / 2;
      if (mu.density_at(mid) == 0) continue;
      CHECK(maximal_at(mu, f, mid).value >= f.value_at(mid));
    }
  }
}

TEST_CASE("exact homogeneity, sublinearity and order preservation") {
  Rng rng(505);
  const Rational c = make_rational(7, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Measure mu = testgen::random_mixed_measure(rng);
    const StepFunction f = testgen::random_unit_step(rng);
    const StepFunction g = testgen::random_unit_step(rng);
    const StepFunction cf = scale_step(f, c);
    const StepFunction fg = add_steps(f, g);
    for (const Rational& x : probe_points(mu, fg)) {
      const Rational Mf = maximal_at(mu, f, x).value;
      const Rational Mg = maximal_at(mu, g, x).value;
      CHECK(maximal_at(mu, cf, x).value == Rational(c * Mf));
      CHECK(maximal_at(mu, fg, x).value <= Rational(Mf + Mg));
      CHECK(maximal_at(mu, fg, x).value >= Mf);  // fg >= f pointwise
    }
  }
}

TEST_CASE("two-sided dominates both one-sided variants; plus witnesses start at x") {
  Rng rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    const Measure mu = testgen::random_mixed_measure(rng);
    const StepFunction f = testgen::random_unit_step(rng);
    for (const Rational& x : probe_points(mu, f)) {
      const MaximalValue two = maximal_at(mu, f, x);
      const MaximalValue plus = one_sided_plus_at(mu, f, x);
      const MaximalValue minus = one_sided_minus_at(mu, f, x);
      CHECK(two.value >= plus.value);
      CHECK(two.value >= minus.value);
      check_witness(mu, f, x, two);
      check_witness(mu, f, x, plus);
      check_witness(mu, f, x, minus);
      if (plus.witness.has_value() && !plus.witness->lo_infinite()) {
        CHECK(plus.witness->lo() == x);
        CHECK(plus.witness->lo_closed());
      }
      if (minus.witness.has_value() && !minus.witness->hi_infinite()) {
        CHECK(minus.witness->hi() == x);
        CHECK(minus.witness->hi_closed());
      }
    }
  }
}

TEST_CASE("one-sided plus of a half-open indicator over Lebesgue") {
  const Measure mu = Measure::lebesgue();
  const StepFunction f({Rational(0), Rational(1)}, {Rational(1)},
                       std::vector<Rational>{Rational(1), Rational(0)});  // 1_[0,1)
  CHECK(one_sided_plus_at(mu, f, Rational(-3)).value == make_rational(1, 4));
  CHECK(one_sided_plus_at(mu, f, Rational(-1)).value == make_rational(1, 2));
  CHECK(one_sided_plus_at(mu, f, make_rational(-1, 2)).value == make_rational(2, 3));
  CHECK(one_sided_plus_at(mu, f, Rational(0)).value == Rational(1));
  CHECK(one_sided_plus_at(mu, f, make_rational(1, 2)).value == Rational(1));
  CHECK(one_sided_plus_at(mu, f, Rational(1)).value == Rational(0));
  CHECK(one_sided_plus_at(mu, f, Rational(2)).value == Rational(0));
}

TEST_CASE("minus at x equals plus of the reflection at -x") {
  Rng rng(707);
  for (int trial = 0; trial < 15; ++trial) {
    const Measure mu = testgen::random_mixed_measure(rng);
    const StepFunction f = testgen::random_unit_step(rng);
    const Measure mur = reflected(mu);
    const StepFunction fr = reflected(f);
    for (const Rational& x : probe_points(mu, f)) {
      CHECK(one_sided_minus_at(mu, f, x).value ==
            one_sided_plus_at(mur, fr, Rational(-x)).value);
      CHECK(maximal_at(mu, f, x).value == maximal_at(mur, fr, Rational(-x)).value);
    }
  }
}

TEST_CASE("the three ball-family routes agree everywhere") {
  Rng rng(808);
  for (int trial = 0; trial < 25; ++trial) {
    const Measure mu = testgen::random_mixed_measure(rng);
    const StepFunction f = testgen::random_unit_step(rng);
    for (const Rational& x : probe_points(mu, f)) {
      const Rational full = maximal_at(mu, f, x).value;
      CHECK(maximal_sup_at(mu, f, x, BallFamily::all) == full);
      CHECK(maximal_sup_at(mu, f, x, BallFamily::open_only) == full);
      CHECK(maximal_sup_at(mu, f, x, BallFamily::closed_only) == full);
    }
  }
}

TEST_CASE("grid oracle matches a pairwise exact mirror and never exceeds the engine") {
  Rng rng(909);
  for (int trial = 0; trial < 10; ++trial) {
    const Measure mu = testgen::random_mixed_measure(rng);
    const StepFunction f = testgen::random_unit_step(rng);
    const std::vector<Rational> probes{f.support_lo() - 1 + make_rational(1, 3),
                                       (f.support_lo() + f.support_hi()) / 2,
                                       f.support_hi() + make_rational(1, 5)};
    for (const Rational& x : probes) {
      const Rational exact = maximal_at(mu, f, x).value;
      for (long n : {7L, 13L}) {
        const Rational g = grid_oracle_at(mu, f, x, n);
        CHECK(g == brute_grid_sup(mu, f, x, n));
        CHECK(g <= exact);
      }
      CHECK(grid_oracle_at(mu, f, x, 200) <= exact);
    }
  }
}

TEST_CASE("grid oracle is sharp once the grid hits the witness endpoints") {
  const Measure mu = Measure::lebesgue();
  const StepFunction f = StepFunction::indicator(Rational(0), Rational(1));
  // grid spans [-1, 2]; n = 10 puts both 0 and 1/3 on the lattice
  CHECK(grid_oracle_at(mu, f, make_rational(1, 3), 10) == Rational(1));
  CHECK(grid_oracle_at(mu, f, make_rational(1, 3), 4) <= Rational(1));
  // far from the support the best grid interval still reaches back
  const Rational exact = maximal_at(mu, f, Rational(5)).value;  // 1/5
  CHECK(exact == make_rational(1, 5));
  CHECK(grid_oracle_at(mu, f, Rational(5), 7) == exact);  // 0 is a grid point
  CHECK_THROWS_AS(grid_oracle_at(mu, f, Rational(0), 1), std::invalid_argument);
}

TEST_CASE("mesh evaluation sorts, deduplicates and plumbs the kind") {
  const Measure mu = Measure::lebesgue();
  const StepFunction f = StepFunction::indicator(Rational(0), Rational(1));
  std::vector<Rational> mesh{Rational(2), Rational(0), make_rational(1, 2), Rational(2),
                             Rational(-1)};
  const EvaluatedMaximal em = evaluate_on_mesh(mu, f, mesh, EvalKind::two_sided);
  REQUIRE(em.mesh.size() == 4);
  CHECK(em.mesh.front() == Rational(-1));
  CHECK(em.mesh.back() == Rational(2));
  REQUIRE(em.values.size() == em.mesh.size());
  for (size_t i = 0; i < em.mesh.size(); ++i) {
    CHECK(em.values[i].value == maximal_at(mu, f, em.mesh[i]).value);
  }
  const EvaluatedMaximal ep = evaluate_on_mesh(mu, f, mesh, EvalKind::one_sided_plus);
  CHECK(ep.values.front().value == one_sided_plus_at(mu, f, Rational(-1)).value);
}

TEST_CASE("superlevel of the plain function reproduces the exact flag structure") {
  const StepFunction spike({Rational(0), Rational(1), Rational(2)}, {Rational(1), Rational(1)},
                           std::vector<Rational>{Rational(0), Rational(3), Rational(0)});
  const Measure mu = Measure::lebesgue();
  const Interval window = Interval::open(Rational(-10), Rational(10));
  const auto half = superlevel_set(mu, spike, make_rational(1, 2), LevelKind::function_itself,
                                   window);
  REQUIRE(half.size() == 1);
  CHECK(half[0] == Interval::open(Rational(0), Rational(2)));
  const auto two = superlevel_set(mu, spike, Rational(2), LevelKind::function_itself, window);
  REQUIRE(two.size() == 1);
  CHECK(two[0] == Interval::singleton(Rational(1)));
  CHECK(spike.strict_superlevel(make_rational(1, 2)) == half);
}

TEST_CASE("maximal superlevel endpoints snap to exact roots") {
  const Measure mu = Measure::lebesgue();
  const StepFunction f = StepFunction::indicator(Rational(0), Rational(1));
  // M f(x) = 1/(1-x) left of 0 and 1/x right of 1, so {M f > 1/3} = (-2, 3)
  for (const Interval& window :
       {Interval::open(Rational(-10), Rational(10)), Interval::whole_line()}) {
    const auto set = superlevel_set(mu, f, make_rational(1, 3), LevelKind::two_sided, window);
    REQUIRE(set.size() == 1);
    CHECK(!set[0].lo_closed());
    CHECK(!set[0].hi_closed());
    CHECK(set[0].lo() == Rational(-2));
    CHECK(set[0].hi() == Rational(3));
  }
  // above the sup the set is empty
  CHECK(superlevel_set(mu, f, Rational(1), LevelKind::two_sided,
                       Interval::open(Rational(-5), Rational(5)))
            .empty());
}

TEST_CASE("two bumps merge into one superlevel component below the valley value") {
  const Measure mu = Measure::lebesgue();
  StepFunction f = add_steps(StepFunction::indicator(Rational(0), Rational(1)),
                             StepFunction::indicator(Rational(2), Rational(3)));
  // between the bumps M f >= 2/3 > 2/5, so the component bridges the gap:
  // boundaries where 2/(3-x) and 2/x cross 2/5
  const auto set = superlevel_set(mu, f, make_rational(2, 5), LevelKind::two_sided,
                                  Interval::whole_line());
  REQUIRE(set.size() == 1);
  CHECK(set[0].lo() == Rational(-2));
  CHECK(set[0].hi() == Rational(5));
}

TEST_CASE("window edges inside the superlevel set are refused") {
  const Measure mu = Measure::lebesgue();
  const StepFunction f = StepFunction::indicator(Rational(0), Rational(1));
  // M f(2) = 1/2 > 1/3: the set continues past the right edge
  CHECK_THROWS_AS(superlevel_set(mu, f, make_rational(1, 3), LevelKind::two_sided,
                                 Interval::open(Rational(0), Rational(2))),
                  WindowTooSmall);
}

TEST_CASE("an unbounded window over a finite measure cannot be clipped") {
  // mass 1 in total: M f = 1 everywhere, so {M f > 1/2} is the whole line
  // and no clip point exists
  const Measure mu({}, {Rational(0), Rational(1)}, {Rational(0), Rational(1), Rational(0)});
  const StepFunction f = StepFunction::indicator(Rational(0), Rational(1));
  CHECK(maximal_at(mu, f, Rational(100)).value == Rational(1));
  CHECK(maximal_at(mu, f, Rational(-50)).value == Rational(1));
  CHECK_THROWS_AS(superlevel_set(mu, f, make_rational(1, 2), LevelKind::two_sided,
                                 Interval::whole_line()),
                  WindowTooSmall);
}

TEST_CASE("binary64 evaluator tracks the exact engine") {
  Rng rng(111);
  for (int trial = 0; trial < 10; ++trial) {
    const Measure mu = testgen::random_mixed_measure(rng);
    const StepFunction f = testgen::random_unit_step(rng);
    const MaximalEvaluator fast(mu, f);
    for (const Rational& x : probe_points(mu, f)) {
      const double exact = to_double(maximal_at(mu, f, x).value);
      const double approx = fast(to_double(x));
      CHECK(std::fabs(approx - exact) <= 1e-11 * (1.0 + std::fabs(exact)));
    }
  }
}
