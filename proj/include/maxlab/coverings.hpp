#pragma once

#include <string>
#include <vector>

#include "maxlab/interval.hpp"
#include "maxlab/measure.hpp"
#include "maxlab/rational.hpp"
#include "maxlab/step_function.hpp"

namespace maxlab {

// Both sides of the level-set identity
//   t * mu({M+ f > t}) = integral of f over {M+ f > t}
// for the rightward one-sided maximal operator over an atomless measure with
// an infinite left tail. The set is located numerically; lhs and rhs are then
// exact integrals over the located set, so the residual reflects both the
// identity and the endpoint localization error.
struct SunriseReport {
  Rational t;
  std::vector<Interval> level_set;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

SunriseReport sunrise_check(const Measure& mu, const StepFunction& f, const Rational& t,
                            double tol = 1e-12);

enum class SolveDirection { left, right };

// The exact endpoint s with average over (s, anchor) — resp. (anchor, s) —
// equal to t, found by walking constancy regions away from the anchor and
// solving the affine equation t*mu - integral = 0 in the first region where
// it crosses. On a region where the average is identically t the far
// endpoint is returned. Throws NoSolution when no crossing exists.
Rational solve_average_equation(const Measure& mu, const StepFunction& f, const Rational& anchor,
                                const Rational& t, SolveDirection direction);

struct CoveringBall {
  Interval ball;
  Rational average;
  std::string side;  // construction pass: "left", "right", "anchored", "unimodal"
};

struct CoveringFamily {
  Rational t;
  std::vector<CoveringBall> balls;
};

// Disjoint balls of exact average t whose union contains {f > t} within the
// support of mu, up to finitely many mass-free points. Requires both tails of
// mu infinite and an atom pattern of at most two atoms with no mass strictly
// between them; 0 < t < max f.
CoveringFamily covering_selection(const Measure& mu, const StepFunction& f, const Rational& t);

// Single-ball covering for a unimodal step function over an atomless measure
// of infinite total mass: one ball containing the (single) superlevel
// component with average exactly t; empty when the component carries no mass
// or the level is out of range.
CoveringFamily unimodal_covering(const Measure& mu, const StepFunction& f, const Rational& t);

// All checks are exact rational arithmetic; failures are collected, never
// thrown. Coverage tolerates leftovers that are finitely many points carrying
// no mass; overlap is certified at ball endpoints and midpoints of the
// arrangement, which is exhaustive because the overlap count is piecewise
// constant there.
struct CoveringCheck {
  bool averages_exact = true;
  bool covers_superlevel = true;
  bool overlap_within = true;
  std::vector<std::string> failures;
  bool passed() const { return averages_exact && covers_superlevel && overlap_within; }
};

CoveringCheck verify_covering(const CoveringFamily& family, const Measure& mu,
                              const StepFunction& f, const Rational& t, long L);

// Number of balls containing x, endpoint flags respected.
long overlap_count(const CoveringFamily& family, const Rational& x);

}  // namespace maxlab
