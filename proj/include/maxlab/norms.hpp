#pragma once

#include <functional>
#include <vector>

#include "maxlab/interval.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/measure.hpp"
#include "maxlab/step_function.hpp"

namespace maxlab {

// Outcome of an L^p norm computation. `value` is the norm itself; the bound
// covers quadrature error, tail truncation, and floating-point powering, and
// is always reported rather than folded silently into the value.
struct NormResult {
  double value = 0.0;
  double error_bound = 0.0;
  long pieces_used = 0;
};

// A nonnegative function that can be integrated against a measure without
// being a step function (the maximal function of one, typically).
//
//   fast          binary64 evaluation, used at quadrature nodes
//   exact         exact evaluation, used at atom positions
//   breakpoints   points where the function may lose smoothness; panels are
//                 split there before any refinement
//   tail_constant certifies fast(x) <= tail_constant / mu((B, x)) to the
//                 right of the tail window [A, B], and mirrored on the left;
//                 zero means the function vanishes outside the window
struct Evaluable {
  std::function<double(double)> fast;
  std::function<Rational(const Rational&)> exact;
  std::vector<Rational> breakpoints;
  Rational tail_constant = Rational(0);
};

// || f ||_{L^p(mu)} for a step function: exact piecewise sums, binary64 only
// for the powers. Requires p > 1.
NormResult lp_norm_step(const Measure& mu, const StepFunction& f, double p);

// || g ||_{L^p(mu)} by adaptive panel quadrature over the density regions
// plus an exact sum over the atoms. The integration domain is truncated where
// the tail certificate bounds the remainder below tol/2; throws
// TailNotCertified when no such truncation point exists.
NormResult lp_norm_evaluable(const Evaluable& g, const Measure& mu, double p,
                             const Interval& tail_window, double tol);

// The two-sided maximal function of f packaged for lp_norm_evaluable.
Evaluable maximal_evaluable(const Measure& mu, const StepFunction& f);

// || M f ||_{L^p(mu)} and the quotient || M f ||_p / || f ||_p.
NormResult lp_norm_maximal(const Measure& mu, const StepFunction& f, double p, double tol);
NormResult lp_ratio(const Measure& mu, const StepFunction& f, double p, double tol);

}  // namespace maxlab
