#pragma once

#include <optional>
#include <vector>

#include "maxlab/interval.hpp"
#include "maxlab/measure.hpp"
#include "maxlab/rational.hpp"
#include "maxlab/step_function.hpp"

namespace maxlab {

enum class EvalKind { two_sided, one_sided_plus, one_sided_minus };

// Which interval family the supremum ranges over. The three suprema coincide
// (every endpoint-flag combination is a monotone limit of open intervals and
// of closed ones, and interval averages pass to such limits), but each mode
// is computed through its own arithmetic route, so comparing them exercises
// the endpoint-flag handling rather than restating it.
enum class BallFamily { all, open_only, closed_only };

struct MaximalValue {
  Rational value;
  // The attaining interval (smallest in witness_before order among ties).
  // Empty exactly when no interval of positive finite measure attains the
  // supremum: either no such interval exists at all, or only
  // infinite-measure intervals (average 0 by convention) are available.
  std::optional<Interval> witness;
};

// Uncentered maximal value at x: sup of averages over all intervals
// containing x, exactly. Enumeration over candidate points is exhaustive:
// within a region where density and f are both constant, mu(I) and
// int_I f dmu are affine in a moving endpoint, so the average is a monotone
// linear-fractional function of it and the supremum over the region sits at
// its ends. Hence only candidate points, x itself, the infinite rays and the
// endpoint-flag limits can carry the supremum, and all of those are
// evaluated exactly.
MaximalValue maximal_at(const Measure& mu, const StepFunction& f, const Rational& x);

// One-sided variants: intervals [x, b), b > x (plus) and (a, x], a < x
// (minus), together with their limit values (the closures [x, b], [x, +inf)
// and the atom singleton at x).
MaximalValue one_sided_plus_at(const Measure& mu, const StepFunction& f, const Rational& x);
MaximalValue one_sided_minus_at(const Measure& mu, const StepFunction& f, const Rational& x);

MaximalValue eval_at(const Measure& mu, const StepFunction& f, const Rational& x, EvalKind kind);

// Two-sided supremum restricted to a ball family (value only; see BallFamily).
Rational maximal_sup_at(const Measure& mu, const StepFunction& f, const Rational& x,
                        BallFamily family);

// Lower-bound oracle: the same supremum restricted to intervals whose finite
// endpoints lie on the uniform n-point grid spanning
// [f.support_lo() - 1, f.support_hi() + 1] (x itself is always admitted as
// an endpoint). Always <= maximal_at(mu, f, x).value and converges to it as
// n grows. Exact: internally a Dinkelbach iteration on the fractional
// objective with a double-precision prefilter and exact certification.
Rational grid_oracle_at(const Measure& mu, const StepFunction& f, const Rational& x, long n);

struct EvaluatedMaximal {
  EvalKind kind;
  std::vector<Rational> mesh;        // sorted, deduplicated
  std::vector<MaximalValue> values;  // parallel to mesh
};

EvaluatedMaximal evaluate_on_mesh(const Measure& mu, const StepFunction& f,
                                  std::vector<Rational> mesh, EvalKind kind);

enum class LevelKind { function_itself, two_sided, one_sided_plus, one_sided_minus };

// {g > t} within the window, where g is f itself or a maximal function.
// For function_itself the result is exact (flags included). For maximal
// kinds the result is a list of open intervals whose endpoints are located
// by bisection to within tol, with an exact snap whenever the level-crossing
// equation can be solved in closed form inside the bracket; interior points
// are classified by exact evaluation on a refined candidate mesh.
//
// Throws WindowTooSmall when the value at a window edge exceeds t (the set
// may continue past the window) and when an unbounded window side cannot be
// clipped: outside the candidate hull the maximal value is monotone toward
// the support, so a clip point w is certified by evaluating g(w) <= t; w is
// found from the tail bound  g(x) <= ||f||_1 / mu([x, support)),  which
// fails only when the tail measure is too small.
std::vector<Interval> superlevel_set(const Measure& mu, const StepFunction& f, const Rational& t,
                                     LevelKind kind, const Interval& window, double tol = 1e-12);

// Binary64 two-sided evaluator over precomputed cumulative tables, for
// quadrature nodes (norms need thousands of evaluations; the exact engine is
// for pointwise queries, witnesses and roots). Agreement with the exact
// engine is property-tested at ~1e-12 relative.
class MaximalEvaluator {
 public:
  MaximalEvaluator(const Measure& mu, const StepFunction& f);

  double operator()(double x) const;

 private:
  std::vector<double> pos_;        // candidate points
  std::vector<double> mex_, mi_;   // mu((p0, p)), mu((p0, p])
  std::vector<double> fex_, fi_;   // same for the f-integral
  std::vector<double> rho_, fval_; // density / f value on (p[i-1], p[i]) and the tails
  bool left_ray_ok_ = false, right_ray_ok_ = false;  // zero tail density
};

}  // namespace maxlab
