#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "maxlab/measure.hpp"
#include "maxlab/step_function.hpp"

namespace maxlab {

// The two lower-bound constants for || M f ||_p / || f ||_p:
//   lerner       (p/(p-1))^(1/p)        infinite continuous measures on R
//   besicovitch  (1+1/((p-1)L))^(1/p)   measures with overlap constant L
// They coincide at L = 1 since 1 + 1/(p-1) = p/(p-1).
struct BoundConstants {
  double p = 0.0;
  long L = 0;
  double lerner = 0.0;
  double besicovitch = 0.0;
};

double lerner_constant(double p);
double besicovitch_constant(double p, long L);
BoundConstants constants(double p, long L);

// Strict Hadwiger number: pairwise disjoint unit-ball translates touching the
// unit ball. Known values: 2 on the line, 5 in the Euclidean plane; anything
// else throws UnsupportedDimension.
int hadwiger_strict(int d);

struct ExamplePair {
  Measure mu;
  StepFunction f;
};

// Purely atomic measure with weight 1/(t-1) at 0 and t^(i-1) at i = 1..N,
// paired with the point indicator at 0. The maximal function at i is t^(-i),
// so the ratio collapses toward 1 as t grows. (The construction lives on a
// line; in higher dimensions balls are convex, so restricting to the line
// loses nothing.)
ExamplePair example_discrete_atoms(const Rational& t, long N);

// ratio^p closed forms for that example: the N -> infinity limit, the
// truncated sum actually represented, and the geometric bound on what the
// truncation discards.
double discrete_ratio_power_closed_form(double t, double p);
double discrete_ratio_power_truncated(double t, double p, long N);
double discrete_truncation_tail_bound(double t, double p, long N);

// Atom of weight t at 1 plus unit density on (0, infinity), paired with the
// open-interval indicator of (0, 1): M f is 1 on (0,1) and 1/(t+x) at x >= 1.
ExamplePair example_one_atom(const Rational& t);

double one_atom_norm_power_closed_form(double t, double p);  // || M f ||_p^p
double one_atom_norm_power_upper_bound(double t, double p);

struct SearchResult {
  StepFunction best_f = StepFunction::point_indicator(Rational(0));
  double best_ratio = 0.0;
  long evaluations = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<long, double>> history;  // (evaluation count, best so far)
};

// Derivative-free minimization of || M f ||_p / || f ||_p over k-piece step
// functions, parametrized as (start, log gaps, log heights) so positivity is
// free. Simplex descent with seeded random restarts; the budget counts
// objective evaluations across all restarts. Point indicators at the atoms of
// mu join the candidate pool so atomic collapse is always found. The reported
// best_ratio is recomputed from best_f at the end. Deterministic per seed.
SearchResult search_min_ratio(const Measure& mu, double p, int k_pieces, long budget,
                              std::uint64_t seed, int restarts = 8);

// Estimated minima for each exponent and the cross-exponent comparison
// est_p^(p/r) vs est_r. Report only: the estimates are upper bounds on the
// true infima, so no inequality between them is asserted.
struct HolderRow {
  double p = 0.0;
  double r = 0.0;
  double est_p = 0.0;
  double est_r = 0.0;
  double est_p_powered = 0.0;
};

std::vector<HolderRow> holder_experiment(const Measure& mu, const std::vector<double>& p_list,
                                         const std::vector<double>& r_list, int k_pieces,
                                         long budget, std::uint64_t seed);

}  // namespace maxlab
