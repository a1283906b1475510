#pragma once

#include <optional>
#include <vector>

#include "maxlab/interval.hpp"
#include "maxlab/measure.hpp"
#include "maxlab/rational.hpp"

namespace maxlab {

// Nonnegative step function with compact support: k breakpoints bound k-1
// regions; values[i] is the value on (breakpoints[i], breakpoints[i+1]) and
// the function vanishes outside [breakpoints.front(), breakpoints.back()].
// point_values[i] is the value at breakpoints[i] itself, which matters
// exactly when an atom sits on a breakpoint; when omitted it defaults to the
// value of the region to the right (0 at the last breakpoint).
//
// A single breakpoint (k = 1, empty values) with point_values = {w} is the
// point indicator supported on one point.
class StepFunction {
 public:
  StepFunction(std::vector<Rational> breakpoints, std::vector<Rational> values,
               std::optional<std::vector<Rational>> point_values = std::nullopt);

  // indicator of the open interval (lo, hi)
  static StepFunction indicator(const Rational& lo, const Rational& hi);
  static StepFunction point_indicator(const Rational& x);

  const std::vector<Rational>& breakpoints() const { return breaks_; }
  const std::vector<Rational>& values() const { return values_; }
  const std::vector<Rational>& point_values() const { return point_values_; }

  Rational value_at(const Rational& x) const;
  Rational max_value() const;  // max over regions and breakpoints
  const Rational& support_lo() const { return breaks_.front(); }
  const Rational& support_hi() const { return breaks_.back(); }

  // {f > t} exactly, as a normalized interval list (components may be open,
  // closed at interior breakpoints whose point value also exceeds t, or
  // isolated singletons).
  std::vector<Interval> strict_superlevel(const Rational& t) const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  std::vector<Rational> breaks_;
  std::vector<Rational> values_;
  std::vector<Rational> point_values_;
};

// int_I f dmu, exactly (always finite: f is bounded with compact support).
Rational integral_of(const Measure& mu, const StepFunction& f, const Interval& I);

// (1/mu(I)) int_I f dmu, with the convention that the average is 0 when
// mu(I) is 0 or infinite.
Rational average(const Measure& mu, const StepFunction& f, const Interval& I);

// Sorted, deduplicated union of f's breakpoints, mu's density breakpoints
// and mu's atom positions: every point where either object changes shape.
std::vector<Rational> candidate_points(const Measure& mu, const StepFunction& f);

// Pushforward under x -> -x.
StepFunction reflected(const StepFunction& f);

// ||f||_1 with respect to mu over the whole line.
Rational l1_norm(const Measure& mu, const StepFunction& f);

}  // namespace maxlab
