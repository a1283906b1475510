#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "maxlab/rational.hpp"

namespace maxlab {

// Interval of the real line with independently open/closed finite endpoints.
// Invariants (constructor-enforced, throwing std::invalid_argument):
//   * lo <= hi when both finite; lo == hi forces both endpoints closed
//     (the singleton {x}) — empty intervals are not representable;
//   * an infinite endpoint is always open.
class Interval {
 public:
  Interval(std::optional<Rational> lo, std::optional<Rational> hi, bool lo_closed, bool hi_closed);

  static Interval open(const Rational& lo, const Rational& hi) { return {lo, hi, false, false}; }
  static Interval closed(const Rational& lo, const Rational& hi) { return {lo, hi, true, true}; }
  static Interval left_closed(const Rational& lo, const Rational& hi) { return {lo, hi, true, false}; }
  static Interval right_closed(const Rational& lo, const Rational& hi) { return {lo, hi, false, true}; }
  static Interval singleton(const Rational& x) { return {x, x, true, true}; }
  static Interval ray_below(const Rational& hi, bool hi_closed) {
    return {std::nullopt, hi, false, hi_closed};
  }
  static Interval ray_above(const Rational& lo, bool lo_closed) {
    return {lo, std::nullopt, lo_closed, false};
  }
  static Interval whole_line() { return {std::nullopt, std::nullopt, false, false}; }

  bool lo_infinite() const { return !lo_.has_value(); }
  bool hi_infinite() const { return !hi_.has_value(); }
  bool bounded() const { return lo_.has_value() && hi_.has_value(); }
  const Rational& lo() const;  // throws std::logic_error if infinite
  const Rational& hi() const;
  bool lo_closed() const { return lo_closed_; }
  bool hi_closed() const { return hi_closed_; }

  bool contains(const Rational& x) const;
  bool is_singleton() const { return bounded() && *lo_ == *hi_; }
  // length() only for bounded intervals
  Rational length() const;

  friend bool operator==(const Interval& a, const Interval& b) = default;

 private:
  std::optional<Rational> lo_, hi_;
  bool lo_closed_, hi_closed_;
};

// Total order used to break ties between equal-average witness intervals:
// lexicographic on (lo, hi, lo_closed, hi_closed) with -inf < finite < +inf
// and open (false) before closed (true).
bool witness_before(const Interval& a, const Interval& b);

std::string to_string(const Interval& I);

// ---- exact boolean operations on finite unions of intervals -------------
//
// Lists are normalized: sorted, pairwise disjoint, non-mergeable (two pieces
// that share an endpoint with at least one side closed get merged). All
// operations are exact in the endpoint flags.

std::vector<Interval> interval_union(std::vector<Interval> pieces);
std::vector<Interval> interval_intersect(const std::vector<Interval>& a,
                                         const std::vector<Interval>& b);
std::vector<Interval> interval_subtract(const std::vector<Interval>& a,
                                        const std::vector<Interval>& b);
// true when every component is a single point (or the list is empty)
bool only_isolated_points(const std::vector<Interval>& pieces);

}  // namespace maxlab
