#pragma once

#include <cstddef>
#include <vector>

#include "maxlab/extended.hpp"
#include "maxlab/interval.hpp"
#include "maxlab/rational.hpp"

namespace maxlab {

struct Atom {
  Rational position;
  Rational weight;  // > 0
  friend bool operator==(const Atom&, const Atom&) = default;
};

// Nonnegative measure on the line: finitely many atoms plus a piecewise
// constant density. m breakpoints cut the line into m+1 regions (including
// the two unbounded tails), so density_values has size m+1; density_values[i]
// is the density on (breakpoints[i-1], breakpoints[i]) with the conventions
// breakpoints[-1] = -inf, breakpoints[m] = +inf. Lebesgue measure is the
// empty-breakpoint measure with the single density value 1.
//
// Constructor sorts atoms, and rejects: duplicate atom positions, weights
// <= 0, negative densities, non-increasing breakpoints, and a value count
// that does not match the breakpoints.
class Measure {
 public:
  Measure(std::vector<Atom> atoms, std::vector<Rational> density_breakpoints,
          std::vector<Rational> density_values);

  static Measure lebesgue() { return Measure({}, {}, {Rational(1)}); }
  static Measure zero() { return Measure({}, {}, {Rational(0)}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Rational>& density_breakpoints() const { return breaks_; }
  const std::vector<Rational>& density_values() const { return values_; }

  bool has_atoms() const { return !atoms_.empty(); }
  Rational atom_weight_at(const Rational& x) const;  // 0 if no atom there

  // density on the open region containing x; at a breakpoint the value is
  // irrelevant for any integral and the right region's value is returned
  const Rational& density_at(const Rational& x) const;
  // region r covers (breakpoints[r-1], breakpoints[r]); r in [0, m]
  size_t region_of(const Rational& x) const;
  const Rational& left_tail_density() const { return values_.front(); }
  const Rational& right_tail_density() const { return values_.back(); }

  friend bool operator==(const Measure&, const Measure&) = default;

 private:
  std::vector<Atom> atoms_;
  std::vector<Rational> breaks_;
  std::vector<Rational> values_;
};

// mu(I), exactly; infinite iff I meets an unbounded region of positive
// density on an unbounded stretch.
ExtendedNonneg measure_of(const Measure& mu, const Interval& I);

// Closure of the set where mu is locally positive: closed intervals for the
// positive-density regions, merged with each other and with atom singletons.
std::vector<Interval> support_of(const Measure& mu);

// Pushforward under x -> -x.
Measure reflected(const Measure& mu);

}  // namespace maxlab
