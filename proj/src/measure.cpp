#include "maxlab/measure.hpp"

#include <algorithm>
#include <stdexcept>

namespace maxlab {

Measure::Measure(std::vector<Atom> atoms, std::vector<Rational> density_breakpoints,
                 std::vector<Rational> density_values)
    : atoms_(std::move(atoms)), breaks_(std::move(density_breakpoints)),
      values_(std::move(density_values)) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  for (size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].weight <= 0) throw std::invalid_argument("measure: atom weight must be positive");
    if (i > 0 && atoms_[i].position == atoms_[i - 1].position)
      throw std::invalid_argument("measure: duplicate atom position");
  }
  for (size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i - 1] < breaks_[i]))
      throw std::invalid_argument("measure: density breakpoints must be strictly increasing");
  if (values_.size() != breaks_.size() + 1)
    throw std::invalid_argument("measure: need one density value per region (breakpoints + 1)");
  for (const auto& v : values_)
    if (v < 0) throw std::invalid_argument("measure: negative density");
}

Rational Measure::atom_weight_at(const Rational& x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, const Rational& v) { return a.position < v; });
  if (it != atoms_.end() && it->position == x) return it->weight;
  return Rational(0);
}

size_t Measure::region_of(const Rational& x) const {
  return static_cast<size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
}

const Rational& Measure::density_at(const Rational& x) const { return values_[region_of(x)]; }

ExtendedNonneg measure_of(const Measure& mu, const Interval& I) {
  ExtendedNonneg total;
  for (const auto& a : mu.atoms())
    if (I.contains(a.position)) total += a.weight;

  const auto& bks = mu.density_breakpoints();
  const auto& vals = mu.density_values();
  for (size_t r = 0; r < vals.size(); ++r) {
    if (vals[r] == 0) continue;
    // region r = (bks[r-1], bks[r]); clip against I (flags don't affect length)
    bool lo_inf = (r == 0) && I.lo_infinite();
    bool hi_inf = (r == bks.size()) && I.hi_infinite();
    if (lo_inf || hi_inf) {
      // nonempty by construction: the unbounded side extends past any finite bound
      return ExtendedNonneg::infinity();
    }
    Rational lo = (r == 0) ? I.lo() : (I.lo_infinite() ? bks[r - 1] : std::max(bks[r - 1], I.lo()));
    Rational hi = (r == bks.size()) ? I.hi()
                                    : (I.hi_infinite() ? bks[r] : std::min(bks[r], I.hi()));
    if (lo < hi) total += Rational(vals[r] * (hi - lo));
  }
  return total;
}

std::vector<Interval> support_of(const Measure& mu) {
  std::vector<Interval> pieces;
  const auto& bks = mu.density_breakpoints();
  const auto& vals = mu.density_values();
  for (size_t r = 0; r < vals.size(); ++r) {
    if (vals[r] == 0) continue;
    std::optional<Rational> lo, hi;
    if (r > 0) lo = bks[r - 1];
    if (r < bks.size()) hi = bks[r];
    pieces.emplace_back(lo, hi, lo.has_value(), hi.has_value());  // closure of the region
  }
  for (const auto& a : mu.atoms()) pieces.push_back(Interval::singleton(a.position));
  return interval_union(std::move(pieces));
}

Measure reflected(const Measure& mu) {
  std::vector<Atom> atoms;
  atoms.reserve(mu.atoms().size());
  for (const auto& a : mu.atoms()) atoms.push_back({-a.position, a.weight});
  std::vector<Rational> bks(mu.density_breakpoints().rbegin(), mu.density_breakpoints().rend());
  for (auto& b : bks) b = -b;
  std::vector<Rational> vals(mu.density_values().rbegin(), mu.density_values().rend());
  return Measure(std::move(atoms), std::move(bks), std::move(vals));
}

}  // namespace maxlab
