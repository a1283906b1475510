#include "maxlab/step_function.hpp"

#include <algorithm>
#include <stdexcept>

namespace maxlab {

StepFunction::StepFunction(std::vector<Rational> breakpoints, std::vector<Rational> values,
                           std::optional<std::vector<Rational>> point_values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
  if (breaks_.empty()) throw std::invalid_argument("step function: needs at least one breakpoint");
  for (size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i - 1] < breaks_[i]))
      throw std::invalid_argument("step function: breakpoints must be strictly increasing");
  if (values_.size() + 1 != breaks_.size())
    throw std::invalid_argument("step function: need one value per region (breakpoints - 1)");
  for (const auto& v : values_)
    if (v < 0) throw std::invalid_argument("step function: negative value");
  if (point_values.has_value()) {
    point_values_ = std::move(*point_values);
    if (point_values_.size() != breaks_.size())
      throw std::invalid_argument("step function: need one point value per breakpoint");
    for (const auto& v : point_values_)
      if (v < 0) throw std::invalid_argument("step function: negative point value");
  } else {
    point_values_.reserve(breaks_.size());
    for (size_t i = 0; i + 1 < breaks_.size(); ++i) point_values_.push_back(values_[i]);
    point_values_.push_back(Rational(0));
  }
}

StepFunction StepFunction::indicator(const Rational& lo, const Rational& hi) {
  // genuinely the open-interval indicator: 0 at both endpoints
  return StepFunction({lo, hi}, {Rational(1)},
                      std::vector<Rational>{Rational(0), Rational(0)});
}

StepFunction StepFunction::point_indicator(const Rational& x) {
  return StepFunction({x}, {}, std::vector<Rational>{Rational(1)});
}

Rational StepFunction::value_at(const Rational& x) const {
  if (x < breaks_.front() || x > breaks_.back()) return Rational(0);
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  size_t i = static_cast<size_t>(it - breaks_.begin());
  if (it != breaks_.end() && *it == x) return point_values_[i];
  return values_[i - 1];  // breaks_[i-1] < x < breaks_[i]
}

Rational StepFunction::max_value() const {
  Rational m(0);
  for (const auto& v : values_) m = std::max(m, v);
  for (const auto& v : point_values_) m = std::max(m, v);
  return m;
}

std::vector<Interval> StepFunction::strict_superlevel(const Rational& t) const {
  std::vector<Interval> pieces;
  for (size_t i = 0; i < values_.size(); ++i)
    if (values_[i] > t) pieces.push_back(Interval::open(breaks_[i], breaks_[i + 1]));
  for (size_t i = 0; i < point_values_.size(); ++i)
    if (point_values_[i] > t) pieces.push_back(Interval::singleton(breaks_[i]));
  return interval_union(std::move(pieces));
}

Rational integral_of(const Measure& mu, const StepFunction& f, const Interval& I) {
  Rational total(0);
  for (const auto& a : mu.atoms())
    if (I.contains(a.position)) total += a.weight * f.value_at(a.position);

  // density part: clip to f's support; endpoint flags are length-irrelevant
  Rational lo = f.support_lo(), hi = f.support_hi();
  if (!I.lo_infinite()) lo = std::max(lo, I.lo());
  if (!I.hi_infinite()) hi = std::min(hi, I.hi());
  if (!(lo < hi)) return total;

  std::vector<Rational> grid;
  grid.push_back(lo);
  for (const auto& b : f.breakpoints())
    if (lo < b && b < hi) grid.push_back(b);
  for (const auto& b : mu.density_breakpoints())
    if (lo < b && b < hi) grid.push_back(b);
  grid.push_back(hi);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    Rational mid = (grid[i] + grid[i + 1]) / 2;  // interior of a constancy region
    Rational fv = f.value_at(mid);
    if (fv == 0) continue;
    const Rational& dv = mu.density_at(mid);
    if (dv == 0) continue;
    total += fv * dv * (grid[i + 1] - grid[i]);
  }
  return total;
}

Rational average(const Measure& mu, const StepFunction& f, const Interval& I) {
  ExtendedNonneg m = measure_of(mu, I);
  if (m.is_infinite() || m.is_zero()) return Rational(0);
  return integral_of(mu, f, I) / m.value();
}

std::vector<Rational> candidate_points(const Measure& mu, const StepFunction& f) {
  std::vector<Rational> pts;
  pts.reserve(mu.atoms().size() + mu.density_breakpoints().size() + f.breakpoints().size());
  for (const auto& a : mu.atoms()) pts.push_back(a.position);
  pts.insert(pts.end(), mu.density_breakpoints().begin(), mu.density_breakpoints().end());
  pts.insert(pts.end(), f.breakpoints().begin(), f.breakpoints().end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

StepFunction reflected(const StepFunction& f) {
  std::vector<Rational> bks(f.breakpoints().rbegin(), f.breakpoints().rend());
  for (auto& b : bks) b = -b;
  std::vector<Rational> vals(f.values().rbegin(), f.values().rend());
  std::vector<Rational> pvals(f.point_values().rbegin(), f.point_values().rend());
  return StepFunction(std::move(bks), std::move(vals), std::move(pvals));
}

Rational l1_norm(const Measure& mu, const StepFunction& f) {
  return integral_of(mu, f, Interval::whole_line());
}

}  // namespace maxlab
