#include "maxlab/interval.hpp"

#include <algorithm>
#include <stdexcept>

namespace maxlab {

Interval::Interval(std::optional<Rational> lo, std::optional<Rational> hi, bool lo_closed,
                   bool hi_closed)
    : lo_(std::move(lo)), hi_(std::move(hi)), lo_closed_(lo_closed), hi_closed_(hi_closed) {
  if (!lo_.has_value() && lo_closed_) throw std::invalid_argument("interval: closed at -inf");
  if (!hi_.has_value() && hi_closed_) throw std::invalid_argument("interval: closed at +inf");
  if (lo_.has_value() && hi_.has_value()) {
    if (*lo_ > *hi_) throw std::invalid_argument("interval: lo > hi");
    if (*lo_ == *hi_ && !(lo_closed_ && hi_closed_))
      throw std::invalid_argument("interval: degenerate interval must be the closed singleton");
  }
}

const Rational& Interval::lo() const {
  if (!lo_.has_value()) throw std::logic_error("interval: lo() at -inf");
  return *lo_;
}

const Rational& Interval::hi() const {
  if (!hi_.has_value()) throw std::logic_error("interval: hi() at +inf");
  return *hi_;
}

bool Interval::contains(const Rational& x) const {
  if (lo_.has_value()) {
    if (x < *lo_) return false;
    if (x == *lo_ && !lo_closed_) return false;
  }
  if (hi_.has_value()) {
    if (x > *hi_) return false;
    if (x == *hi_ && !hi_closed_) return false;
  }
  return true;
}

Rational Interval::length() const {
  if (!bounded()) throw std::logic_error("interval: length() of unbounded interval");
  return *hi_ - *lo_;
}

bool witness_before(const Interval& a, const Interval& b) {
  // -inf < finite < +inf on each endpoint slot, then flags (open first)
  auto cmp_lo = [](const Interval& u, const Interval& v) -> int {
    if (u.lo_infinite() && v.lo_infinite()) return 0;
    if (u.lo_infinite()) return -1;
    if (v.lo_infinite()) return 1;
    if (u.lo() < v.lo()) return -1;
    if (u.lo() > v.lo()) return 1;
    return 0;
  };
  auto cmp_hi = [](const Interval& u, const Interval& v) -> int {
    if (u.hi_infinite() && v.hi_infinite()) return 0;
    if (u.hi_infinite()) return 1;
    if (v.hi_infinite()) return -1;
    if (u.hi() < v.hi()) return -1;
    if (u.hi() > v.hi()) return 1;
    return 0;
  };
  if (int c = cmp_lo(a, b); c != 0) return c < 0;
  if (int c = cmp_hi(a, b); c != 0) return c < 0;
  if (a.lo_closed() != b.lo_closed()) return !a.lo_closed();
  if (a.hi_closed() != b.hi_closed()) return !a.hi_closed();
  return false;
}

std::string to_string(const Interval& I) {
  std::string s = I.lo_closed() ? "[" : "(";
  s += I.lo_infinite() ? "-inf" : to_fraction_string(I.lo());
  s += ", ";
  s += I.hi_infinite() ? "inf" : to_fraction_string(I.hi());
  s += I.hi_closed() ? "]" : ")";
  return s;
}

// ---- set algebra ----------------------------------------------------------
//
// Intervals are mapped to half-open ranges [lo_cut, hi_cut) in "cut space":
// a cut is either one of the two infinite sentinels or a pair (v, side) with
// side 0 = at the point v, side 1 = immediately after v. Point x lives at cut
// (x, 0). Then
//    [a,b] -> [(a,0), (b,1))      (a,b) -> [(a,1), (b,0))
//    [a,b) -> [(a,0), (b,0))      (a,b] -> [(a,1), (b,1))
// and union/intersection/subtraction become ordinary half-open range sweeps,
// exact in the endpoint flags. Ranges touching at a cut merge seamlessly
// ([0,1) + [1,2] -> [0,2]) which is exactly the right mergeability notion.

namespace {

struct Cut {
  int kind;  // -1 = -inf, 0 = finite, +1 = +inf
  Rational v;
  int side;  // 0 = at v, 1 = just after v (finite cuts only)

  static Cut neg_inf() { return {-1, Rational(0), 0}; }
  static Cut pos_inf() { return {+1, Rational(0), 0}; }
  static Cut at(const Rational& x, int side) { return {0, x, side}; }

  friend bool operator<(const Cut& a, const Cut& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.kind != 0) return false;
    if (a.v != b.v) return a.v < b.v;
    return a.side < b.side;
  }
  friend bool operator==(const Cut& a, const Cut& b) {
    if (a.kind != b.kind) return false;
    if (a.kind != 0) return true;
    return a.v == b.v && a.side == b.side;
  }
  friend bool operator<=(const Cut& a, const Cut& b) { return a < b || a == b; }
};

struct CutRange {
  Cut lo, hi;  // half-open [lo, hi), nonempty: lo < hi
};

CutRange to_range(const Interval& I) {
  Cut lo = I.lo_infinite() ? Cut::neg_inf() : Cut::at(I.lo(), I.lo_closed() ? 0 : 1);
  Cut hi = I.hi_infinite() ? Cut::pos_inf() : Cut::at(I.hi(), I.hi_closed() ? 1 : 0);
  return {lo, hi};
}

Interval from_range(const CutRange& r) {
  std::optional<Rational> lo, hi;
  bool lc = false, hc = false;
  if (r.lo.kind == 0) {
    lo = r.lo.v;
    lc = (r.lo.side == 0);
  }
  if (r.hi.kind == 0) {
    hi = r.hi.v;
    hc = (r.hi.side == 1);
  }
  return Interval(std::move(lo), std::move(hi), lc, hc);
}

std::vector<CutRange> normalize(std::vector<CutRange> rs) {
  std::sort(rs.begin(), rs.end(), [](const CutRange& a, const CutRange& b) { return a.lo < b.lo; });
  std::vector<CutRange> out;
  for (auto& r : rs) {
    if (!out.empty() && r.lo <= out.back().hi) {
      if (out.back().hi < r.hi) out.back().hi = r.hi;
    } else {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<Interval> from_ranges(const std::vector<CutRange>& rs) {
  std::vector<Interval> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(from_range(r));
  return out;
}

}  // namespace

std::vector<Interval> interval_union(std::vector<Interval> pieces) {
  std::vector<CutRange> rs;
  rs.reserve(pieces.size());
  for (const auto& I : pieces) rs.push_back(to_range(I));
  return from_ranges(normalize(std::move(rs)));
}

std::vector<Interval> interval_intersect(const std::vector<Interval>& a,
                                         const std::vector<Interval>& b) {
  std::vector<CutRange> ra, rb;
  for (const auto& I : a) ra.push_back(to_range(I));
  for (const auto& I : b) rb.push_back(to_range(I));
  ra = normalize(std::move(ra));
  rb = normalize(std::move(rb));
  std::vector<CutRange> out;
  size_t i = 0, j = 0;
  while (i < ra.size() && j < rb.size()) {
    Cut lo = std::max(ra[i].lo, rb[j].lo, [](const Cut& x, const Cut& y) { return x < y; });
    Cut hi = std::min(ra[i].hi, rb[j].hi, [](const Cut& x, const Cut& y) { return x < y; });
    if (lo < hi) out.push_back({lo, hi});
    if (ra[i].hi < rb[j].hi)
      ++i;
    else
      ++j;
  }
  return from_ranges(out);
}

std::vector<Interval> interval_subtract(const std::vector<Interval>& a,
                                        const std::vector<Interval>& b) {
  std::vector<CutRange> ra, rb;
  for (const auto& I : a) ra.push_back(to_range(I));
  for (const auto& I : b) rb.push_back(to_range(I));
  ra = normalize(std::move(ra));
  rb = normalize(std::move(rb));
  std::vector<CutRange> out;
  size_t j = 0;
  for (const auto& r : ra) {
    Cut lo = r.lo;
    while (j < rb.size() && rb[j].hi <= lo) ++j;
    size_t k = j;
    while (k < rb.size() && rb[k].lo < r.hi) {
      if (lo < rb[k].lo) out.push_back({lo, rb[k].lo});
      if (lo < rb[k].hi) lo = rb[k].hi;
      ++k;
    }
    if (lo < r.hi) out.push_back({lo, r.hi});
  }
  return from_ranges(out);
}

bool only_isolated_points(const std::vector<Interval>& pieces) {
  return std::all_of(pieces.begin(), pieces.end(),
                     [](const Interval& I) { return I.is_singleton(); });
}

}  // namespace maxlab
