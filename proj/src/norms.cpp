#include "maxlab/norms.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>

#include "maxlab/errors.hpp"

namespace maxlab {

namespace {

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lp norm: the exponent must be a finite real > 1");
}

// 15-point Gauss-Legendre rule on [a, b]
double gl15(const std::function<double(double)>& h, double a, double b) {
  static const double X[8] = {0.0,
                              0.201194093997435,
                              0.394151347077563,
                              0.570972172608539,
                              0.724417731360170,
                              0.848206583410427,
                              0.937273392400706,
                              0.987992518020485};
  static const double W[8] = {0.202578241925561, 0.198431485327112, 0.186161000015562,
                              0.166269205816994, 0.139570677926154, 0.107159220467172,
                              0.070366047488108, 0.030753241996117};
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  double s = W[0] * h(c);
  for (int i = 1; i < 8; ++i) s += W[i] * (h(c - hw * X[i]) + h(c + hw * X[i]));
  return s * hw;
}

struct Panel {
  double a, b;
  double value;  // halved-rule estimate
  double err;    // |whole - halves|
};

struct WorstFirst {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.err != y.err) return x.err > y.err;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

Panel make_panel(const std::function<double(double)>& h, double a, double b) {
  const double m = 0.5 * (a + b);
  const double whole = gl15(h, a, b);
  const double halves = gl15(h, a, m) + gl15(h, m, b);
  return {a, b, halves, std::fabs(whole - halves)};
}

// Smallest point T >= from with mu((from, T)) >= need using the density part
// only; nullopt when the density mass to the right of `from` is finite and
// insufficient (then the density support is bounded and no tail remains).
std::optional<Rational> walk_to_mass(const Measure& mu, const Rational& from,
                                     const Rational& need) {
  const auto& bks = mu.density_breakpoints();
  const auto& vals = mu.density_values();
  Rational acc(0), at = from;
  for (size_t r = mu.region_of(from);; ++r) {
    const bool unbounded = (r == bks.size());
    const Rational& rho = vals[r];
    if (rho > 0) {
      if (unbounded) return at + (need - acc) / rho;
      const Rational seg = rho * (bks[r] - at);
      if (acc + seg >= need) return at + (need - acc) / rho;
      acc += seg;
    }
    if (unbounded) return std::nullopt;
    at = bks[r];
  }
}

// Upper end of the positive-density coverage on the given side, in original
// coordinates; only meaningful when the outermost region on that side has
// zero density (otherwise walk_to_mass succeeds and this is never consulted).
Rational last_positive_density_point(const Measure& mu, bool right_side) {
  const Measure m = right_side ? mu : reflected(mu);
  const auto& bks = m.density_breakpoints();
  const auto& vals = m.density_values();
  Rational best = bks.empty() ? Rational(0) : bks.front();
  for (size_t r = 0; r < bks.size(); ++r)
    if (vals[r] > 0) best = bks[r];
  return right_side ? best : -best;
}

}  // namespace

NormResult lp_norm_step(const Measure& mu, const StepFunction& f, double p) {
  require_exponent(p);
  NormResult out;
  double S = 0.0, A = 0.0;  // power sum and its absolute mass (all terms >= 0)
  for (const auto& a : mu.atoms()) {
    const Rational v = f.value_at(a.position);
    if (v == 0) continue;
    S += to_double(a.weight) * std::pow(to_double(v), p);
    ++out.pieces_used;
  }
  const Measure density_only({}, mu.density_breakpoints(), mu.density_values());
  const auto& bk = f.breakpoints();
  const auto& vl = f.values();
  for (size_t i = 0; i + 1 < bk.size(); ++i) {
    if (vl[i] == 0) continue;
    const ExtendedNonneg mass = measure_of(density_only, Interval::open(bk[i], bk[i + 1]));
    if (mass.is_zero()) continue;
    S += to_double(mass.value()) * std::pow(to_double(vl[i]), p);
    ++out.pieces_used;
  }
  A = S;
  const double eS = 8.0 * DBL_EPSILON * A * std::max<double>(1, out.pieces_used);
  out.value = std::pow(S, 1.0 / p);
  const double hi = std::pow(S + eS, 1.0 / p);
  out.error_bound = (hi - out.value) + 4.0 * DBL_EPSILON * out.value;
  return out;
}

NormResult lp_norm_evaluable(const Evaluable& g, const Measure& mu, double p,
                             const Interval& tail_window, double tol) {
  require_exponent(p);
  if (!(tol > 0)) throw std::invalid_argument("lp norm: tol must be positive");
  if (tail_window.lo_infinite() || tail_window.hi_infinite())
    throw std::invalid_argument("lp norm: the tail window must be bounded");
  const Rational A = tail_window.lo(), B = tail_window.hi();

  // truncation points: beyond them the certificate
  //   g(x) <= tail_constant / mu((edge, x))
  // bounds the remaining integral of g^p by c^p * G^(1-p) / (p-1)
  const double c = to_double(g.tail_constant);
  double tail_err = 0.0;
  Rational Tl = A, Tr = B;
  if (c > 0) {
    const double gmin = std::pow(2.0 * std::pow(c, p) / (tol * (p - 1.0)), 1.0 / (p - 1.0));
    if (!std::isfinite(gmin))
      throw TailNotCertified("lp norm: no finite truncation point certifies the tail");
    const Rational need(gmin);
    const auto right = walk_to_mass(mu, B, need);
    if (right.has_value()) {
      Tr = *right;
      tail_err += std::pow(c, p) * std::pow(gmin, 1.0 - p) / (p - 1.0);
    } else {
      Tr = std::max(B, last_positive_density_point(mu, true));
    }
    const auto left = walk_to_mass(reflected(mu), -A, need);
    if (left.has_value()) {
      Tl = -*left;
      tail_err += std::pow(c, p) * std::pow(gmin, 1.0 - p) / (p - 1.0);
    } else {
      Tl = std::min(A, last_positive_density_point(mu, false));
    }
  }

  // initial panel cuts per positive-density region: region ends, the
  // evaluable's breakpoints (so panels never straddle a non-smooth point),
  // the window edges, and a doubling ladder across the truncated tails
  const auto& bks = mu.density_breakpoints();
  const auto& vals = mu.density_values();
  const double Ad = to_double(A), Bd = to_double(B);
  const double ladder = std::max(1.0, (Bd - Ad) / 8.0);

  double S_quad = 0.0, quad_err = 0.0;
  long panels_used = 0;

  for (size_t r = 0; r < vals.size(); ++r) {
    if (vals[r] == 0) continue;
    const Rational rlo = (r == 0) ? Tl : std::max(bks[r - 1], Tl);
    const Rational rhi = (r == bks.size()) ? Tr : std::min(bks[r], Tr);
    if (!(rlo < rhi)) continue;
    const double lo = to_double(rlo), hi = to_double(rhi);
    const double rho = to_double(vals[r]);
    const auto h = [&g, p, rho](double x) {
      const double v = g.fast(x);
      return v > 0.0 ? rho * std::pow(v, p) : 0.0;
    };

    std::vector<double> cuts{lo, hi};
    for (const auto& q : g.breakpoints) {
      if (rlo < q && q < rhi) cuts.push_back(to_double(q));
    }
    if (rlo < A && A < rhi) cuts.push_back(Ad);
    if (rlo < B && B < rhi) cuts.push_back(Bd);
    for (double step = ladder; Bd + step < hi; step *= 2.0)
      if (Bd + step > lo) cuts.push_back(Bd + step);
    for (double step = ladder; Ad - step > lo; step *= 2.0)
      if (Ad - step < hi) cuts.push_back(Ad - step);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::multiset<Panel, WorstFirst> live;
    double total_err = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i] < cuts[i + 1])) continue;
      Panel pan = make_panel(h, cuts[i], cuts[i + 1]);
      total_err += pan.err;
      live.insert(pan);
    }
    const double target = 0.25 * tol / static_cast<double>(std::max<size_t>(1, vals.size()));
    std::vector<Panel> done;
    long splits = 0;
    while (!live.empty()) {
      if (total_err <= target || splits >= 20000) {
        done.insert(done.end(), live.begin(), live.end());
        break;
      }
      Panel worst = *live.begin();
      live.erase(live.begin());
      const double width = worst.b - worst.a;
      if (width < 1e-13 * (1.0 + std::fabs(worst.a)) || worst.err == 0.0) {
        done.push_back(worst);  // cannot improve further; keep its error on the books
        continue;
      }
      const double m = 0.5 * (worst.a + worst.b);
      Panel lhs = make_panel(h, worst.a, m);
      Panel rhs = make_panel(h, m, worst.b);
      total_err += lhs.err + rhs.err - worst.err;
      live.insert(lhs);
      live.insert(rhs);
      ++splits;
      if (live.size() == 1 && total_err <= target) {
        done.insert(done.end(), live.begin(), live.end());
        break;
      }
    }
    std::sort(done.begin(), done.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& pan : done) {
      S_quad += pan.value;
      quad_err += pan.err;
    }
    panels_used += static_cast<long>(done.size());
  }

  // atoms carry exact evaluations; only the powering rounds
  double S_atoms = 0.0;
  long atom_pieces = 0;
  for (const auto& a : mu.atoms()) {
    const Rational v = g.exact(a.position);
    if (v < 0) throw std::invalid_argument("lp norm: the evaluable must be nonnegative");
    if (v == 0) continue;
    S_atoms += to_double(a.weight) * std::pow(to_double(v), p);
    ++atom_pieces;
  }

  const double S = S_quad + S_atoms;
  const double rounding = 16.0 * DBL_EPSILON * (std::fabs(S_quad) + S_atoms) *
                          std::max<double>(1, static_cast<double>(panels_used + atom_pieces));
  const double eS = quad_err + tail_err + rounding;

  NormResult out;
  out.pieces_used = panels_used + atom_pieces;
  out.value = std::pow(std::max(S, 0.0), 1.0 / p);
  const double hi_val = std::pow(std::max(S, 0.0) + eS, 1.0 / p);
  const double lo_val = std::pow(std::max(S - eS, 0.0), 1.0 / p);
  out.error_bound =
      std::max(hi_val - out.value, out.value - lo_val) + 4.0 * DBL_EPSILON * out.value;
  return out;
}

Evaluable maximal_evaluable(const Measure& mu, const StepFunction& f) {
  Evaluable g;
  auto fast = std::make_shared<MaximalEvaluator>(mu, f);
  g.fast = [fast](double x) { return (*fast)(x); };
  g.exact = [mu, f](const Rational& x) { return maximal_at(mu, f, x).value; };
  g.breakpoints = candidate_points(mu, f);
  g.tail_constant = l1_norm(mu, f);
  return g;
}

NormResult lp_norm_maximal(const Measure& mu, const StepFunction& f, double p, double tol) {
  const Evaluable g = maximal_evaluable(mu, f);
  const Interval window = Interval::closed(g.breakpoints.front(), g.breakpoints.back());
  return lp_norm_evaluable(g, mu, p, window, tol);
}

NormResult lp_ratio(const Measure& mu, const StepFunction& f, double p, double tol) {
  const NormResult den = lp_norm_step(mu, f, p);
  if (!(den.value > den.error_bound))
    throw PreconditionViolated("ratio: the function has zero norm against this measure");
  const NormResult num = lp_norm_maximal(mu, f, p, tol);
  NormResult out;
  out.value = num.value / den.value;
  out.error_bound = (num.error_bound * den.value + num.value * den.error_bound) /
                    (den.value * (den.value - den.error_bound));
  out.pieces_used = num.pieces_used + den.pieces_used;
  return out;
}

}  // namespace maxlab
