#include "maxlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "maxlab/errors.hpp"

namespace maxlab {

namespace {

// Cumulative tables relative to pos[0]:
//   mex[i] = mu((pos[0], pos[i]))   mi[i] = mu((pos[0], pos[i]])
// and the same for the f-integral in fex/fi. Every admissible interval's
// measure and integral is then a difference of two entries, selected by the
// endpoint flags.
//
// pos must be sorted, deduplicated, and contain every atom position plus
// every density/f breakpoint lying within its hull, so that each segment
// (pos[i-1], pos[i]) is a single constancy region of both mu and f. The
// atom-position requirement is asserted; extra positions (a dense grid) are
// harmless.
struct CumTables {
  std::vector<Rational> mex, mi, fex, fi;
};

CumTables build_cumulative(const Measure& mu, const StepFunction& f,
                           const std::vector<Rational>& pos) {
  const size_t m = pos.size();
  const auto& atoms = mu.atoms();
  const auto& dbk = mu.density_breakpoints();
  const auto& dvl = mu.density_values();
  const auto& fbk = f.breakpoints();
  const auto& fvl = f.values();

  CumTables T;
  T.mex.resize(m);
  T.mi.resize(m);
  T.fex.resize(m);
  T.fi.resize(m);

  size_t ai = 0, dr = 0, fr = 0;  // atom / density-break / f-break walkers
  auto atom_at = [&](const Rational& p, bool first) -> const Atom* {
    while (ai < atoms.size() && atoms[ai].position < p) {
      if (!first && atoms[ai].position > pos[0])
        throw std::logic_error("cumulative tables: atom off the position list");
      if (first)
        throw std::logic_error("cumulative tables: atom below the position list");
      ++ai;
    }
    if (ai < atoms.size() && atoms[ai].position == p) return &atoms[ai++];
    return nullptr;
  };

  T.mex[0] = 0;
  T.fex[0] = 0;
  {
    const Atom* a = atom_at(pos[0], true);
    T.mi[0] = a ? a->weight : Rational(0);
    T.fi[0] = a ? a->weight * f.value_at(pos[0]) : Rational(0);
  }
  for (size_t i = 1; i < m; ++i) {
    // segment (pos[i-1], pos[i]) sits inside one region of mu and of f
    while (dr < dbk.size() && dbk[dr] <= pos[i - 1]) ++dr;
    while (fr < fbk.size() && fbk[fr] <= pos[i - 1]) ++fr;
    const Rational& rho = dvl[dr];
    Rational seg = rho == 0 ? Rational(0) : rho * (pos[i] - pos[i - 1]);
    T.mex[i] = T.mi[i - 1] + seg;
    if (seg != 0 && fr > 0 && fr < fbk.size() && fvl[fr - 1] != 0)
      T.fex[i] = T.fi[i - 1] + fvl[fr - 1] * seg;
    else
      T.fex[i] = T.fi[i - 1];
    const Atom* a = atom_at(pos[i], false);
    if (a) {
      T.mi[i] = T.mex[i] + a->weight;
      T.fi[i] = T.fex[i] + a->weight * f.value_at(pos[i]);
    } else {
      T.mi[i] = T.mex[i];
      T.fi[i] = T.fex[i];
    }
  }
  return T;
}

struct ExactTables {
  std::vector<Rational> pos;
  CumTables t;
  bool left_ray_ok, right_ray_ok;  // zero tail density => the ray is admissible
  size_t ix;                       // index of the query point

  ExactTables(const Measure& mu, const StepFunction& f, const Rational& x) {
    pos = candidate_points(mu, f);
    pos.push_back(x);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    ix = static_cast<size_t>(std::lower_bound(pos.begin(), pos.end(), x) - pos.begin());
    t = build_cumulative(mu, f, pos);
    left_ray_ok = (mu.left_tail_density() == 0);
    right_ray_ok = (mu.right_tail_density() == 0);
  }

  Rational atom_m(size_t i) const { return t.mi[i] - t.mex[i]; }
  Rational atom_f(size_t i) const { return t.fi[i] - t.fex[i]; }
};

// One admissible interval end: the cumulative pair plus its witness spelling.
struct EndOpt {
  Rational m, f;
  bool ray = false;
  size_t idx = 0;
  bool closed = false;
};

Interval make_witness(const ExactTables& T, const EndOpt& lo, const EndOpt& hi) {
  std::optional<Rational> l, h;
  bool lc = false, hc = false;
  if (!lo.ray) {
    l = T.pos[lo.idx];
    lc = lo.closed;
  }
  if (!hi.ray) {
    h = T.pos[hi.idx];
    hc = hi.closed;
  }
  return Interval(std::move(l), std::move(h), lc, hc);
}

MaximalValue best_over(const ExactTables& T, const std::vector<EndOpt>& lows,
                       const std::vector<EndOpt>& highs) {
  MaximalValue best{Rational(0), std::nullopt};
  for (const auto& lo : lows) {
    for (const auto& hi : highs) {
      Rational m = hi.m - lo.m;
      if (m <= 0) continue;  // empty, massless, or infinite-measure convention (rays are
                             // only enumerated when their measure is finite)
      Rational v = (hi.f - lo.f) / m;
      if (v > best.value || !best.witness.has_value()) {
        best.value = std::move(v);
        best.witness = make_witness(T, lo, hi);
      } else if (v == best.value) {
        Interval w = make_witness(T, lo, hi);
        if (witness_before(w, *best.witness)) best.witness = std::move(w);
      }
    }
  }
  return best;
}

// Low ends admissible for an interval containing pos[ix]: closed at any
// pos[i] <= x, open strictly below x, the left ray when its measure is zero
// up to pos[0].
std::vector<EndOpt> two_sided_lows(const ExactTables& T) {
  std::vector<EndOpt> lows;
  if (T.left_ray_ok) lows.push_back({Rational(0), Rational(0), true, 0, false});
  for (size_t i = 0; i <= T.ix; ++i) lows.push_back({T.t.mex[i], T.t.fex[i], false, i, true});
  for (size_t i = 0; i < T.ix; ++i) lows.push_back({T.t.mi[i], T.t.fi[i], false, i, false});
  return lows;
}

std::vector<EndOpt> two_sided_highs(const ExactTables& T) {
  const size_t m = T.pos.size();
  std::vector<EndOpt> highs;
  if (T.right_ray_ok) highs.push_back({T.t.mi[m - 1], T.t.fi[m - 1], true, 0, false});
  for (size_t j = T.ix; j < m; ++j) highs.push_back({T.t.mi[j], T.t.fi[j], false, j, true});
  for (size_t j = T.ix + 1; j < m; ++j) highs.push_back({T.t.mex[j], T.t.fex[j], false, j, false});
  return highs;
}

}  // namespace

MaximalValue maximal_at(const Measure& mu, const StepFunction& f, const Rational& x) {
  ExactTables T(mu, f, x);
  return best_over(T, two_sided_lows(T), two_sided_highs(T));
}

MaximalValue one_sided_plus_at(const Measure& mu, const StepFunction& f, const Rational& x) {
  ExactTables T(mu, f, x);
  // family [x, b), b > x; closures supply [x, b], [x, +inf) and the atom
  // singleton {x}
  std::vector<EndOpt> lows{{T.t.mex[T.ix], T.t.fex[T.ix], false, T.ix, true}};
  return best_over(T, lows, two_sided_highs(T));
}

MaximalValue one_sided_minus_at(const Measure& mu, const StepFunction& f, const Rational& x) {
  ExactTables T(mu, f, x);
  std::vector<EndOpt> highs{{T.t.mi[T.ix], T.t.fi[T.ix], false, T.ix, true}};
  return best_over(T, two_sided_lows(T), highs);
}

MaximalValue eval_at(const Measure& mu, const StepFunction& f, const Rational& x, EvalKind kind) {
  switch (kind) {
    case EvalKind::two_sided: return maximal_at(mu, f, x);
    case EvalKind::one_sided_plus: return one_sided_plus_at(mu, f, x);
    case EvalKind::one_sided_minus: return one_sided_minus_at(mu, f, x);
  }
  throw std::logic_error("eval_at: bad kind");
}

Rational maximal_sup_at(const Measure& mu, const StepFunction& f, const Rational& x,
                        BallFamily family) {
  ExactTables T(mu, f, x);
  if (family == BallFamily::all) return best_over(T, two_sided_lows(T), two_sided_highs(T)).value;

  // Same admissible index/flag ranges, but measure and integral are
  // assembled from one family's core value plus explicit atom corrections at
  // the endpoints: the open core gains included atoms, the closed core
  // sheds excluded ones. Agreement with ::all is a genuine check on the
  // flag-selected table arithmetic.
  const size_t m = T.pos.size();
  const bool open_route = (family == BallFamily::open_only);
  Rational best(0);
  auto consider = [&](const Rational& mm, const Rational& ff) {
    if (mm <= 0) return;
    Rational v = ff / mm;
    if (v > best) best = v;
  };
  for (size_t i = 0; i <= T.ix; ++i) {
    for (size_t j = T.ix; j < m; ++j) {
      for (int lc = 0; lc < 2; ++lc) {
        for (int hc = 0; hc < 2; ++hc) {
          if (i == T.ix && !lc) continue;  // an open low end at x would exclude x
          if (j == T.ix && !hc) continue;
          if (i == j && !(lc && hc)) continue;
          Rational mm, ff;
          if (open_route) {
            mm = (T.t.mex[j] - T.t.mi[i]) + (lc ? T.atom_m(i) : Rational(0)) +
                 (hc ? T.atom_m(j) : Rational(0));
            ff = (T.t.fex[j] - T.t.fi[i]) + (lc ? T.atom_f(i) : Rational(0)) +
                 (hc ? T.atom_f(j) : Rational(0));
          } else {
            mm = (T.t.mi[j] - T.t.mex[i]) - (lc ? Rational(0) : T.atom_m(i)) -
                 (hc ? Rational(0) : T.atom_m(j));
            ff = (T.t.fi[j] - T.t.fex[i]) - (lc ? Rational(0) : T.atom_f(i)) -
                 (hc ? Rational(0) : T.atom_f(j));
          }
          consider(mm, ff);
        }
      }
    }
  }
  // rays are limit members of both families; their values coincide with the
  // extreme table entries
  if (T.left_ray_ok) {
    for (size_t j = T.ix; j < m; ++j) consider(T.t.mi[j], T.t.fi[j]);        // (-inf, pos[j]]
    for (size_t j = T.ix + 1; j < m; ++j) consider(T.t.mex[j], T.t.fex[j]);  // (-inf, pos[j])
  }
  if (T.right_ray_ok) {
    for (size_t i = 0; i <= T.ix; ++i)
      consider(T.t.mi[m - 1] - T.t.mex[i], T.t.fi[m - 1] - T.t.fex[i]);  // [pos[i], +inf)
    for (size_t i = 0; i < T.ix; ++i)
      consider(T.t.mi[m - 1] - T.t.mi[i], T.t.fi[m - 1] - T.t.fi[i]);  // (pos[i], +inf)
  }
  if (T.left_ray_ok && T.right_ray_ok) consider(T.t.mi[m - 1], T.t.fi[m - 1]);
  return best;
}

// ---- grid oracle -----------------------------------------------------------

namespace {

struct CutOpt {
  Rational m, f;
};

// argmin/argmax of f - lambda*m: double-precision scan with a sound slack,
// exact comparison of the survivors. direction +1 = argmax, -1 = argmin.
size_t exact_extreme(const std::vector<CutOpt>& opts, const std::vector<double>& md,
                     const std::vector<double>& fd, const Rational& lambda, int direction) {
  const double ld = to_double(lambda);
  constexpr double eps = 2.220446049250313e-16;
  const size_t n = opts.size();
  std::vector<double> val(n);
  double best = direction > 0 ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::infinity();
  double smax = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double lm = ld * md[i];
    val[i] = fd[i] - lm;
    const double slack = 64.0 * eps * (std::fabs(fd[i]) + std::fabs(lm) + 1.0e-300);
    if (slack > smax) smax = slack;
    if (direction > 0 ? val[i] > best : val[i] < best) best = val[i];
  }
  size_t winner = n;
  Rational winner_val;
  for (size_t i = 0; i < n; ++i) {
    const bool possible =
        direction > 0 ? (val[i] >= best - 2.0 * smax) : (val[i] <= best + 2.0 * smax);
    if (!possible) continue;
    Rational exact = opts[i].f - lambda * opts[i].m;
    if (winner == n || (direction > 0 ? exact > winner_val : exact < winner_val)) {
      winner = i;
      winner_val = std::move(exact);
    }
  }
  return winner;
}

}  // namespace

Rational grid_oracle_at(const Measure& mu, const StepFunction& f, const Rational& x, long n) {
  if (n < 2) throw std::invalid_argument("grid oracle: need at least two grid points");
  const Rational glo = f.support_lo() - 1, ghi = f.support_hi() + 1;
  const Rational delta = (ghi - glo) / Rational(n - 1);

  // endpoints offered to the optimizer: the uniform grid plus x itself
  std::vector<Rational> grid;
  grid.reserve(static_cast<size_t>(n) + 1);
  for (long k = 0; k < n; ++k) grid.push_back(glo + delta * Rational(k));
  auto xit = std::lower_bound(grid.begin(), grid.end(), x);
  if (xit == grid.end() || *xit != x) grid.insert(xit, x);

  // table positions additionally carry every structure point of mu and f so
  // the cumulative walk stays exact
  std::vector<Rational> cand = candidate_points(mu, f);
  std::vector<Rational> pos;
  pos.reserve(grid.size() + cand.size());
  std::merge(grid.begin(), grid.end(), cand.begin(), cand.end(), std::back_inserter(pos));
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  const CumTables T = build_cumulative(mu, f, pos);

  std::vector<CutOpt> L, R;
  std::vector<double> Lm, Lf, Rm, Rf;
  {
    size_t i = 0;
    for (const auto& g : grid) {
      while (pos[i] != g) ++i;  // grid is a sorted subsequence of pos
      if (g <= x) {
        L.push_back({T.mex[i], T.fex[i]});             // closed low end
        if (g < x) L.push_back({T.mi[i], T.fi[i]});    // open low end
      }
      if (g >= x) {
        R.push_back({T.mi[i], T.fi[i]});               // closed high end
        if (g > x) R.push_back({T.mex[i], T.fex[i]});  // open high end
      }
    }
  }
  Lm.reserve(L.size());
  Lf.reserve(L.size());
  for (const auto& o : L) {
    Lm.push_back(to_double(o.m));
    Lf.push_back(to_double(o.f));
  }
  Rm.reserve(R.size());
  Rf.reserve(R.size());
  for (const auto& o : R) {
    Rm.push_back(to_double(o.m));
    Rf.push_back(to_double(o.f));
  }

  // Dinkelbach iteration: lambda climbs through achieved ratios until
  // h(lambda) = max_R (f - lambda*m) - min_L (f - lambda*m) <= 0, which
  // certifies lambda = max over pairs of (F_r - F_l)/(M_r - M_l). Pairs with
  // M_r = M_l enclose no mass, hence F_r = F_l, and can never carry h > 0.
  Rational lambda(0);
  for (int iter = 0; iter < 10000; ++iter) {
    const double ld = to_double(lambda);
    size_t i0 = 0, j0 = 0;
    double bi = std::numeric_limits<double>::infinity(),
           bj = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < L.size(); ++i) {
      const double v = Lf[i] - ld * Lm[i];
      if (v < bi) {
        bi = v;
        i0 = i;
      }
    }
    for (size_t j = 0; j < R.size(); ++j) {
      const double v = Rf[j] - ld * Rm[j];
      if (v > bj) {
        bj = v;
        j0 = j;
      }
    }
    const Rational gain = (R[j0].f - lambda * R[j0].m) - (L[i0].f - lambda * L[i0].m);
    if (gain > 0 && R[j0].m > L[i0].m) {
      lambda = (R[j0].f - L[i0].f) / (R[j0].m - L[i0].m);
      continue;
    }
    // the fast pick certified nothing: settle this round exactly
    const size_t li = exact_extreme(L, Lm, Lf, lambda, -1);
    const size_t rj = exact_extreme(R, Rm, Rf, lambda, +1);
    const Rational h = (R[rj].f - lambda * R[rj].m) - (L[li].f - lambda * L[li].m);
    if (h > 0) {
      const Rational md = R[rj].m - L[li].m;
      if (md <= 0) throw std::logic_error("grid oracle: positive gain on a null pair");
      lambda = (R[rj].f - L[li].f) / md;
      continue;
    }
    return lambda;
  }
  throw std::logic_error("grid oracle: iteration cap exceeded");
}

// ---- mesh evaluation -------------------------------------------------------

EvaluatedMaximal evaluate_on_mesh(const Measure& mu, const StepFunction& f,
                                  std::vector<Rational> mesh, EvalKind kind) {
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  EvaluatedMaximal out;
  out.kind = kind;
  out.values.reserve(mesh.size());
  for (const auto& x : mesh) out.values.push_back(eval_at(mu, f, x, kind));
  out.mesh = std::move(mesh);
  return out;
}

// ---- superlevel sets -------------------------------------------------------

namespace {

Rational level_value(const Measure& mu, const StepFunction& f, const Rational& x,
                     LevelKind kind) {
  switch (kind) {
    case LevelKind::function_itself: return f.value_at(x);
    case LevelKind::two_sided: return maximal_at(mu, f, x).value;
    case LevelKind::one_sided_plus: return one_sided_plus_at(mu, f, x).value;
    case LevelKind::one_sided_minus: return one_sided_minus_at(mu, f, x).value;
  }
  throw std::logic_error("level_value: bad kind");
}

MaximalValue level_eval(const Measure& mu, const StepFunction& f, const Rational& x,
                        LevelKind kind) {
  switch (kind) {
    case LevelKind::two_sided: return maximal_at(mu, f, x);
    case LevelKind::one_sided_plus: return one_sided_plus_at(mu, f, x);
    case LevelKind::one_sided_minus: return one_sided_minus_at(mu, f, x);
    default: throw std::logic_error("level_eval: no witnesses for the plain function");
  }
}

// Clip an unbounded window side. Outside the candidate hull the level value
// is monotone toward the support: any admissible interval carrying f-mass
// for a farther point contains the nearer point, so its average is dominated
// by the nearer point's supremum. Hence g(w) <= t at a single clip point w
// certifies that no component lies beyond it. First try the hull edge +- 1;
// if the value is still above t, push w out along the tail bound
// g(y) <= ||f||_1 / mu([y, hull)) with a doubling target.
Rational clip_edge(const Measure& mu, const StepFunction& f, const Rational& t, LevelKind kind,
                   bool left_side) {
  const std::vector<Rational> cand = candidate_points(mu, f);
  const Rational first_try = left_side ? Rational(cand.front() - 1) : Rational(cand.back() + 1);
  if (level_value(mu, f, first_try, kind) <= t) return first_try;
  if (t <= 0)
    throw WindowTooSmall("superlevel set: cannot clip an unbounded window at level <= 0");

  const Rational l1 = l1_norm(mu, f);
  const Measure walk_mu = left_side ? reflected(mu) : mu;
  const Rational hull = left_side ? -cand.front() : cand.back();
  Rational target = l1 / t;
  for (int attempt = 0; attempt < 4; ++attempt, target *= 2) {
    // walk density regions rightward from the hull until mu((hull, w)) > target
    // (atoms would only help; ignoring them is conservative)
    const auto& bks = walk_mu.density_breakpoints();
    const auto& vals = walk_mu.density_values();
    Rational acc(0), at = hull;
    size_t r = walk_mu.region_of(hull);
    std::optional<Rational> w;
    while (true) {
      const bool unbounded = (r == bks.size());
      const Rational& rho = vals[r];
      if (rho > 0) {
        if (unbounded) {
          w = at + (target - acc) / rho + 1;
          break;
        }
        const Rational seg = rho * (bks[r] - at);
        if (acc + seg > target) {
          w = at + (target - acc) / rho;
          if (*w > bks[r]) w = bks[r];
          break;
        }
        acc += seg;
      }
      if (unbounded) break;
      at = bks[r];
      ++r;
    }
    if (w.has_value()) {
      const Rational w_real = left_side ? Rational(-(*w + 1)) : Rational(*w + 1);
      if (level_value(mu, f, w_real, kind) <= t) return w_real;
    }
  }
  throw WindowTooSmall("superlevel set: unbounded window side and the tail measure is too small");
}

}  // namespace

std::vector<Interval> superlevel_set(const Measure& mu, const StepFunction& f, const Rational& t,
                                     LevelKind kind, const Interval& window, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("superlevel set: tol must be positive");

  const Rational wl = window.lo_infinite() ? clip_edge(mu, f, t, kind, true) : window.lo();
  const Rational wr = window.hi_infinite() ? clip_edge(mu, f, t, kind, false) : window.hi();
  if (!(wl < wr)) throw PreconditionViolated("superlevel set: empty window");

  if (level_value(mu, f, wl, kind) > t || level_value(mu, f, wr, kind) > t)
    throw WindowTooSmall("superlevel set: value above the level at a window edge");

  if (kind == LevelKind::function_itself) {
    const std::vector<Interval> win{Interval::closed(wl, wr)};
    return interval_intersect(f.strict_superlevel(t), win);
  }

  // classification mesh: window edges, candidates inside, then two rounds of
  // midpoint refinement so short components between candidates are seen
  std::vector<Rational> mesh{wl, wr};
  for (const auto& c : candidate_points(mu, f))
    if (wl < c && c < wr) mesh.push_back(c);
  std::sort(mesh.begin(), mesh.end());
  for (int round = 0; round < 2; ++round) {
    std::vector<Rational> refined;
    refined.reserve(mesh.size() * 2);
    for (size_t i = 0; i < mesh.size(); ++i) {
      if (i > 0) refined.push_back((mesh[i - 1] + mesh[i]) / 2);
      refined.push_back(mesh[i]);
    }
    mesh = std::move(refined);
  }

  std::vector<bool> above(mesh.size());
  for (size_t i = 0; i < mesh.size(); ++i) above[i] = level_value(mu, f, mesh[i], kind) > t;

  const Rational rtol(tol);
  // Locate the level crossing inside a bracket whose ends classify
  // differently. Mesh gaps contain no candidate points, so along the bracket
  // the measure and integral of a witness with one end pinned to the query
  // are affine — solve t*mu - integral = 0 exactly and verify; only fall
  // back to bisection when the witness shape gives no usable equation.
  auto locate = [&](Rational lo, Rational hi, bool above_lo) -> Rational {
    const Rational above_end = above_lo ? lo : hi;
    const MaximalValue av = level_eval(mu, f, above_end, kind);
    if (av.witness.has_value()) {
      const Interval& w = *av.witness;
      const bool moving_lo = !w.lo_infinite() && w.lo() == above_end;
      const bool moving_hi = !moving_lo && !w.hi_infinite() && w.hi() == above_end;
      if (moving_lo || moving_hi) {
        auto gap_at = [&](const Rational& s) -> std::optional<Rational> {
          try {
            const Interval I =
                moving_lo
                    ? Interval(s, w.hi_infinite() ? std::optional<Rational>{} : w.hi(),
                               w.lo_closed(), w.hi_closed())
                    : Interval(w.lo_infinite() ? std::optional<Rational>{} : w.lo(), s,
                               w.lo_closed(), w.hi_closed());
            const ExtendedNonneg m = measure_of(mu, I);
            if (m.is_infinite()) return std::nullopt;
            return t * m.value() - integral_of(mu, f, I);
          } catch (const std::invalid_argument&) {
            return std::nullopt;  // the moving end slid past the fixed one
          }
        };
        const auto g_lo = gap_at(lo), g_hi = gap_at(hi);
        if (g_lo && g_hi && *g_lo != *g_hi) {
          const Rational root = lo - *g_lo * (hi - lo) / (*g_hi - *g_lo);
          if (lo <= root && root <= hi && level_value(mu, f, root, kind) == t) return root;
        }
      }
    }
    while (hi - lo > rtol) {
      const Rational mid = (lo + hi) / 2;
      if ((level_value(mu, f, mid, kind) > t) == above_lo)
        lo = mid;
      else
        hi = mid;
    }
    return (lo + hi) / 2;
  };

  std::vector<Interval> out;
  std::optional<Rational> open_at;
  for (size_t i = 1; i < mesh.size(); ++i) {
    if (above[i] == above[i - 1]) continue;
    Rational b = locate(mesh[i - 1], mesh[i], above[i - 1]);
    if (above[i]) {
      open_at = std::move(b);
    } else {
      if (!open_at.has_value()) throw std::logic_error("superlevel set: unbalanced crossings");
      if (*open_at < b) out.push_back(Interval::open(*open_at, b));
      open_at.reset();
    }
  }
  if (open_at.has_value()) throw std::logic_error("superlevel set: component reaches the edge");
  return out;
}

// ---- fast double-precision evaluator ---------------------------------------

MaximalEvaluator::MaximalEvaluator(const Measure& mu, const StepFunction& f) {
  const std::vector<Rational> pos = candidate_points(mu, f);
  const CumTables T = build_cumulative(mu, f, pos);
  const size_t m = pos.size();
  pos_.resize(m);
  mex_.resize(m);
  mi_.resize(m);
  fex_.resize(m);
  fi_.resize(m);
  for (size_t i = 0; i < m; ++i) {
    pos_[i] = to_double(pos[i]);
    mex_[i] = to_double(T.mex[i]);
    mi_[i] = to_double(T.mi[i]);
    fex_[i] = to_double(T.fex[i]);
    fi_[i] = to_double(T.fi[i]);
  }
  rho_.resize(m + 1);
  fval_.resize(m + 1);
  rho_[0] = to_double(mu.left_tail_density());
  fval_[0] = 0.0;
  for (size_t i = 1; i < m; ++i) {
    const Rational mid = (pos[i - 1] + pos[i]) / 2;
    rho_[i] = to_double(mu.density_at(mid));
    fval_[i] = to_double(f.value_at(mid));
  }
  rho_[m] = to_double(mu.right_tail_density());
  fval_[m] = 0.0;
  left_ray_ok_ = (mu.left_tail_density() == 0);
  right_ray_ok_ = (mu.right_tail_density() == 0);
}

double MaximalEvaluator::operator()(double x) const {
  const size_t m = pos_.size();
  const size_t jx =
      static_cast<size_t>(std::lower_bound(pos_.begin(), pos_.end(), x) - pos_.begin());
  const bool at_candidate = (jx < m && pos_[jx] == x);

  // cumulative (measure, integral) at the virtual point x
  double mx, fx;
  if (at_candidate) {
    mx = mex_[jx];
    fx = fex_[jx];
  } else if (jx == 0) {
    mx = -rho_[0] * (pos_[0] - x);
    fx = 0.0;
  } else {
    mx = mi_[jx - 1] + rho_[jx] * (x - pos_[jx - 1]);
    fx = fi_[jx - 1] + fval_[jx] * rho_[jx] * (x - pos_[jx - 1]);
  }

  double best = 0.0;
  auto run_highs = [&](double lm, double lf) {
    auto consider = [&](double hm, double hf) {
      const double den = hm - lm;
      if (den > 0.0) {
        const double v = (hf - lf) / den;
        if (v > best) best = v;
      }
    };
    if (at_candidate)
      consider(mi_[jx], fi_[jx]);  // closed at x; reaches the atom singleton
    else
      consider(mx, fx);  // x as the high end of (a, x]
    for (size_t j = (at_candidate ? jx + 1 : jx); j < m; ++j) {
      consider(mex_[j], fex_[j]);
      consider(mi_[j], fi_[j]);
    }
    // right ray: only new when x sits beyond the last candidate; elsewhere it
    // duplicates the closed end at pos[m-1]
    if (right_ray_ok_) consider(mi_[m - 1], fi_[m - 1]);
  };

  run_highs(at_candidate ? mex_[jx] : mx, at_candidate ? fex_[jx] : fx);
  for (size_t i = 0; i < jx; ++i) {
    run_highs(mex_[i], fex_[i]);
    run_highs(mi_[i], fi_[i]);
  }
  // the left ray duplicates the closed end at pos[0] (or the virtual x when
  // x lies below pos[0] over a zero-density tail), so nothing to add
  return best;
}

}  // namespace maxlab
