#include "maxlab/coverings.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "maxlab/errors.hpp"
#include "maxlab/maximal.hpp"

namespace maxlab {

namespace {

// Walk leftward from `hi`, tracking g(s) = t*mu(I_s) - integral_{I_s} f dmu
// for I_s = (s, hi) (or (s, hi] when hi_closed), and return the first s with
// g(s) = 0 and mu(I_s) > 0. Between structure points g is affine in s, so
// each region needs one exact sign check; atoms jump g when the moving end
// passes them. A region where the average is identically t yields its far
// endpoint (the deterministic maximal extension).
Rational solve_leftward(const Measure& mu, const StepFunction& f, const Rational& hi,
                        bool hi_closed, const Rational& t) {
  std::vector<Rational> pts;
  for (const auto& c : candidate_points(mu, f))
    if (c < hi) pts.push_back(c);
  std::reverse(pts.begin(), pts.end());

  Rational g(0), mass(0);
  if (hi_closed) {
    const Rational w = mu.atom_weight_at(hi);
    g = w * (t - f.value_at(hi));
    mass = w;
  }
  Rational cur = hi;
  for (size_t k = 0; k <= pts.size(); ++k) {
    const bool tail = (k == pts.size());
    const Rational probe = tail ? Rational(cur - 1) : Rational((pts[k] + cur) / 2);
    const Rational rho = mu.density_at(probe);
    if (tail) {
      // unbounded region, f vanishes: g(s) = g + t*rho*(cur - s)
      if (rho > 0 && g < 0) return cur + g / (t * rho);
      throw NoSolution("average equation: no crossing before the walk left the structure");
    }
    const Rational& p = pts[k];
    if (rho > 0) {
      const Rational v = f.value_at(probe);
      if (v == t && g == 0) return p;
      const Rational g_far = g + (t - v) * rho * (cur - p);
      if ((g < 0 && g_far > 0) || (g > 0 && g_far < 0)) return cur + g / ((t - v) * rho);
      g = g_far;
      mass += rho * (cur - p);
    }
    // s = p leaves any atom at p outside the open low end
    if (g == 0 && mass > 0) return p;
    const Rational w = mu.atom_weight_at(p);
    if (w > 0) {
      g += w * (t - f.value_at(p));
      mass += w;
    }
    cur = p;
  }
  throw NoSolution("average equation: unreachable");
}

Rational solve_rightward(const Measure& mu, const StepFunction& f, const Rational& lo,
                         bool lo_closed, const Rational& t) {
  return -solve_leftward(reflected(mu), reflected(f), -lo, lo_closed, t);
}

Rational exact_average(const Measure& mu, const StepFunction& f, const Interval& I) {
  return average(mu, f, I);
}

// Open cores of the superlevel pieces, kept as endpoint pairs. Singletons
// survive only when they sit on an atom (they carry mass and must be
// covered); the flag marks pieces whose closure holds an atom with f above
// the level, which routes them to the anchored pass.
struct Piece {
  Rational lo, hi;      // lo == hi for an atom singleton
  bool atom_inside = false;
  bool atom_at_hi = false;  // the piece's right endpoint is such an atom
};

std::vector<Piece> superlevel_pieces(const Measure& mu, const StepFunction& f,
                                     const Rational& t) {
  const std::vector<Interval> S =
      interval_intersect(f.strict_superlevel(t), support_of(mu));
  std::vector<Piece> pieces;
  for (const auto& I : S) {
    Piece pc;
    if (I.is_singleton()) {
      if (mu.atom_weight_at(I.lo()) == 0) continue;  // mass-free point, coverage-exempt
      pc.lo = pc.hi = I.lo();
      pc.atom_inside = pc.atom_at_hi = true;
    } else {
      pc.lo = I.lo();
      pc.hi = I.hi();
      for (const auto& a : mu.atoms()) {
        if (pc.lo <= a.position && a.position <= pc.hi && f.value_at(a.position) > t) {
          pc.atom_inside = true;
          if (a.position == pc.hi) pc.atom_at_hi = true;
        }
      }
    }
    pieces.push_back(std::move(pc));
  }
  return pieces;
}

bool inside_some_piece(const std::vector<Piece>& pieces, const Rational& s) {
  for (const auto& pc : pieces)
    if (pc.lo < s && s < pc.hi) return true;
  return false;
}

struct Chain {
  Interval ball;
  Rational reach;  // far end of the merged ball, for coverage bookkeeping
};

Chain chain_leftward(const Measure& mu, const StepFunction& f, const Rational& t,
                     const Rational& start_hi, bool start_closed,
                     const std::vector<Piece>& pieces) {
  const long cap = static_cast<long>(pieces.size()) + 1;
  Rational s = solve_leftward(mu, f, start_hi, start_closed, t);
  long links = 1;
  // a landing inside the superlevel set would leave part of a piece exposed:
  // keep solving from there; adjacent exact-average balls merge exactly
  while (inside_some_piece(pieces, s)) {
    if (++links > cap)
      throw NoSolution("covering: the chain exceeded the superlevel component count");
    const bool closed = mu.atom_weight_at(s) > 0;  // keep the union seamless across an atom
    s = solve_leftward(mu, f, s, closed, t);
  }
  Chain out{Interval(s, start_hi, false, start_closed), s};
  if (exact_average(mu, f, out.ball) != t)
    throw std::logic_error("covering: merged ball average drifted off the level");
  return out;
}

Chain chain_rightward(const Measure& mu, const StepFunction& f, const Rational& t,
                      const Rational& start_lo, const std::vector<Piece>& pieces) {
  const Measure rmu = reflected(mu);
  const StepFunction rf = reflected(f);
  std::vector<Piece> rp;
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
    rp.push_back({-it->hi, -it->lo, it->atom_inside, false});
  Chain mirrored = chain_leftward(rmu, rf, t, -start_lo, false, rp);
  Chain out{Interval(start_lo, -mirrored.reach, false, false), -mirrored.reach};
  if (exact_average(mu, f, out.ball) != t)
    throw std::logic_error("covering: merged ball average drifted off the level");
  return out;
}

bool piece_covered(const Piece& pc, const Interval& ball) {
  const Rational blo = ball.lo(), bhi = ball.hi();
  if (pc.lo == pc.hi) return ball.contains(pc.lo);
  return blo <= pc.lo && pc.hi <= bhi;
}

}  // namespace

Rational solve_average_equation(const Measure& mu, const StepFunction& f, const Rational& anchor,
                                const Rational& t, SolveDirection direction) {
  if (!(t > 0)) throw PreconditionViolated("average equation: the level must be positive");
  return direction == SolveDirection::left ? solve_leftward(mu, f, anchor, false, t)
                                           : solve_rightward(mu, f, anchor, false, t);
}

SunriseReport sunrise_check(const Measure& mu, const StepFunction& f, const Rational& t,
                            double tol) {
  if (!mu.atoms().empty())
    throw PreconditionViolated("sunrise identity: the measure must have no atoms");
  if (mu.left_tail_density() == 0)
    throw PreconditionViolated("sunrise identity: the measure needs an infinite left tail");
  if (!(t > 0)) throw PreconditionViolated("sunrise identity: the level must be positive");

  SunriseReport rep;
  rep.t = t;
  rep.level_set =
      superlevel_set(mu, f, t, LevelKind::one_sided_plus, Interval::whole_line(), tol);
  Rational lhs(0), rhs(0);
  for (const auto& I : rep.level_set) {
    const ExtendedNonneg m = measure_of(mu, I);
    if (m.is_infinite())
      throw std::logic_error("sunrise identity: a located component has infinite measure");
    lhs += t * m.value();
    rhs += integral_of(mu, f, I);
  }
  rep.lhs = to_double(lhs);
  rep.rhs = to_double(rhs);
  rep.residual = to_double(abs(lhs - rhs));
  return rep;
}

CoveringFamily covering_selection(const Measure& mu, const StepFunction& f, const Rational& t) {
  if (mu.left_tail_density() == 0 || mu.right_tail_density() == 0)
    throw PreconditionViolated("covering: both tails of the measure must be infinite");
  const auto& atoms = mu.atoms();
  if (atoms.size() > 2)
    throw PreconditionViolated("covering: at most two atoms are supported");
  if (atoms.size() == 2 &&
      !measure_of(mu, Interval::open(atoms[0].position, atoms[1].position)).is_zero())
    throw PreconditionViolated("covering: mass strictly between the two atoms");
  if (!(t > 0) || !(t < f.max_value()))
    throw PreconditionViolated("covering: need 0 < t < max f");

  const std::vector<Piece> pieces = superlevel_pieces(mu, f, t);
  CoveringFamily fam;
  fam.t = t;
  std::vector<bool> covered(pieces.size(), false);

  auto mark = [&](const Interval& ball) {
    for (size_t i = 0; i < pieces.size(); ++i)
      if (!covered[i] && piece_covered(pieces[i], ball)) covered[i] = true;
  };

  // split point: pieces strictly right of the last atom solve rightward so
  // their balls never reach across the atoms
  const bool split = !atoms.empty();
  const Rational y_max = split ? atoms.back().position : Rational(0);

  // rightward passes, left to right
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (covered[i] || pieces[i].atom_inside) continue;
    if (!split || pieces[i].lo < y_max) continue;
    Chain ch = chain_rightward(mu, f, t, pieces[i].lo, pieces);
    mark(ch.ball);
    fam.balls.push_back({ch.ball, t, "right"});
  }
  // anchored passes for atom-carrying pieces, rightmost first
  for (size_t i = pieces.size(); i-- > 0;) {
    if (covered[i] || !pieces[i].atom_inside) continue;
    Chain ch = chain_leftward(mu, f, t, pieces[i].hi, pieces[i].atom_at_hi, pieces);
    mark(ch.ball);
    fam.balls.push_back({ch.ball, t, "anchored"});
  }
  // leftward passes for what remains, right to left
  for (size_t i = pieces.size(); i-- > 0;) {
    if (covered[i]) continue;
    Chain ch = chain_leftward(mu, f, t, pieces[i].hi, false, pieces);
    mark(ch.ball);
    fam.balls.push_back({ch.ball, t, "left"});
  }

  std::sort(fam.balls.begin(), fam.balls.end(),
            [](const CoveringBall& a, const CoveringBall& b) {
              return witness_before(a.ball, b.ball);
            });
  return fam;
}

CoveringFamily unimodal_covering(const Measure& mu, const StepFunction& f, const Rational& t) {
  if (!mu.atoms().empty())
    throw PreconditionViolated("unimodal covering: the measure must have no atoms");
  if (mu.left_tail_density() == 0 && mu.right_tail_density() == 0)
    throw PreconditionViolated("unimodal covering: the measure must have infinite total mass");
  const auto& vals = f.values();
  bool falling = false;
  for (size_t i = 0; i + 1 < vals.size(); ++i) {
    if (vals[i + 1] < vals[i]) falling = true;
    else if (vals[i + 1] > vals[i] && falling)
      throw PreconditionViolated("unimodal covering: the function is not unimodal");
  }
  if (!(t > 0)) throw PreconditionViolated("unimodal covering: the level must be positive");

  CoveringFamily fam;
  fam.t = t;
  std::vector<Interval> S = f.strict_superlevel(t);
  S.erase(std::remove_if(S.begin(), S.end(),
                         [](const Interval& I) { return I.is_singleton(); }),
          S.end());
  if (S.empty()) return fam;
  if (S.size() > 1)
    throw PreconditionViolated("unimodal covering: the superlevel set is not one interval");
  const Interval& comp = S.front();
  if (measure_of(mu, comp).is_zero()) return fam;  // nothing carries mass at this level

  Interval ball = Interval::whole_line();
  try {
    const Rational s = solve_leftward(mu, f, comp.hi(), false, t);
    ball = Interval::open(s, comp.hi());
  } catch (const NoSolution&) {
    const Rational s = solve_rightward(mu, f, comp.lo(), false, t);
    ball = Interval::open(comp.lo(), s);
  }
  if (exact_average(mu, f, ball) != t)
    throw std::logic_error("unimodal covering: the ball average drifted off the level");
  fam.balls.push_back({ball, t, "unimodal"});
  return fam;
}

CoveringCheck verify_covering(const CoveringFamily& family, const Measure& mu,
                              const StepFunction& f, const Rational& t, long L) {
  CoveringCheck check;

  for (size_t i = 0; i < family.balls.size(); ++i) {
    const Interval& B = family.balls[i].ball;
    const ExtendedNonneg m = measure_of(mu, B);
    if (m.is_infinite() || m.is_zero()) {
      check.averages_exact = false;
      check.failures.push_back("ball " + std::to_string(i) + " has measure " +
                               (m.is_zero() ? std::string("zero") : std::string("infinity")));
      continue;
    }
    if (average(mu, f, B) != t) {
      check.averages_exact = false;
      check.failures.push_back("ball " + std::to_string(i) + " average " +
                               to_fraction_string(average(mu, f, B)) + " != level " +
                               to_fraction_string(t));
    }
  }

  // coverage: {f > t} within supp(mu), minus the balls, may leave only
  // finitely many points, none carrying mass
  const std::vector<Interval> S = interval_intersect(f.strict_superlevel(t), support_of(mu));
  std::vector<Interval> balls;
  balls.reserve(family.balls.size());
  for (const auto& b : family.balls) balls.push_back(b.ball);
  const std::vector<Interval> leftover = interval_subtract(S, balls);
  if (!only_isolated_points(leftover)) {
    check.covers_superlevel = false;
    check.failures.push_back("uncovered superlevel portion of positive length, first: " +
                             (leftover.empty() ? std::string("?") : to_string(leftover.front())));
  } else {
    for (const auto& pt : leftover) {
      if (mu.atom_weight_at(pt.lo()) > 0) {
        check.covers_superlevel = false;
        check.failures.push_back("uncovered atom at " + to_fraction_string(pt.lo()));
      }
    }
  }

  // overlap: the count is piecewise constant on the arrangement of ball
  // endpoints, so endpoints plus midpoints decide it everywhere
  std::vector<Rational> marks;
  for (const auto& b : family.balls) {
    if (!b.ball.lo_infinite()) marks.push_back(b.ball.lo());
    if (!b.ball.hi_infinite()) marks.push_back(b.ball.hi());
  }
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  std::vector<Rational> probes = marks;
  for (size_t i = 0; i + 1 < marks.size(); ++i) probes.push_back((marks[i] + marks[i + 1]) / 2);
  if (!marks.empty()) {
    probes.push_back(marks.front() - 1);
    probes.push_back(marks.back() + 1);
  }
  for (const auto& x : probes) {
    const long n = overlap_count(family, x);
    if (n > L) {
      check.overlap_within = false;
      check.failures.push_back("overlap " + std::to_string(n) + " > " + std::to_string(L) +
                               " at " + to_fraction_string(x));
      break;
    }
  }
  return check;
}

long overlap_count(const CoveringFamily& family, const Rational& x) {
  long n = 0;
  for (const auto& b : family.balls)
    if (b.ball.contains(x)) ++n;
  return n;
}

}  // namespace maxlab
