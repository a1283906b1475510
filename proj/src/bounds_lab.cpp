#include "maxlab/bounds_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>

#include "maxlab/errors.hpp"
#include "maxlab/norms.hpp"

namespace maxlab {

namespace {

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw PreconditionViolated("exponent p must be finite and > 1");
  }
}

}  // namespace

double lerner_constant(double p) {
  require_exponent(p);
  // written as 1 + 1/(p-1) rather than p/(p-1): multiplying the denominator
  // by L = 1 is exact in binary64, so the besicovitch(p, 1) = lerner(p)
  // identity then holds bitwise, not just up to rounding
  return std::pow(1.0 + 1.0 / (p - 1.0), 1.0 / p);
}

double besicovitch_constant(double p, long L) {
  require_exponent(p);
  if (L < 1) throw PreconditionViolated("overlap constant L must be >= 1");
  return std::pow(1.0 + 1.0 / ((p - 1.0) * static_cast<double>(L)), 1.0 / p);
}

BoundConstants constants(double p, long L) {
  return BoundConstants{p, L, lerner_constant(p), besicovitch_constant(p, L)};
}

int hadwiger_strict(int d) {
  if (d == 1) return 2;
  if (d == 2) return 5;
  throw UnsupportedDimension("strict Hadwiger number known here only for d = 1, 2");
}

ExamplePair example_discrete_atoms(const Rational& t, long N) {
  if (t <= 1) throw PreconditionViolated("example_discrete_atoms needs t > 1");
  if (N < 1) throw PreconditionViolated("example_discrete_atoms needs N >= 1");
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<size_t>(N) + 1);
  atoms.push_back({Rational(0), Rational(1) / (t - 1)});
  for (long i = 1; i <= N; ++i) {
    atoms.push_back({Rational(i), rational_pow(t, i - 1)});
  }
  return ExamplePair{Measure(std::move(atoms), {}, {Rational(0)}),
                     StepFunction::point_indicator(Rational(0))};
}

// The maximal function at atom i is t^(-i): the best interval is the ray
// reaching back to 0, with f-mass 1/(t-1) against total weight
// 1/(t-1) + (t^i - 1)/(t - 1) = t^i/(t-1). Hence
//   ratio^p = 1 + (t-1) sum_{i>=1} t^((1-p)i - 1},
// a geometric series with closed sum 1 + (t-1)/(t^p - t).
double discrete_ratio_power_closed_form(double t, double p) {
  require_exponent(p);
  return 1.0 + (t - 1.0) / (std::pow(t, p) - t);
}

double discrete_ratio_power_truncated(double t, double p, long N) {
  require_exponent(p);
  double sum = 0.0;
  for (long i = 1; i <= N; ++i) {
    sum += std::pow(t, (1.0 - p) * static_cast<double>(i) - 1.0);
  }
  return 1.0 + (t - 1.0) * sum;
}

double discrete_truncation_tail_bound(double t, double p, long N) {
  require_exponent(p);
  const double r = std::pow(t, 1.0 - p);  // < 1
  const double first = std::pow(t, (1.0 - p) * static_cast<double>(N + 1) - 1.0);
  return (t - 1.0) * first / (1.0 - r);
}

ExamplePair example_one_atom(const Rational& t) {
  if (t <= 0) throw PreconditionViolated("example_one_atom needs t > 0");
  return ExamplePair{Measure({{Rational(1), t}}, {Rational(0)}, {Rational(0), Rational(1)}),
                     StepFunction::indicator(Rational(0), Rational(1))};
}

// M f = 1 on (0,1) and 1/(t+x) at x >= 1 (witness (0, x]), so with the atom
// of weight t at 1:
//   || M f ||_p^p = 1 + t (t+1)^(-p) + int_1^inf (t+x)^(-p) dx
//                 = 1 + t (t+1)^(-p) + (t+1)^(1-p)/(p-1).
double one_atom_norm_power_closed_form(double t, double p) {
  require_exponent(p);
  return 1.0 + std::pow(t + 1.0, 1.0 - p) / (p - 1.0) + t * std::pow(t + 1.0, -p);
}

// Bounding t/(t+1) by 1 in the atom term merges it with the integral term:
// 1 + (t+1)^(1-p) (1/(p-1) + 1) = 1 + (p/(p-1)) (t+1)^(1-p).
double one_atom_norm_power_upper_bound(double t, double p) {
  require_exponent(p);
  return 1.0 + (p / (p - 1.0)) * std::pow(t + 1.0, 1.0 - p);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// theta = (start, log gaps[k], log heights[k]); exp arguments are clamped so
// a wandering simplex cannot overflow into non-finite breakpoints.
StepFunction decode_step(const std::vector<double>& theta, int k) {
  const auto bounded_exp = [](double v) { return std::exp(std::clamp(v, -20.0, 20.0)); };
  std::vector<Rational> breaks;
  breaks.reserve(static_cast<size_t>(k) + 1);
  Rational x(theta[0]);
  breaks.push_back(x);
  for (int i = 0; i < k; ++i) {
    x += Rational(bounded_exp(theta[1 + static_cast<size_t>(i)]));
    breaks.push_back(x);
  }
  std::vector<Rational> values;
  values.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    values.emplace_back(bounded_exp(theta[1 + static_cast<size_t>(k + i)]));
  }
  return StepFunction(std::move(breaks), std::move(values));
}

}  // namespace

SearchResult search_min_ratio(const Measure& mu, double p, int k_pieces, long budget,
                              std::uint64_t seed, int restarts) {
  require_exponent(p);
  if (k_pieces < 1) throw PreconditionViolated("search needs at least one piece");
  if (budget < 1) throw PreconditionViolated("search needs a positive budget");
  if (restarts < 1) throw PreconditionViolated("search needs at least one restart");

  SearchResult out;
  out.seed = seed;
  out.best_ratio = kInf;
  std::optional<StepFunction> best_f;

  const auto record = [&](double ratio, const StepFunction& f) {
    if (ratio < out.best_ratio) {
      out.best_ratio = ratio;
      best_f = f;
      out.history.emplace_back(out.evaluations, ratio);
    }
  };

  // Ratio at the working tolerance; any failure (degenerate f, uncertifiable
  // tail) is an infeasible point, not an error.
  const auto objective = [&](const StepFunction& f) -> double {
    ++out.evaluations;
    try {
      const double r = lp_ratio(mu, f, p, 1e-7).value;
      record(r, f);
      return r;
    } catch (const std::exception&) {
      return kInf;
    }
  };

  // Atomic collapse is a known minimizing direction: seed the pool with the
  // point indicators the simplex could only reach in the limit.
  for (const Atom& a : mu.atoms()) {
    if (out.evaluations >= budget) break;
    objective(StepFunction::point_indicator(a.position));
  }

  const int dim = 2 * k_pieces + 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u_start(-2.0, 2.0);
  std::uniform_real_distribution<double> u_gap(-2.0, 1.0);
  std::uniform_real_distribution<double> u_height(-1.0, 1.0);

  const long share = std::max(1L, (budget - out.evaluations) / restarts);
  const auto eval_theta = [&](const std::vector<double>& theta) {
    return objective(decode_step(theta, k_pieces));
  };

  for (int run = 0; run < restarts && out.evaluations < budget; ++run) {
    const long stop_at = std::min(budget, out.evaluations + share);

    std::vector<double> origin(static_cast<size_t>(dim));
    origin[0] = u_start(rng);
    for (int i = 0; i < k_pieces; ++i) origin[1 + static_cast<size_t>(i)] = u_gap(rng);
    for (int i = 0; i < k_pieces; ++i)
      origin[1 + static_cast<size_t>(k_pieces + i)] = u_height(rng);

    // Initial simplex: origin plus a unit-ish step along each coordinate.
    std::vector<std::vector<double>> pts(static_cast<size_t>(dim) + 1, origin);
    for (int i = 0; i < dim; ++i) pts[static_cast<size_t>(i) + 1][static_cast<size_t>(i)] += 0.5;
    std::vector<double> vals;
    vals.reserve(pts.size());
    for (const auto& pt : pts) {
      vals.push_back(out.evaluations < stop_at ? eval_theta(pt) : kInf);
    }

    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    while (out.evaluations < stop_at) {
      std::vector<size_t> order(pts.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vals[a] < vals[b]; });
      const size_t lo = order.front(), hi = order.back(), next_hi = order[order.size() - 2];
      if (std::isfinite(vals[hi]) && vals[hi] - vals[lo] < 1e-10) break;

      std::vector<double> centroid(static_cast<size_t>(dim), 0.0);
      for (size_t i : order) {
        if (i == hi) continue;
        for (int d = 0; d < dim; ++d) centroid[static_cast<size_t>(d)] += pts[i][static_cast<size_t>(d)];
      }
      for (double& c : centroid) c /= static_cast<double>(dim);

      const auto blend = [&](double w) {
        std::vector<double> pt(static_cast<size_t>(dim));
        for (int d = 0; d < dim; ++d) {
          const auto s = static_cast<size_t>(d);
          pt[s] = centroid[s] + w * (pts[hi][s] - centroid[s]);
        }
        return pt;
      };

      const auto reflected_pt = blend(-alpha);
      const double fr = eval_theta(reflected_pt);
      if (fr < vals[lo]) {
        const auto expanded = blend(-alpha * gamma);
        const double fe = out.evaluations < stop_at ? eval_theta(expanded) : kInf;
        pts[hi] = fe < fr ? expanded : reflected_pt;
        vals[hi] = std::min(fe, fr);
      } else if (fr < vals[next_hi]) {
        pts[hi] = reflected_pt;
        vals[hi] = fr;
      } else {
        const auto contracted = fr < vals[hi] ? blend(-alpha * rho) : blend(rho);
        const double fc = out.evaluations < stop_at ? eval_theta(contracted) : kInf;
        if (fc < std::min(fr, vals[hi])) {
          pts[hi] = contracted;
          vals[hi] = fc;
        } else {
          for (size_t i : order) {
            if (i == lo) continue;
            for (int d = 0; d < dim; ++d) {
              const auto s = static_cast<size_t>(d);
              pts[i][s] = pts[lo][s] + sigma * (pts[i][s] - pts[lo][s]);
            }
            vals[i] = out.evaluations < stop_at ? eval_theta(pts[i]) : kInf;
          }
        }
      }
    }
  }

  if (!best_f) throw NoSolution("search found no feasible step function");
  out.best_f = *best_f;
  // Settle the reported minimum at a tighter tolerance than the search ran at.
  try {
    out.best_ratio = lp_ratio(mu, out.best_f, p, 1e-9).value;
  } catch (const std::exception&) {
    // keep the search-tolerance value
  }
  return out;
}

std::vector<HolderRow> holder_experiment(const Measure& mu, const std::vector<double>& p_list,
                                         const std::vector<double>& r_list, int k_pieces,
                                         long budget, std::uint64_t seed) {
  std::map<double, double> est;
  const auto estimate = [&](double q) {
    auto it = est.find(q);
    if (it == est.end()) {
      it = est.emplace(q, search_min_ratio(mu, q, k_pieces, budget, seed).best_ratio).first;
    }
    return it->second;
  };
  std::vector<HolderRow> rows;
  for (double p : p_list) {
    for (double r : r_list) {
      HolderRow row;
      row.p = p;
      row.r = r;
      row.est_p = estimate(p);
      row.est_r = estimate(r);
      row.est_p_powered = std::pow(row.est_p, p / r);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace maxlab
