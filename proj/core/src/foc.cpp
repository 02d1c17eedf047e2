#include "gennv/foc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "gennv/error.hpp"

namespace gennv {
namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double ipow(double x, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= x;
  return r;
}

std::vector<double> scan_grid(double q_max, int points) {
  const int half = std::max(2, points / 2);
  std::vector<double> grid;
  grid.reserve(2 * half + 1);
  const double q_min = q_max * 1e-9;
  const double ratio = std::pow(q_max / q_min, 1.0 / (half - 1));
  double q = q_min;
  for (int i = 0; i < half; ++i, q *= ratio) grid.push_back(q);
  for (int i = 1; i <= half; ++i) grid.push_back(q_max * i / half);
  grid.push_back(q_max);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  while (!grid.empty() && grid.back() > q_max) grid.pop_back();
  return grid;
}

struct Bracket {
  double lo, hi;
};

// Sign-change brackets of f on the grid, refined by bisection.
std::vector<double> scan_and_bisect(const std::function<double(double)>& f, double q_max, int points,
                                    double tol, bool relative_tol) {
  const auto grid = scan_grid(q_max, points);
  std::vector<double> roots;
  double prev_q = grid.front();
  double prev_f = f(prev_q);
  if (prev_f == 0.0) roots.push_back(prev_q);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double q = grid[i];
    const double fq = f(q);
    if (fq == 0.0) {
      roots.push_back(q);
    } else if (sign_of(prev_f) * sign_of(fq) < 0) {
      double a = prev_q, b = q, fa = prev_f;
      int it = 0;
      for (; it < 500; ++it) {
        const double mid = 0.5 * (a + b);
        const double width_tol = relative_tol ? tol * (1.0 + mid) : tol;
        if (b - a < width_tol || mid <= a || mid >= b) break;
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (sign_of(fm) == sign_of(fa)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      if (it == 500) {
        std::ostringstream os;
        os.precision(17);
        os << "bisection did not converge in bracket [" << prev_q << ", " << q << "], last [" << a << ", " << b
           << "]";
        throw NonConvergence(os.str());
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_q = q;
    prev_f = fq;
  }
  return roots;
}

double default_q_max(const DemandModel& model) {
  if (const auto* u = std::get_if<UniformDemand>(&model.variant())) return u->upper;
  if (const auto* e = std::get_if<ExponentialDemand>(&model.variant())) return 27.6 / e->rate;
  throw UnsupportedOperation("population solver requires parametric demand");
}

RootReport finish_report(std::vector<double> roots, const SeverityCost& cost,
                         const std::function<double(double)>& g,
                         const std::function<double(double)>& expected, double q_max, double tol,
                         SelectPolicy select, ExistenceVerdict verdict_if_none) {
  RootReport r;
  r.roots = std::move(roots);
  std::sort(r.roots.begin(), r.roots.end());
  r.critical_ratio = critical_ratio(cost);
  r.q_max = q_max;
  r.select = select;
  if (r.roots.empty()) {
    r.existence = verdict_if_none;
    r.reason = "no sign change of the first-order condition on (0, q_max]";
    return r;
  }
  double best = r.roots.back();
  double best_cost = expected(best);
  for (double q : r.roots) {
    const double c = expected(q);
    if (c < best_cost) {
      best_cost = c;
      best = q;
    }
  }
  r.cost_min_root = best;
  r.selected = (select == SelectPolicy::max_root) ? r.roots.back() : best;

  const double q = *r.selected;
  r.residual = std::abs(g(q));
  r.scaled_residual = r.residual / (1.0 + std::abs(g(0.0)) + std::abs(g(q_max)));
  if (r.scaled_residual > 1e-8) {
    std::ostringstream os;
    os.precision(17);
    os << "scaled residual " << r.scaled_residual << " at Q=" << q << " exceeds 1e-8";
    throw NonConvergence(os.str());
  }
  const double eps = 10.0 * tol * (1.0 + q);
  const double c0 = expected(q);
  const double slack = 1e-12 * (1.0 + std::abs(c0));
  r.local_minimum = c0 <= expected(q + eps) + slack && (q - eps <= 0.0 || c0 <= expected(q - eps) + slack);
  r.existence = (cost.m() % 2 == 1) ? ExistenceVerdict::guaranteed : ExistenceVerdict::conditional_satisfied;
  r.reason = (cost.m() % 2 == 1) ? "odd m: a positive root always exists"
                                 : "even m: sign change of the first-order condition observed";
  return r;
}

}  // namespace

std::string to_string(SelectPolicy s) { return s == SelectPolicy::max_root ? "max" : "cost-min"; }

SelectPolicy parse_select_policy(const std::string& s) {
  if (s == "max") return SelectPolicy::max_root;
  if (s == "cost-min") return SelectPolicy::cost_min;
  throw InvalidArgument("unknown root selection policy '" + s + "' (expected max or cost-min)");
}

std::string to_string(ExistenceVerdict v) {
  switch (v) {
    case ExistenceVerdict::guaranteed:
      return "guaranteed";
    case ExistenceVerdict::conditional_satisfied:
      return "conditional-satisfied";
    case ExistenceVerdict::conditional_violated:
      return "conditional-violated";
  }
  return "unknown";
}

FocCoefficients beta_coefficients(const DemandModel& model, const SeverityCost& cost, double q) {
  const int m = cost.m();
  const double k = critical_ratio(cost);
  const double sign = (m % 2 == 1) ? 1.0 : -1.0;
  FocCoefficients out;
  out.at_q = q;
  out.betas.resize(m);
  for (int j = 0; j < m; ++j) {
    out.betas[j] = static_cast<double>(binomial(m - 1, j)) *
                   (partial_raw_moment(model, j, q) - sign * k * raw_moment(model, j));
  }
  return out;
}

double foc_residual(const DemandModel& model, const SeverityCost& cost, double q) {
  const auto b = beta_coefficients(model, cost, q);
  const int m = cost.m();
  double s = 0.0;
  for (int j = 0; j < m; ++j) {
    const double term = b.betas[j] * ipow(q, m - 1 - j);
    s += (j % 2 == 0) ? term : -term;
  }
  return s;
}

ExistenceVerdict check_existence(const SeverityCost& cost, const FocCoefficients& betas) {
  if (cost.m() % 2 == 1) return ExistenceVerdict::guaranteed;
  for (std::size_t j = 0; j + 1 < betas.betas.size(); ++j) {
    if (sign_of(betas.betas[j]) != 0 && sign_of(betas.betas[j]) == sign_of(betas.betas[j + 1])) {
      return ExistenceVerdict::conditional_satisfied;
    }
  }
  return ExistenceVerdict::conditional_violated;
}

RootReport solve_population_foc(const DemandModel& model, const SeverityCost& cost, const SolveOptions& options) {
  if (!model.is_parametric()) throw UnsupportedOperation("population solver requires parametric demand");
  if (!(options.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (options.grid < 4) throw InvalidArgument("grid must have at least 4 points");
  const double q_max = options.q_max.value_or(default_q_max(model));
  if (!(q_max > 0.0) || !std::isfinite(q_max)) throw InvalidArgument("q_max must be finite and positive");

  auto g = [&](double q) { return foc_residual(model, cost, q); };
  auto ec = [&](double q) { return expected_cost(model, cost, q); };
  auto roots = scan_and_bisect(g, q_max, options.grid, options.tol, !model.has_bounded_support());
  const auto verdict = check_existence(cost, beta_coefficients(model, cost, q_max));
  return finish_report(std::move(roots), cost, g, ec, q_max, options.tol, options.select, verdict);
}

double uniform_closed_form(int m, double lambda) {
  if (m < 1) throw InvalidArgument("m must be positive");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  return 1.0 / (1.0 + std::pow(lambda, 1.0 / m));
}

double exp_foc_residual(const SeverityCost& cost, double q) {
  const int m = cost.m();
  double lhs = 0.0;
  for (int j = 0; j < m; ++j) {
    const int p = m - 1 - j;
    double term = 1.0;
    for (int i = 1; i <= p; ++i) term *= q / i;  // q^p / p!
    lhs += (j % 2 == 0) ? term : -term;
  }
  const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
  const double rhs = std::exp(-q) * (cost.shortage_cost() / cost.excess_cost() - sign_m);
  return lhs - rhs;
}

RootReport exp_solve(const SeverityCost& cost, double tol, double q_max) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  const auto model = DemandModel::exponential(1.0);
  auto g = [&](double q) { return exp_foc_residual(cost, q); };
  auto ec = [&](double q) { return expected_cost(model, cost, q); };
  auto roots = scan_and_bisect(g, q_max, 4096, tol, true);
  const auto verdict = check_existence(cost, beta_coefficients(model, cost, q_max));
  return finish_report(std::move(roots), cost, g, ec, q_max, tol, SelectPolicy::max_root, verdict);
}

}  // namespace gennv
