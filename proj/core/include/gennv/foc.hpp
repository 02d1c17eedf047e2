#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gennv/cost.hpp"
#include "gennv/demand.hpp"

namespace gennv {

enum class SelectPolicy { max_root, cost_min };

std::string to_string(SelectPolicy s);
SelectPolicy parse_select_policy(const std::string& s);

// beta_j = C(m-1, j) [delta_j(Q) - (-1)^{m-1} k_m mu'_j], j = 0..m-1.
struct FocCoefficients {
  std::vector<double> betas;
  double at_q = 0.0;
};

enum class ExistenceVerdict { guaranteed, conditional_satisfied, conditional_violated };

std::string to_string(ExistenceVerdict v);

struct RootReport {
  std::vector<double> roots;  // sorted ascending
  std::optional<double> selected;
  std::optional<double> cost_min_root;
  SelectPolicy select = SelectPolicy::max_root;
  double residual = 0.0;         // |g(selected)|
  double scaled_residual = 0.0;  // |g(selected)| / (1 + |g(0)| + |g(q_max)|)
  double critical_ratio = 0.0;
  double q_max = 0.0;
  bool local_minimum = false;  // expected cost does not decrease at selected +/- 10 tol
  ExistenceVerdict existence = ExistenceVerdict::guaranteed;
  std::string reason;

  bool exists() const noexcept { return selected.has_value(); }
};

struct SolveOptions {
  std::optional<double> q_max;  // default: support upper bound, or 27.6 / rate
  double tol = 1e-10;
  int grid = 4096;
  SelectPolicy select = SelectPolicy::max_root;
};

FocCoefficients beta_coefficients(const DemandModel& model, const SeverityCost& cost, double q);

// g(Q) = sum_j (-1)^j beta_j(Q) Q^{m-1-j}; d/dQ E[C_m] = m (C_s / k_m) g(Q).
double foc_residual(const DemandModel& model, const SeverityCost& cost, double q);

// Odd m: guaranteed. Even m: satisfied iff two consecutive betas share a strict sign.
ExistenceVerdict check_existence(const SeverityCost& cost, const FocCoefficients& betas);

/// Population optimum for parametric demand: grid scan of g on (0, q_max]
/// (geometric near zero, linear elsewhere) followed by bisection of every
/// sign-change bracket. Throws NonConvergence when the selected root fails the
/// scaled residual check.
RootReport solve_population_foc(const DemandModel& model, const SeverityCost& cost,
                                const SolveOptions& options = {});

// 1 / (1 + lambda^{1/m}), the Uniform(0, 1) optimum.
double uniform_closed_form(int m, double lambda);

// Exp(1) first-order condition:
// sum_{j<m} (-1)^j Q^{m-1-j} / (m-1-j)!  -  e^{-Q} [C_s / C_e - (-1)^m].
double exp_foc_residual(const SeverityCost& cost, double q);

RootReport exp_solve(const SeverityCost& cost, double tol = 1e-10, double q_max = 27.6);

}  // namespace gennv
