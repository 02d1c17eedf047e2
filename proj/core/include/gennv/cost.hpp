#pragma once

#include <cstdint>
#include <span>

#include "gennv/demand.hpp"

namespace gennv {

inline constexpr int kMaxSeverity = 30;

/// Polynomial severity cost: C_e (Q - x)^m for x <= Q, C_s (x - Q)^m otherwise.
///
/// Requires 1 <= m <= kMaxSeverity, finite positive C_e and C_s, and C_e != C_s.
/// The cost ratio lambda = C_e / C_s is derived on demand, never stored.
class SeverityCost {
 public:
  SeverityCost(int m, double excess_cost, double shortage_cost);

  // C_s = 1, C_e = lambda.
  static SeverityCost from_ratio(int m, double lambda);

  int m() const noexcept { return m_; }
  double excess_cost() const noexcept { return excess_; }
  double shortage_cost() const noexcept { return shortage_; }
  double lambda() const noexcept { return excess_ / shortage_; }

 private:
  int m_;
  double excess_;
  double shortage_;
};

// Exact binomial coefficient, n <= 2 * kMaxSeverity.
std::uint64_t binomial(int n, int k);

// k_m = C_s / (C_e + (-1)^{m-1} C_s).
double critical_ratio(const SeverityCost& cost);

double cost(const SeverityCost& cost, double q, double x);

// E[C_m(Q, X)] by binomial expansion into partial and full raw moments.
double expected_cost(const DemandModel& model, const SeverityCost& cost, double q);

// (1/n) sum_i C_m(Q, x_i).
double empirical_expected_cost(std::span<const double> sample, const SeverityCost& cost, double q);

}  // namespace gennv
