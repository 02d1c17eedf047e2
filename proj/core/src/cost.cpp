#include "gennv/cost.hpp"

#include <array>
#include <cmath>

#include "gennv/error.hpp"

namespace gennv {
namespace {

constexpr int kMaxBinomialRow = 2 * kMaxSeverity;

using BinomialTable = std::array<std::array<std::uint64_t, kMaxBinomialRow + 1>, kMaxBinomialRow + 1>;

constexpr BinomialTable make_binomials() {
  BinomialTable t{};
  for (int n = 0; n <= kMaxBinomialRow; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
  }
  return t;
}

constexpr BinomialTable kBinomials = make_binomials();

double ipow(double x, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= x;
  return r;
}

}  // namespace

SeverityCost::SeverityCost(int m, double excess_cost, double shortage_cost)
    : m_(m), excess_(excess_cost), shortage_(shortage_cost) {
  if (m < 1 || m > kMaxSeverity) {
    throw InvalidArgument("severity degree m must lie in [1, " + std::to_string(kMaxSeverity) + "]");
  }
  if (!(excess_cost > 0.0) || !std::isfinite(excess_cost) || !(shortage_cost > 0.0) ||
      !std::isfinite(shortage_cost)) {
    throw InvalidArgument("unit costs C_e and C_s must be finite and positive");
  }
  if (excess_cost == shortage_cost) {
    throw InvalidArgument("excess and shortage costs must differ (C_e != C_s, lambda != 1)");
  }
}

SeverityCost SeverityCost::from_ratio(int m, double lambda) { return SeverityCost(m, lambda, 1.0); }

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxBinomialRow) throw InvalidArgument("binomial row out of range");
  if (k < 0 || k > n) return 0;
  return kBinomials[n][k];
}

double critical_ratio(const SeverityCost& c) {
  const double sign = (c.m() % 2 == 1) ? 1.0 : -1.0;  // (-1)^{m-1}
  const double denom = c.excess_cost() + sign * c.shortage_cost();
  if (denom == 0.0) throw SingularCriticalRatio("critical ratio undefined: C_e - C_s == 0 for even m");
  return c.shortage_cost() / denom;
}

double cost(const SeverityCost& c, double q, double x) {
  if (x <= q) return c.excess_cost() * ipow(q - x, c.m());
  return c.shortage_cost() * ipow(x - q, c.m());
}

double expected_cost(const DemandModel& model, const SeverityCost& c, double q) {
  const int m = c.m();
  double excess = 0.0;
  double shortage = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double b = static_cast<double>(binomial(m, k));
    const double qpow = ipow(q, m - k);
    const double partial = partial_raw_moment(model, k, q);
    const double full = raw_moment(model, k);
    // (Q - x)^m = sum_k C(m,k) Q^{m-k} (-1)^k x^k ; (x - Q)^m = sum_k C(m,k) (-Q)^{m-k} x^k
    excess += b * qpow * ((k % 2 == 0) ? partial : -partial);
    shortage += b * qpow * (((m - k) % 2 == 0) ? 1.0 : -1.0) * (full - partial);
  }
  return c.excess_cost() * excess + c.shortage_cost() * shortage;
}

double empirical_expected_cost(std::span<const double> sample, const SeverityCost& c, double q) {
  if (sample.empty()) throw InvalidArgument("empirical cost requires a non-empty sample");
  double s = 0.0;
  for (double x : sample) s += cost(c, q, x);
  return s / static_cast<double>(sample.size());
}

}  // namespace gennv
