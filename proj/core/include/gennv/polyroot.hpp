#pragma once

#include <span>
#include <vector>

namespace gennv {

/// Real univariate polynomial, coefficients in descending powers.
/// Leading exact zeros are trimmed; the zero polynomial is stored as {0}.
class Poly {
 public:
  explicit Poly(std::vector<double> descending);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

  double operator()(double x) const noexcept;
  Poly derivative() const;

 private:
  std::vector<double> coeffs_;
};

double eval(const Poly& p, double x) noexcept;

int sign_changes(std::span<const double> coeffs) noexcept;

// Descartes bound on the number of roots in the open interval (lo, hi), finite bounds.
int descartes_bound(const Poly& p, double lo, double hi);

// 1 + max_i |c_i / c_lead|; every root satisfies |x| < bound.
double cauchy_bound(const Poly& p);

// tol * sum|c_i| * max(1, |x|)^degree
double residual_bound(const Poly& p, double x, double tol) noexcept;

/// Distinct real roots in [lo, hi), sorted, each located to |dx| < tol.
///
/// Roots of the derivative (recursively) cut the interval into monotone pieces;
/// sign changes on a piece are refined by bisection, and critical points with a
/// residual within rounding of zero are reported as multiple (touch) roots.
/// Descartes counts are not used for isolation: near a multiple root the shifted
/// coefficients are rounding noise and the count can drop to zero.
/// hi (or -lo) may be infinite, in which case the Cauchy bound is used.
/// Throws DegeneratePolynomial for the zero polynomial.
std::vector<double> roots_in_interval(const Poly& p, double lo, double hi, double tol);

// Roots in (0, inf).
std::vector<double> positive_roots(const Poly& p, double tol);

}  // namespace gennv
