#include "gennv/polyroot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gennv/error.hpp"

namespace gennv {
namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Coefficients (descending) of p(lo + (hi - lo) s).
std::vector<double> affine_substitute(std::span<const double> c, double lo, double width) {
  // Taylor shift by lo (Horner scheme on the ascending copy), then scale by width.
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<double> a(c.rbegin(), c.rend());  // ascending
  for (int i = 0; i < d; ++i) {
    for (int k = d - 1; k >= i; --k) a[k] += lo * a[k + 1];
  }
  double scale = 1.0;
  for (int k = 0; k <= d; ++k) {
    a[k] *= scale;
    scale *= width;
  }
  return {a.rbegin(), a.rend()};
}

double bisect(const Poly& f, double a, double b, double fa, double width) {
  for (int it = 0; it < 400 && b - a > width; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == sign_of(fa)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return std::abs(fa) <= std::abs(f(b)) ? a : b;
}

// All roots of p in [a, b]. The critical points of p (roots of p', found
// recursively) split [a, b] into pieces on which p is monotone, so each sign
// change brackets exactly one root. A critical point whose residual is within
// rounding of zero is an even-multiplicity (touch) root, which no sign test
// can see.
std::vector<double> all_roots(const Poly& p, double a, double b, double tol) {
  const int d = p.degree();
  std::vector<double> out;
  if (d == 0) return out;
  const double width = tol / d;
  if (d == 1) {
    const double x = -p.coeffs()[1] / p.coeffs()[0];
    if (x >= a && x <= b) out.push_back(x);
    return out;
  }
  const auto crit = all_roots(p.derivative(), a, b, tol);
  std::vector<double> cuts;
  cuts.reserve(crit.size() + 2);
  cuts.push_back(a);
  for (double c : crit) {
    if (c > cuts.back()) cuts.push_back(c);
  }
  if (b > cuts.back()) cuts.push_back(b);

  std::vector<double> values(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) values[i] = p(cuts[i]);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const bool interior = i > 0 && i + 1 < cuts.size();
    if (values[i] == 0.0 || (interior && std::abs(values[i]) <= residual_bound(p, cuts[i], tol))) {
      out.push_back(cuts[i]);
    }
    if (i + 1 < cuts.size() && sign_of(values[i]) * sign_of(values[i + 1]) < 0) {
      out.push_back(bisect(p, cuts[i], cuts[i + 1], values[i], width));
    }
  }
  std::sort(out.begin(), out.end());

  // Points inside one flat cluster (p within rounding of zero between them)
  // are the same multiple root; keep the one with the smallest residual.
  std::vector<double> merged;
  for (double r : out) {
    if (!merged.empty()) {
      const double prev = merged.back();
      const double mid = 0.5 * (prev + r);
      if (r - prev < tol || std::abs(p(mid)) <= residual_bound(p, mid, tol)) {
        if (std::abs(p(r)) < std::abs(p(prev))) merged.back() = r;
        continue;
      }
    }
    merged.push_back(r);
  }
  return merged;
}

}  // namespace

Poly::Poly(std::vector<double> descending) : coeffs_(std::move(descending)) {
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; });
  coeffs_.erase(coeffs_.begin(), first);
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Poly::operator()(double x) const noexcept {
  double r = 0.0;
  for (double c : coeffs_) r = r * x + c;
  return r;
}

Poly Poly::derivative() const {
  const int d = degree();
  if (d == 0) return Poly({0.0});
  std::vector<double> out(d);
  for (int i = 0; i < d; ++i) out[i] = coeffs_[i] * (d - i);
  return Poly(std::move(out));
}

double eval(const Poly& p, double x) noexcept { return p(x); }

int sign_changes(std::span<const double> coeffs) noexcept {
  int changes = 0;
  int last = 0;
  for (double c : coeffs) {
    const int s = sign_of(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int descartes_bound(const Poly& p, double lo, double hi) {
  if (p.degree() == 0) return 0;
  // r(s) = p(lo + (hi - lo) s) on (0, 1); reverse then shift by one maps (0, 1) to (0, inf).
  std::vector<double> r = affine_substitute(p.coeffs(), lo, hi - lo);
  std::reverse(r.begin(), r.end());
  std::vector<double> t = affine_substitute(r, 1.0, 1.0);
  return sign_changes(t);
}

double cauchy_bound(const Poly& p) {
  const auto c = p.coeffs();
  if (p.degree() == 0) return 1.0;
  double m = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) m = std::max(m, std::abs(c[i] / c[0]));
  return 1.0 + m;
}

double residual_bound(const Poly& p, double x, double tol) noexcept {
  double s = 0.0;
  for (double c : p.coeffs()) s += std::abs(c);
  return tol * s * std::pow(std::max(1.0, std::abs(x)), p.degree());
}

std::vector<double> roots_in_interval(const Poly& p, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("root tolerance must be positive");
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) throw InvalidArgument("root interval requires lo < hi");
  if (p.is_zero()) throw DegeneratePolynomial("all-zero polynomial has no isolated roots");
  if (p.degree() == 0) return {};

  const double bound = cauchy_bound(p);
  const double a = std::max(lo, -bound);
  const double b = std::min(hi, bound);
  std::vector<double> roots;
  if (std::isfinite(lo) && p(lo) == 0.0) roots.push_back(lo);
  if (a < b) {
    const auto found = all_roots(p, a, b, tol);
    roots.insert(roots.end(), found.begin(), found.end());
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (r < lo || r >= hi) continue;
    if (!out.empty() && r - out.back() < tol) continue;
    out.push_back(r);
  }
  return out;
}

std::vector<double> positive_roots(const Poly& p, double tol) {
  auto r = roots_in_interval(p, 0.0, std::numeric_limits<double>::infinity(), tol);
  std::erase_if(r, [](double x) { return x <= 0.0; });
  return r;
}

}  // namespace gennv
