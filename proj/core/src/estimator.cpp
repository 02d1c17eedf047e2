#include "gennv/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "gennv/error.hpp"
#include "gennv/polyroot.hpp"

namespace gennv {
namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double ipow(double x, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= x;
  return r;
}

// Walks the n + 1 order-statistic segments, keeping cumulative power sums.
class SegmentWalker {
 public:
  SegmentWalker(std::span<const double> sorted, const SeverityCost& cost)
      : x_(sorted), m_(cost.m()), k_(critical_ratio(cost)), n_(static_cast<double>(sorted.size())) {
    sign_ = (m_ % 2 == 1) ? 1.0 : -1.0;
    for (int j = 0; j < m_; ++j) {
      binom_[j] = static_cast<double>(binomial(m_ - 1, j));
      double s = 0.0;
      for (double v : x_) s += ipow(v, j);
      full_[j] = s / n_;
      partial_[j] = 0.0;
    }
  }

  std::size_t segments() const noexcept { return x_.size() + 1; }
  double lo(std::size_t i) const noexcept { return i == 0 ? 0.0 : x_[i - 1]; }
  double hi(std::size_t i) const noexcept {
    return i == x_.size() ? std::numeric_limits<double>::infinity() : x_[i];
  }

  // Moves the cumulative sums to segment i (must be called with i = 0, 1, 2, ...).
  void advance_to(std::size_t i) {
    while (included_ < i) {
      const double v = x_[included_++];
      double p = 1.0;
      for (int j = 0; j < m_; ++j) {
        sums_[j] += p;
        p *= v;
      }
    }
    for (int j = 0; j < m_; ++j) partial_[j] = sums_[j] / n_;
  }

  double beta(int j) const noexcept { return binom_[j] * (partial_[j] - sign_ * k_ * full_[j]); }

  // Descending coefficients (-1)^j beta_j of Q^{m-1-j}.
  std::vector<double> poly_coeffs() const {
    std::vector<double> c(m_);
    for (int j = 0; j < m_; ++j) c[j] = (j % 2 == 0) ? beta(j) : -beta(j);
    return c;
  }

  int m() const noexcept { return m_; }

 private:
  std::span<const double> x_;
  int m_;
  double k_;
  double n_;
  double sign_ = 1.0;
  std::size_t included_ = 0;
  std::array<double, kMaxSeverity> binom_{};
  std::array<double, kMaxSeverity> full_{};
  std::array<double, kMaxSeverity> partial_{};
  std::array<double, kMaxSeverity> sums_{};
};

double horner(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (double v : c) r = r * x + v;
  return r;
}

// True when p provably has no root on [lo, hi]: the smaller endpoint magnitude
// exceeds a bound on the variation of p across the interval.
bool excluded_by_variation(const std::vector<double>& c, double lo, double hi, double p_lo, double p_hi) {
  if (sign_of(p_lo) * sign_of(p_hi) <= 0) return false;
  const int d = static_cast<int>(c.size()) - 1;
  const double r = std::max(std::abs(lo), std::abs(hi));
  double slope = 0.0;
  for (int i = 0; i < d; ++i) slope += std::abs(c[i]) * (d - i) * ipow(r, d - i - 1);
  return std::min(std::abs(p_lo), std::abs(p_hi)) > 2.0 * slope * (hi - lo);
}

}  // namespace

SampleStats t_statistics(std::span<const double> sample, const SeverityCost& cost, double q) {
  if (sample.empty()) throw InvalidArgument("sample must be non-empty");
  if (std::isnan(q) || q < 0.0) throw DomainError("Q must be nonnegative");
  const int e = cost.m() - 1;
  double t1 = 0.0;
  double t2 = 0.0;
  for (double x : sample) {
    if (x <= q) t1 += ipow(q - x, e);
    t2 += ipow(x - q, e);
  }
  const double n = static_cast<double>(sample.size());
  return {t1 / n, t2 / n, q, sample.size()};
}

SampleMoments sample_moments(std::span<const double> sample, int j, double q) {
  if (sample.empty()) throw InvalidArgument("sample must be non-empty");
  if (j < 0) throw DomainError("moment order must be nonnegative");
  double d = 0.0;
  double full = 0.0;
  for (double x : sample) {
    const double p = ipow(x, j);
    full += p;
    if (x <= q) d += p;
  }
  const double n = static_cast<double>(sample.size());
  return {d / n, full / n};
}

std::vector<SegmentCoefficients> segment_coefficients(std::span<const double> sample, const SeverityCost& cost) {
  if (sample.empty()) throw InvalidArgument("sample must be non-empty");
  if (!std::is_sorted(sample.begin(), sample.end())) throw InvalidArgument("sample must be sorted ascending");
  SegmentWalker walk(sample, cost);
  std::vector<SegmentCoefficients> out;
  out.reserve(walk.segments());
  for (std::size_t i = 0; i < walk.segments(); ++i) {
    walk.advance_to(i);
    SegmentCoefficients s;
    s.segment_index = i;
    s.lo = walk.lo(i);
    s.hi = walk.hi(i);
    s.betas_hat.resize(cost.m());
    for (int j = 0; j < cost.m(); ++j) s.betas_hat[j] = walk.beta(j);
    out.push_back(std::move(s));
  }
  return out;
}

EstimationResult estimate_optimal_q(std::span<const double> sample, const SeverityCost& cost,
                                    const EstimateOptions& options) {
  if (sample.empty()) throw InvalidArgument("cannot estimate from an empty sample");
  for (double x : sample) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("demand observations must be finite and nonnegative");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());

  EstimationResult result;
  result.select = options.select;
  result.n = sorted.size();
  result.critical_ratio = critical_ratio(cost);

  const double x_max = sorted.back();
  const double tol = options.tol * (1.0 + x_max);
  SegmentWalker walk(sorted, cost);

  bool have_prev = false;
  std::vector<double> prev_coeffs;
  std::vector<RootHit> hits;
  FocCoefficients betas_view;
  betas_view.betas.resize(cost.m());

  for (std::size_t i = 0; i < walk.segments(); ++i) {
    const double lo = walk.lo(i);
    const double hi = walk.hi(i);
    if (!(hi > lo)) continue;  // tie: zero-width segment
    walk.advance_to(i);
    const auto coeffs = walk.poly_coeffs();

    for (int j = 0; j < cost.m(); ++j) betas_view.betas[j] = walk.beta(j);
    betas_view.at_q = lo;
    const auto verdict = check_existence(cost, betas_view);
    if (verdict == ExistenceVerdict::conditional_violated) ++result.violated_segments;
    if (options.collect_segment_verdicts) result.segment_verdicts.push_back(verdict);

    const double p_lo = horner(coeffs, lo);
    if (have_prev && lo > 0.0) {
      const double left = horner(prev_coeffs, lo);
      if (sign_of(left) * sign_of(p_lo) < 0) hits.push_back({lo, i, lo > x_max, true, false});
    }

    const Poly p(coeffs);
    if (p.is_zero()) {
      if (lo > 0.0) hits.push_back({lo, i, lo > x_max, false, true});
    } else if (p.degree() > 0) {
      const bool last = std::isinf(hi);
      if (last || !excluded_by_variation(coeffs, lo, hi, p_lo, horner(coeffs, hi))) {
        for (double r : roots_in_interval(p, lo, hi, tol)) {
          if (r > 0.0) hits.push_back({r, i, r > x_max, false, false});
        }
      }
    }
    prev_coeffs = coeffs;
    have_prev = true;
  }

  std::sort(hits.begin(), hits.end(), [](const RootHit& a, const RootHit& b) { return a.root < b.root; });
  for (const auto& h : hits) {
    if (!result.roots.empty() && h.root - result.roots.back().root < tol) continue;
    result.roots.push_back(h);
  }
  result.exists = !result.roots.empty();
  if (!result.exists) return result;

  double best = result.roots.back().root;
  double best_cost = empirical_expected_cost(sorted, cost, best);
  for (const auto& h : result.roots) {
    const double c = empirical_expected_cost(sorted, cost, h.root);
    if (c < best_cost) {
      best_cost = c;
      best = h.root;
    }
  }
  result.cost_min_root = best;
  result.selected = (options.select == SelectPolicy::max_root) ? result.roots.back().root : best;
  result.estimated_cost = empirical_expected_cost(sorted, cost, *result.selected);
  const auto st = t_statistics(sorted, cost, *result.selected);
  result.residual = std::abs(st.t1 - result.critical_ratio * st.t2);
  return result;
}

double theta_lower(const DemandModel& model, int i, double q) {
  double s = 0.0;
  for (int l = 0; l <= i; ++l) {
    const double term = static_cast<double>(binomial(i, l)) * ipow(q, i - l) * partial_raw_moment(model, l, q);
    s += (l % 2 == 0) ? term : -term;
  }
  return s;
}

double theta_full(const DemandModel& model, int i, double q) {
  double s = 0.0;
  for (int l = 0; l <= i; ++l) {
    const double term = static_cast<double>(binomial(i, l)) * ipow(q, i - l) * raw_moment(model, l);
    s += ((i - l) % 2 == 0) ? term : -term;
  }
  return s;
}

TDispersion t_dispersion(const DemandModel& model, const SeverityCost& cost, double q, std::size_t n) {
  if (n == 0) throw InvalidArgument("sample size must be positive");
  const int m = cost.m();
  const double t1 = theta_lower(model, m - 1, q);
  const double t2 = theta_full(model, m - 1, q);
  const double t1sq = theta_lower(model, 2 * m - 2, q);
  const double t2sq = theta_full(model, 2 * m - 2, q);
  const double sign = (m % 2 == 1) ? 1.0 : -1.0;  // (-1)^{m-1}
  const double nn = static_cast<double>(n);
  return {(t1sq - t1 * t1) / nn, (t2sq - t2 * t2) / nn, (sign * t1sq - t1 * t2) / nn};
}

double asymptotic_variance(const DemandModel& model, const SeverityCost& cost, double q) {
  const int m = cost.m();
  const double t1 = theta_lower(model, m - 1, q);
  const double t2 = theta_full(model, m - 1, q);
  const double scale = std::max(1.0, std::abs(theta_full(model, 2 * m - 2, q)));
  if (std::abs(t2) <= 1e-14 * std::sqrt(scale)) {
    throw SingularVariance("theta_{2,m-1} vanishes at Q; the estimating function is undefined");
  }
  if (!(t1 > 0.0)) throw SingularVariance("theta_{1,m-1} must be positive at Q");
  const double t1sq = theta_lower(model, 2 * m - 2, q);
  const double t2sq = theta_full(model, 2 * m - 2, q);
  const double h = t1 / t2;
  const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
  return h * h * (t1sq / (t1 * t1) + t2sq / (t2 * t2) + 2.0 * sign_m * t1sq / (t1 * t2));
}

}  // namespace gennv
