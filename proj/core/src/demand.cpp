#include "gennv/demand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gennv/error.hpp"

namespace gennv {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double ipow(double x, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= x;
  return r;
}

double factorial(int j) {
  double r = 1.0;
  for (int i = 2; i <= j; ++i) r *= i;
  return r;
}

void require_order(int j) {
  if (j < 0) throw DomainError("moment order must be nonnegative");
}

// (hi^{j+1} - lo^{j+1}) / (j+1) without cancellation for nearby hi, lo.
double power_integral(double lo, double hi, int j) {
  // hi^{j+1} - lo^{j+1} = (hi - lo) * sum_{i=0}^{j} hi^i lo^{j-i}
  double s = 0.0;
  for (int i = 0; i <= j; ++i) s += ipow(hi, i) * ipow(lo, j - i);
  return (hi - lo) * s / (j + 1);
}

}  // namespace

DemandModel DemandModel::uniform(double lower, double upper) {
  if (!(std::isfinite(lower) && std::isfinite(upper)) || lower < 0.0 || !(lower < upper)) {
    throw InvalidArgument("uniform demand requires 0 <= lower < upper");
  }
  return DemandModel(UniformDemand{lower, upper});
}

DemandModel DemandModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidArgument("exponential demand requires rate > 0");
  }
  return DemandModel(ExponentialDemand{rate});
}

DemandModel DemandModel::empirical(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("empirical demand requires at least one value");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("empirical demand values must be finite and nonnegative");
    }
  }
  std::sort(values.begin(), values.end());
  return DemandModel(EmpiricalDemand{std::move(values)});
}

bool DemandModel::is_parametric() const noexcept {
  return !std::holds_alternative<EmpiricalDemand>(variant_);
}

bool DemandModel::has_bounded_support() const noexcept {
  return !std::holds_alternative<ExponentialDemand>(variant_);
}

double DemandModel::support_upper() const noexcept {
  return std::visit(overloaded{
                        [](const UniformDemand& u) { return u.upper; },
                        [](const ExponentialDemand&) { return std::numeric_limits<double>::infinity(); },
                        [](const EmpiricalDemand& e) { return e.values.back(); },
                    },
                    variant_);
}

std::string DemandModel::name() const {
  std::ostringstream os;
  os.precision(9);
  std::visit(overloaded{
                 [&](const UniformDemand& u) { os << "uniform(" << u.lower << "," << u.upper << ")"; },
                 [&](const ExponentialDemand& e) { os << "exponential(" << e.rate << ")"; },
                 [&](const EmpiricalDemand& e) { os << "empirical(n=" << e.values.size() << ")"; },
             },
             variant_);
  return os.str();
}

void sample_into(const DemandModel& model, Rng& rng, std::span<double> out) {
  std::visit(overloaded{
                 [&](const UniformDemand& u) {
                   const double width = u.upper - u.lower;
                   for (double& x : out) x = u.lower + width * rng.uniform01();
                 },
                 [&](const ExponentialDemand& e) {
                   // 1 - U lies in (0, 1], so the log is finite.
                   for (double& x : out) x = -std::log1p(-rng.uniform01()) / e.rate;
                 },
                 [&](const EmpiricalDemand&) {
                   throw UnsupportedOperation("sampling is only defined for parametric demand");
                 },
             },
             model.variant());
}

std::vector<double> sample(const DemandModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample size must be positive");
  if (!model.is_parametric()) {
    throw UnsupportedOperation("sampling is only defined for parametric demand");
  }
  std::vector<double> out(n);
  Rng rng(seed);
  sample_into(model, rng, out);
  return out;
}

double regularized_lower_gamma_int(int j, double x) {
  if (x <= 0.0) return 0.0;
  if (x < j + 1.0) {
    // Tail form e^{-x} sum_{i>j} x^i / i!; terms decrease once i > x.
    double term = std::exp(-x);
    for (int i = 1; i <= j; ++i) term *= x / i;
    double sum = 0.0;
    for (int i = j + 1; i < j + 400; ++i) {
      term *= x / i;
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum;
  }
  // Finite sum 1 - e^{-x} sum_{i=0}^{j} x^i / i!.
  double term = 1.0;
  double sum = 1.0;
  for (int i = 1; i <= j; ++i) {
    term *= x / i;
    sum += term;
  }
  return 1.0 - std::exp(-x) * sum;
}

double raw_moment(const DemandModel& model, int j) {
  require_order(j);
  return std::visit(overloaded{
                        [&](const UniformDemand& u) {
                          return power_integral(u.lower, u.upper, j) / (u.upper - u.lower);
                        },
                        [&](const ExponentialDemand& e) { return factorial(j) / ipow(e.rate, j); },
                        [&](const EmpiricalDemand& e) {
                          double s = 0.0;
                          for (double x : e.values) s += ipow(x, j);
                          return s / static_cast<double>(e.values.size());
                        },
                    },
                    model.variant());
}

double partial_raw_moment(const DemandModel& model, int j, double q) {
  require_order(j);
  if (std::isnan(q) || q < 0.0) throw DomainError("truncation point Q must be nonnegative");
  return std::visit(
      overloaded{
          [&](const UniformDemand& u) {
            if (q <= u.lower) return 0.0;
            const double top = std::min(q, u.upper);
            return power_integral(u.lower, top, j) / (u.upper - u.lower);
          },
          [&](const ExponentialDemand& e) {
            return factorial(j) / ipow(e.rate, j) * regularized_lower_gamma_int(j, e.rate * q);
          },
          [&](const EmpiricalDemand& e) {
            const auto end = std::upper_bound(e.values.begin(), e.values.end(), q);
            double s = 0.0;
            for (auto it = e.values.begin(); it != end; ++it) s += ipow(*it, j);
            return s / static_cast<double>(e.values.size());
          },
      },
      model.variant());
}

double cdf(const DemandModel& model, double x) {
  if (std::isnan(x)) throw DomainError("cdf argument is NaN");
  return std::visit(overloaded{
                        [&](const UniformDemand& u) {
                          if (x <= u.lower) return 0.0;
                          if (x >= u.upper) return 1.0;
                          return (x - u.lower) / (u.upper - u.lower);
                        },
                        [&](const ExponentialDemand& e) {
                          return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x);
                        },
                        [&](const EmpiricalDemand& e) {
                          const auto end = std::upper_bound(e.values.begin(), e.values.end(), x);
                          return static_cast<double>(end - e.values.begin()) /
                                 static_cast<double>(e.values.size());
                        },
                    },
                    model.variant());
}

double quantile(const DemandModel& model, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  return std::visit(overloaded{
                        [&](const UniformDemand& u) { return u.lower + p * (u.upper - u.lower); },
                        [&](const ExponentialDemand& e) { return -std::log1p(-p) / e.rate; },
                        [&](const EmpiricalDemand& e) {
                          // smallest x_(i) with i/n >= p
                          const auto n = e.values.size();
                          std::size_t i = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
                          while (i > 1 && static_cast<double>(i - 1) / static_cast<double>(n) >= p) --i;
                          while (static_cast<double>(i) / static_cast<double>(n) < p) ++i;
                          i = std::clamp<std::size_t>(i, 1, n);
                          return e.values[i - 1];
                        },
                    },
                    model.variant());
}

}  // namespace gennv
