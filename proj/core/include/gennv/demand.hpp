#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gennv/rng.hpp"

namespace gennv {

struct UniformDemand {
  double lower;
  double upper;
};

struct ExponentialDemand {
  double rate;
};

// Sorted (ascending) nonnegative observations. Ties are kept.
struct EmpiricalDemand {
  std::vector<double> values;
};

/// Demand distribution: Uniform(a, b), Exponential(rate) or an empirical sample.
///
/// Immutable after construction and safe to share between threads. Every
/// factory validates its parameters and throws InvalidArgument on violation.
class DemandModel {
 public:
  using Variant = std::variant<UniformDemand, ExponentialDemand, EmpiricalDemand>;

  static DemandModel uniform(double lower, double upper);
  static DemandModel exponential(double rate);
  static DemandModel empirical(std::vector<double> values);

  const Variant& variant() const noexcept { return variant_; }

  bool is_parametric() const noexcept;
  bool has_bounded_support() const noexcept;
  // Largest demand with positive density (upper bound, max observation); +inf for exponential.
  double support_upper() const noexcept;
  std::string name() const;

 private:
  explicit DemandModel(Variant v) : variant_(std::move(v)) {}

  Variant variant_;
};

// n independent draws. Empirical models throw UnsupportedOperation.
std::vector<double> sample(const DemandModel& model, std::size_t n, std::uint64_t seed);
void sample_into(const DemandModel& model, Rng& rng, std::span<double> out);

// mu'_j = E[X^j].
double raw_moment(const DemandModel& model, int j);

// delta_j(Q) = E[X^j 1{X <= Q}]. Throws DomainError for Q < 0.
double partial_raw_moment(const DemandModel& model, int j, double q);

double cdf(const DemandModel& model, double x);

// Inverse CDF; the empirical variant uses the left-continuous inverse.
// Throws DomainError unless 0 < p < 1.
double quantile(const DemandModel& model, double p);

// Lower regularized incomplete gamma P(j + 1, x) for integer j >= 0.
double regularized_lower_gamma_int(int j, double x);

}  // namespace gennv
