#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gennv/cost.hpp"
#include "gennv/demand.hpp"
#include "gennv/foc.hpp"

namespace gennv {

// T1n = (1/n) sum (Q - x_i)^{m-1} 1{x_i <= Q},  T2n = (1/n) sum (x_i - Q)^{m-1}.
// 0^0 = 1, so an observation equal to Q contributes 1 to T1n when m = 1.
struct SampleStats {
  double t1 = 0.0;
  double t2 = 0.0;
  double at_q = 0.0;
  std::size_t n = 0;
};

struct SampleMoments {
  double partial = 0.0;  // d_j
  double full = 0.0;     // m'_j
};

// Segment i covers [x_(i), x_(i+1)) with x_(0) = 0 and x_(n+1) = +inf; on it
// d_j is built from exactly the i smallest order statistics.
struct SegmentCoefficients {
  std::size_t segment_index = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> betas_hat;
};

struct RootHit {
  double root = 0.0;
  std::size_t segment = 0;
  bool extrapolated = false;  // beyond the largest observation
  bool jump = false;          // sign change across a segment boundary (m = 1 step function)
  bool degenerate = false;    // all-zero segment polynomial; root is the segment's left end
};

struct EstimateOptions {
  SelectPolicy select = SelectPolicy::max_root;
  // Absolute root tolerance is tol * (1 + max observation).
  double tol = 1e-12;
  // Per-segment sign-condition verdicts are only collected when requested.
  bool collect_segment_verdicts = false;
};

struct EstimationResult {
  bool exists = false;
  std::vector<RootHit> roots;  // sorted by root
  std::optional<double> selected;
  std::optional<double> cost_min_root;
  std::optional<double> estimated_cost;
  SelectPolicy select = SelectPolicy::max_root;
  double critical_ratio = 0.0;
  std::size_t n = 0;
  double residual = 0.0;  // |T1n - k_m T2n| at the selected root
  std::size_t violated_segments = 0;
  std::vector<ExistenceVerdict> segment_verdicts;
};

SampleStats t_statistics(std::span<const double> sample, const SeverityCost& cost, double q);

SampleMoments sample_moments(std::span<const double> sample, int j, double q);

// Requires a sorted sample (throws InvalidArgument otherwise). Returns n + 1 segments.
std::vector<SegmentCoefficients> segment_coefficients(std::span<const double> sample, const SeverityCost& cost);

/// Non-parametric optimal order quantity from an uncensored sample.
///
/// Solves the segment-frozen random polynomial sum_j (-1)^j beta_hat_j Q^{m-1-j}
/// on every non-empty segment, adds sign changes across segment boundaries, and
/// selects the largest root (or the root with least SAA cost).
EstimationResult estimate_optimal_q(std::span<const double> sample, const SeverityCost& cost,
                                    const EstimateOptions& options = {});

// theta_{1,i}(Q) = E[(Q - X)^i 1{X <= Q}], theta_{2,i}(Q) = E[(X - Q)^i].
double theta_lower(const DemandModel& model, int i, double q);
double theta_full(const DemandModel& model, int i, double q);

// Dispersion of (T1n, T2n) for sample size n.
struct TDispersion {
  double var_t1 = 0.0;
  double var_t2 = 0.0;
  double cov_t1_t2 = 0.0;
};

TDispersion t_dispersion(const DemandModel& model, const SeverityCost& cost, double q, std::size_t n);

// n * Var(h(T_n; Q)) from the delta method. Throws SingularVariance when
// theta_{2,m-1} = 0 or theta_{1,m-1} <= 0.
double asymptotic_variance(const DemandModel& model, const SeverityCost& cost, double q);

}  // namespace gennv
