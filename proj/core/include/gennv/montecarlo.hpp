#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gennv/demand.hpp"
#include "gennv/foc.hpp"

namespace gennv {

enum class Distribution { uniform, exponential };

std::string to_string(Distribution d);
Distribution parse_distribution(const std::string& s);

// Uniform(0, 1) or Exp(1).
DemandModel reference_demand(Distribution d);

// Replication counts: desk-scale default and the full study.
inline constexpr std::size_t kDeskReplications = 200;
inline constexpr std::size_t kFullReplications = 5000;

/// Simulation grid. Costs are normalized to C_s = 1, C_e = lambda; the
/// critical ratio, and hence both the estimate and the true optimum, depend
/// only on lambda.
struct ExperimentConfig {
  Distribution distribution = Distribution::uniform;
  std::vector<int> m_list{2, 3, 4, 5, 10};
  std::vector<double> lambda_list{0.25, 0.45, 0.65, 0.85, 1.05, 1.25, 1.45, 1.65, 1.85};
  std::vector<std::size_t> n_list{20, 50, 100, 500, 1000, 5000, 10000};
  std::size_t replications = kDeskReplications;
  std::uint64_t base_seed = 20210915;
  SelectPolicy select = SelectPolicy::max_root;

  // Throws InvalidArgument on empty lists, M = 0, lambda == 1 or out-of-range m.
  void validate() const;
  std::size_t cell_count() const noexcept {
    return m_list.size() * lambda_list.size() * n_list.size();
  }
};

// JSON object, or `key = value` lines with comma-separated lists and '#' comments.
// Keys: distribution, m, lambda, n, M (or replications), base_seed, select.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct CellKey {
  Distribution distribution = Distribution::uniform;
  int m = 1;
  double lambda = 0.0;
  std::size_t n = 0;
};

enum class CellStatus { ok, no_true_optimum, error };
std::string to_string(CellStatus s);

struct CellSummary {
  CellKey key;
  std::size_t replications = 0;
  std::size_t count_exist = 0;
  double p_exist = 0.0;
  std::optional<double> q_true;
  std::optional<double> mse;   // mean over existing replications
  std::optional<double> bias;  // mean of (Q_hat - Q*) over existing replications
  std::optional<std::array<double, 5>> quantiles;  // 5, 25, 50, 75, 95 % of Q_hat (type 7)
  CellStatus status = CellStatus::ok;
  std::string message;
};

struct CellResult {
  CellSummary summary;
  std::vector<std::optional<double>> estimates;  // per replication; empty optional = no root
};

std::uint64_t replication_seed(std::uint64_t base_seed, const CellKey& key, std::size_t replication) noexcept;

CellResult run_cell(const CellKey& key, std::size_t replications, std::uint64_t base_seed, SelectPolicy select,
                    unsigned workers = 1);

/// Every cell of the grid in (m, lambda, n) order. Output is identical for
/// any worker count; per-cell failures are recorded in CellSummary::status.
std::vector<CellResult> run_grid(const ExperimentConfig& config, unsigned workers = 1);

double pairwise_sum(std::span<const double> v) noexcept;

// Hyndman-Fan type 7 quantile of sorted data.
double sorted_quantile(std::span<const double> sorted, double p);

struct ExistenceTable {
  Distribution distribution = Distribution::uniform;
  std::size_t n = 0;
  std::vector<int> m_values;
  std::vector<double> lambdas;
  std::vector<std::vector<std::optional<double>>> values;  // [row m][column lambda]
  std::size_t missing = 0;
};

// Rows are the m values present for n (even m only when even_only), columns lambda.
ExistenceTable existence_table(std::span<const CellSummary> summaries, Distribution dist, std::size_t n,
                               bool even_only = true);

struct MseRecord {
  CellKey key;
  double mse = 0.0;
};

struct MseCurves {
  std::vector<MseRecord> records;
  std::vector<CellKey> omitted;  // cells without any estimate
};

MseCurves mse_curves(std::span<const CellSummary> summaries);

std::string render_summaries_csv(std::span<const CellSummary> summaries);
std::vector<CellSummary> parse_summaries_csv(std::istream& in);
std::string render_existence_table(const ExistenceTable& table);
std::string render_mse_curves(const MseCurves& curves);
std::string render_boxplot_csv(std::span<const CellResult> cells);

}  // namespace gennv
