#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace gennv::cli {

// Exit codes: 0 result, 1 usage or input error, 2 valid input without a solution.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoSolution = 2;

struct CostFlags {
  int m = 1;
  std::optional<double> lambda;
  std::optional<double> ce;
  std::optional<double> cs;
};

struct SolveFlags {
  std::string dist = "uniform";
  CostFlags cost;
  double lower = 0.0;
  double upper = 1.0;
  double rate = 1.0;
  double tol = 1e-10;
  std::optional<double> q_max;
  int grid = 4096;
  std::string select = "max";
};

struct EstimateFlags {
  std::string input;
  CostFlags cost;
  std::string select = "max";
};

struct SimulateFlags {
  std::string config;
  std::string out_dir = ".";
  unsigned workers = 1;
  std::optional<std::size_t> replications;
  bool full = false;
};

struct ReportFlags {
  std::string summaries;
  std::string table = "existence";
  std::optional<std::size_t> n;
  std::optional<std::string> dist;
  bool all_m = false;
};

int cmd_solve(const SolveFlags& flags);
int cmd_estimate(const EstimateFlags& flags);
int cmd_simulate(const SimulateFlags& flags);
int cmd_report(const ReportFlags& flags);

}  // namespace gennv::cli
