#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gennv/error.hpp"

namespace {

void add_cost_flags(CLI::App* cmd, gennv::cli::CostFlags& f) {
  cmd->add_option("--m", f.m, "severity degree m (cost exponent)")->required()->check(CLI::Range(1, 30));
  cmd->add_option("--lambda", f.lambda, "cost ratio C_e / C_s (uses C_s = 1)");
  cmd->add_option("--ce", f.ce, "excess cost per unit^m");
  cmd->add_option("--cs", f.cs, "shortage cost per unit^m");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gennv::cli;
  CLI::App app{"gennv: generalized newsvendor with polynomial severity costs"};
  app.require_subcommand(1);

  SolveFlags solve;
  auto* s = app.add_subcommand("solve", "population optimal order quantity for a known demand distribution");
  s->add_option("--dist", solve.dist, "uniform | exponential")->check(CLI::IsMember({"uniform", "unif", "exponential", "exp"}));
  add_cost_flags(s, solve.cost);
  s->add_option("--lower", solve.lower, "uniform lower bound");
  s->add_option("--upper", solve.upper, "uniform upper bound");
  s->add_option("--rate", solve.rate, "exponential rate");
  s->add_option("--tol", solve.tol, "bisection tolerance");
  s->add_option("--q-max", solve.q_max, "upper end of the root search");
  s->add_option("--grid", solve.grid, "scan grid points");
  s->add_option("--select", solve.select, "max | cost-min")->check(CLI::IsMember({"max", "cost-min"}));

  EstimateFlags estimate;
  auto* e = app.add_subcommand("estimate", "non-parametric estimate from a demand CSV");
  e->add_option("--input", estimate.input, "CSV with a single 'demand' column")->required();
  add_cost_flags(e, estimate.cost);
  e->add_option("--select", estimate.select, "max | cost-min")->check(CLI::IsMember({"max", "cost-min"}));

  SimulateFlags simulate;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo existence and MSE study");
  sim->add_option("--config", simulate.config, "JSON or key = value config file")->required();
  sim->add_option("--out", simulate.out_dir, "output directory");
  sim->add_option("--workers", simulate.workers, "worker threads")->check(CLI::Range(1u, 1024u));
  sim->add_option("--replications", simulate.replications, "override M");
  sim->add_flag("--full", simulate.full, "use the full M = 5000 replications");

  ReportFlags report;
  auto* rep = app.add_subcommand("report", "render tables from summaries.csv");
  rep->add_option("--summaries", report.summaries, "summaries.csv from simulate")->required();
  rep->add_option("--table", report.table, "existence | mse")->check(CLI::IsMember({"existence", "mse"}));
  rep->add_option("--n", report.n, "sample size to tabulate");
  rep->add_option("--dist", report.dist, "uniform | exponential");
  rep->add_flag("--all-m", report.all_m, "include odd m rows in the existence table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*e) return cmd_estimate(estimate);
    if (*sim) return cmd_simulate(simulate);
    if (*rep) return cmd_report(report);
  } catch (const std::exception& ex) {
    std::cerr << "gennv: error: " << ex.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
