#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "gennv/cost.hpp"
#include "gennv/demand.hpp"
#include "gennv/error.hpp"
#include "gennv/estimator.hpp"
#include "gennv/foc.hpp"
#include "gennv/io.hpp"
#include "gennv/montecarlo.hpp"
#include "gennv/rng.hpp"

namespace gennv::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

SeverityCost make_cost(const CostFlags& f) {
  const bool have_ratio = f.lambda.has_value();
  const bool have_pair = f.ce.has_value() || f.cs.has_value();
  if (have_ratio == have_pair) throw InvalidArgument("give exactly one of --lambda or (--ce and --cs)");
  if (have_ratio) {
    if (*f.lambda == 1.0) throw InvalidArgument("lambda = 1 is excluded: the model assumes C_e != C_s");
    return SeverityCost::from_ratio(f.m, *f.lambda);
  }
  if (!f.ce || !f.cs) throw InvalidArgument("--ce and --cs must be given together");
  if (*f.ce == *f.cs) throw InvalidArgument("C_e == C_s is excluded: the model assumes C_e != C_s");
  return SeverityCost(f.m, *f.ce, *f.cs);
}

DemandModel make_demand(const SolveFlags& f) {
  const auto d = parse_distribution(f.dist);
  if (d == Distribution::uniform) return DemandModel::uniform(f.lower, f.upper);
  return DemandModel::exponential(f.rate);
}

ordered_json num(double v) { return round_sig9(v); }

ordered_json num(const std::optional<double>& v) { return v ? ordered_json(round_sig9(*v)) : ordered_json(nullptr); }

void print_json(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int cmd_solve(const SolveFlags& flags) {
  const auto cost = make_cost(flags.cost);
  const auto model = make_demand(flags);
  SolveOptions opts;
  opts.tol = flags.tol;
  opts.q_max = flags.q_max;
  opts.grid = flags.grid;
  opts.select = parse_select_policy(flags.select);
  const auto r = solve_population_foc(model, cost, opts);

  ordered_json j;
  j["dist"] = model.name();
  j["m"] = cost.m();
  j["lambda"] = num(cost.lambda());
  j["k_m"] = num(r.critical_ratio);
  j["select"] = to_string(r.select);
  j["selected"] = num(r.selected);
  j["cost_min_root"] = num(r.cost_min_root);
  ordered_json roots = ordered_json::array();
  for (double q : r.roots) roots.push_back(num(q));
  j["roots"] = roots;
  j["residual"] = num(r.residual);
  j["scaled_residual"] = num(r.scaled_residual);
  j["expected_cost"] = r.selected ? num(expected_cost(model, cost, *r.selected)) : ordered_json(nullptr);
  j["local_minimum"] = r.local_minimum;
  j["existence"] = to_string(r.existence);
  j["reason"] = r.reason;
  j["q_max"] = num(r.q_max);
  print_json(j);
  if (!r.selected) {
    std::cerr << "gennv: no positive root of the first-order condition: " << r.reason << '\n';
    return kExitNoSolution;
  }
  return kExitOk;
}

int cmd_estimate(const EstimateFlags& flags) {
  const auto cost = make_cost(flags.cost);
  const auto sample = read_demand_csv(fs::path(flags.input));
  EstimateOptions opts;
  opts.select = parse_select_policy(flags.select);
  const auto r = estimate_optimal_q(sample, cost, opts);

  ordered_json j;
  j["exists"] = r.exists;
  j["selected"] = num(r.selected);
  ordered_json roots = ordered_json::array();
  for (const auto& h : r.roots) {
    ordered_json e;
    e["root"] = num(h.root);
    e["segment"] = h.segment;
    e["extrapolated"] = h.extrapolated;
    roots.push_back(e);
  }
  j["roots"] = roots;
  j["estimated_cost"] = num(r.estimated_cost);
  j["k_m"] = num(r.critical_ratio);
  j["n"] = r.n;
  j["m"] = cost.m();
  j["select"] = to_string(r.select);
  j["cost_min_root"] = num(r.cost_min_root);
  j["residual"] = num(r.residual);
  j["violated_segments"] = r.violated_segments;
  print_json(j);
  if (!r.exists) {
    std::cerr << "gennv: the estimating polynomial has no positive root for this sample\n";
    return kExitNoSolution;
  }
  return kExitOk;
}

int cmd_simulate(const SimulateFlags& flags) {
  auto config = load_config(fs::path(flags.config));
  if (flags.full) config.replications = kFullReplications;
  if (flags.replications) config.replications = *flags.replications;
  if (const char* env = std::getenv("GENNV_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t pos = 0;
      config.base_seed = std::stoull(env, &pos, 0);
      if (env[pos] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("GENNV_SEED is not an unsigned integer: ") + env);
    }
  }
  config.validate();

  const auto started = std::chrono::steady_clock::now();
  const auto cells = run_grid(config, flags.workers);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::vector<CellSummary> summaries;
  std::size_t failed = 0;
  std::size_t no_optimum = 0;
  for (const auto& c : cells) {
    summaries.push_back(c.summary);
    if (c.summary.status == CellStatus::error) {
      ++failed;
      std::cerr << "gennv: cell m=" << c.summary.key.m << " lambda=" << c.summary.key.lambda
                << " n=" << c.summary.key.n << " failed: " << c.summary.message << '\n';
    } else if (c.summary.status == CellStatus::no_true_optimum) {
      ++no_optimum;
    }
  }
  if (failed > 0) {
    std::cerr << "gennv: " << failed << " cell(s) failed; no output written\n";
    return kExitError;
  }

  const fs::path out_dir(flags.out_dir);
  fs::create_directories(out_dir);
  const std::string dist = to_string(config.distribution);
  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(out_dir / "summaries.csv", render_summaries_csv(summaries));
  for (std::size_t n : std::set<std::size_t>(config.n_list.begin(), config.n_list.end())) {
    files.emplace_back(out_dir / ("existence_table_" + dist + "_n" + std::to_string(n) + ".csv"),
                       render_existence_table(existence_table(summaries, config.distribution, n, false)));
  }
  const auto curves = mse_curves(summaries);
  files.emplace_back(out_dir / ("mse_curves_" + dist + ".csv"), render_mse_curves(curves));
  files.emplace_back(out_dir / ("boxplot_data_" + dist + ".csv"), render_boxplot_csv(cells));

  ordered_json meta;
  meta["version"] = kVersion;
  meta["generator"] = std::string(kGeneratorName);
  meta["base_seed"] = config.base_seed;
  meta["distribution"] = dist;
  meta["m"] = config.m_list;
  meta["lambda"] = config.lambda_list;
  meta["n"] = config.n_list;
  meta["M"] = config.replications;
  meta["select"] = to_string(config.select);
  meta["cost_convention"] = "C_s = 1, C_e = lambda";
  meta["mse_denominator"] = "replications with a root (count_exist)";
  meta["quantile_method"] = "type 7 (linear interpolation)";
  meta["cells"] = cells.size();
  meta["experiments"] = cells.size() * config.replications;
  meta["cells_without_true_optimum"] = no_optimum;
  meta["mse_rows_omitted"] = curves.omitted.size();
  meta["workers"] = flags.workers;
  meta["elapsed_seconds"] = seconds;

  std::vector<fs::path> written;
  try {
    for (const auto& [path, contents] : files) {
      write_file_atomic(path, contents);
      written.push_back(path);
    }
    write_file_atomic(out_dir / "run_meta.json", meta.dump(2) + "\n");
    written.push_back(out_dir / "run_meta.json");
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }

  ordered_json j;
  j["out_dir"] = out_dir.string();
  j["cells"] = cells.size();
  j["M"] = config.replications;
  ordered_json names = ordered_json::array();
  for (const auto& p : written) names.push_back(p.filename().string());
  j["files"] = names;
  print_json(j);
  return kExitOk;
}

int cmd_report(const ReportFlags& flags) {
  std::ifstream in(flags.summaries);
  if (!in) throw InputError("cannot open '" + flags.summaries + "'");
  const auto summaries = parse_summaries_csv(in);
  if (flags.table == "mse") {
    std::vector<CellSummary> selected;
    for (const auto& s : summaries) {
      if (flags.dist && s.key.distribution != parse_distribution(*flags.dist)) continue;
      if (flags.n && s.key.n != *flags.n) continue;
      selected.push_back(s);
    }
    std::cout << render_mse_curves(mse_curves(selected));
    return kExitOk;
  }
  if (flags.table != "existence") throw InvalidArgument("--table must be existence or mse");
  if (!flags.n) throw InvalidArgument("--n is required for the existence table");
  std::optional<Distribution> dist;
  if (flags.dist) dist = parse_distribution(*flags.dist);
  bool found = false;
  for (const auto& s : summaries) {
    if (s.key.n == *flags.n && (!dist || s.key.distribution == *dist)) {
      if (!dist) dist = s.key.distribution;
      found = true;
    }
  }
  if (!found) throw InputError("no summaries for n = " + std::to_string(*flags.n));
  const auto table = existence_table(summaries, *dist, *flags.n, !flags.all_m);
  if (table.missing > 0) std::cerr << "gennv: " << table.missing << " missing cell(s) left empty\n";
  std::cout << render_existence_table(table);
  return kExitOk;
}

}  // namespace gennv::cli
