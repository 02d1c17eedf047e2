#include "gennv/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gennv/cost.hpp"
#include "gennv/error.hpp"
#include "gennv/estimator.hpp"
#include "gennv/io.hpp"
#include "gennv/rng.hpp"

namespace gennv {
namespace {

using nlohmann::json;

constexpr std::size_t kRepsPerTask = 4;
constexpr std::array<double, 5> kQuantileLevels{0.05, 0.25, 0.50, 0.75, 0.95};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_scalar(const std::string& s, const std::string& key) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  T v{};
  is >> v;
  if (is.fail() || !(is >> std::ws).eof()) throw InvalidArgument("config: bad value '" + s + "' for " + key);
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& s, const std::string& key) {
  std::vector<T> out;
  std::string body = trim(s);
  if (!body.empty() && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
  for (const auto& item : split_csv_line(body)) {
    if (!item.empty()) out.push_back(parse_scalar<T>(item, key));
  }
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "distribution") {
      c.distribution = parse_distribution(value.get<std::string>());
    } else if (key == "m") {
      c.m_list = value.get<std::vector<int>>();
    } else if (key == "lambda") {
      c.lambda_list = value.get<std::vector<double>>();
    } else if (key == "n") {
      c.n_list = value.get<std::vector<std::size_t>>();
    } else if (key == "M" || key == "replications") {
      c.replications = value.get<std::size_t>();
    } else if (key == "base_seed") {
      c.base_seed = value.get<std::uint64_t>();
    } else if (key == "select") {
      c.select = parse_select_policy(value.get<std::string>());
    } else {
      throw InvalidArgument("config: unknown key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig config_from_pairs(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find_first_of("=:");
    if (eq == std::string::npos) throw InputError("config: expected key = value", line_no);
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key == "distribution") {
      c.distribution = parse_distribution(value);
    } else if (key == "m") {
      c.m_list = parse_list<int>(value, key);
    } else if (key == "lambda") {
      c.lambda_list = parse_list<double>(value, key);
    } else if (key == "n") {
      c.n_list = parse_list<std::size_t>(value, key);
    } else if (key == "M" || key == "replications") {
      c.replications = parse_scalar<std::size_t>(value, key);
    } else if (key == "base_seed") {
      c.base_seed = parse_scalar<std::uint64_t>(value, key);
    } else if (key == "select") {
      c.select = parse_select_policy(value);
    } else {
      throw InputError("config: unknown key '" + key + "'", line_no);
    }
  }
  return c;
}

std::optional<double> estimate_replication(const DemandModel& model, const SeverityCost& cost, std::size_t n,
                                           std::uint64_t seed, SelectPolicy select, std::vector<double>& buffer) {
  buffer.resize(n);
  Rng rng(seed);
  sample_into(model, rng, buffer);
  EstimateOptions opts;
  opts.select = select;
  return estimate_optimal_q(buffer, cost, opts).selected;
}

struct PreparedCell {
  CellKey key;
  std::optional<SeverityCost> cost;
  std::optional<double> q_true;
  CellStatus status = CellStatus::ok;
  std::string message;
};

PreparedCell prepare(const CellKey& key) {
  PreparedCell p;
  p.key = key;
  try {
    p.cost = SeverityCost::from_ratio(key.m, key.lambda);
    const auto report = solve_population_foc(reference_demand(key.distribution), *p.cost);
    if (report.selected) {
      p.q_true = *report.selected;
    } else {
      p.status = CellStatus::no_true_optimum;
      p.message = report.reason;
    }
  } catch (const std::exception& e) {
    if (!p.cost) {
      p.status = CellStatus::error;
    } else {
      p.status = CellStatus::no_true_optimum;
    }
    p.message = e.what();
  }
  return p;
}

CellSummary summarize(const PreparedCell& cell, const std::vector<std::optional<double>>& estimates) {
  CellSummary s;
  s.key = cell.key;
  s.replications = estimates.size();
  s.status = cell.status;
  s.message = cell.message;
  s.q_true = cell.q_true;
  std::vector<double> found;
  for (const auto& e : estimates) {
    if (e) found.push_back(*e);
  }
  s.count_exist = found.size();
  s.p_exist = estimates.empty() ? 0.0 : static_cast<double>(found.size()) / static_cast<double>(estimates.size());
  if (found.empty()) return s;
  if (cell.q_true) {
    std::vector<double> sq(found.size());
    std::vector<double> dev(found.size());
    for (std::size_t i = 0; i < found.size(); ++i) {
      dev[i] = found[i] - *cell.q_true;
      sq[i] = dev[i] * dev[i];
    }
    const double cnt = static_cast<double>(found.size());
    s.mse = pairwise_sum(sq) / cnt;
    s.bias = pairwise_sum(dev) / cnt;
  }
  std::sort(found.begin(), found.end());
  std::array<double, 5> q{};
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = sorted_quantile(found, kQuantileLevels[i]);
  s.quantiles = q;
  return s;
}

// Runs tasks [0, count) on `workers` threads; fn(task) must only touch task-owned state.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || count <= 1) {
    for (std::size_t t = 0; t < count; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = next++; t < count; t = next++) fn(t);
        } catch (...) {
          errors[w] = std::current_exception();
          next = count;
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::optional<double> parse_opt(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  try {
    return parse_scalar<double>(s, "summaries");
  } catch (const std::exception&) {
    throw InputError("malformed number '" + s + "'", line);
  }
}

}  // namespace

std::string to_string(Distribution d) { return d == Distribution::uniform ? "uniform" : "exponential"; }

Distribution parse_distribution(const std::string& s) {
  if (s == "uniform" || s == "unif") return Distribution::uniform;
  if (s == "exponential" || s == "exp") return Distribution::exponential;
  throw InvalidArgument("unknown distribution '" + s + "' (expected uniform or exponential)");
}

DemandModel reference_demand(Distribution d) {
  return d == Distribution::uniform ? DemandModel::uniform(0.0, 1.0) : DemandModel::exponential(1.0);
}

std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::ok:
      return "ok";
    case CellStatus::no_true_optimum:
      return "no-true-optimum";
    case CellStatus::error:
      return "error";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (m_list.empty() || lambda_list.empty() || n_list.empty()) {
    throw InvalidArgument("config: m, lambda and n lists must be non-empty");
  }
  if (replications == 0) throw InvalidArgument("config: M must be at least 1");
  for (int m : m_list) {
    if (m < 1 || m > kMaxSeverity) throw InvalidArgument("config: m out of range");
  }
  for (double l : lambda_list) {
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidArgument("config: lambda must be positive");
    if (l == 1.0) throw InvalidArgument("config: lambda = 1 is excluded (C_e != C_s)");
  }
  for (std::size_t n : n_list) {
    if (n == 0) throw InvalidArgument("config: sample sizes must be positive");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  const std::string body = trim(text);
  ExperimentConfig c;
  if (!body.empty() && body.front() == '{') {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw InputError(std::string("config: invalid JSON: ") + e.what());
    }
    try {
      c = config_from_json(j);
    } catch (const json::exception& e) {
      throw InputError(std::string("config: ") + e.what());
    }
  } else {
    c = config_from_pairs(body);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::uint64_t replication_seed(std::uint64_t base_seed, const CellKey& key, std::size_t replication) noexcept {
  return derive_stream_seed(base_seed, {static_cast<std::uint64_t>(key.distribution),
                                        static_cast<std::uint64_t>(key.m), double_bits(key.lambda),
                                        static_cast<std::uint64_t>(key.n), static_cast<std::uint64_t>(replication)});
}

double pairwise_sum(std::span<const double> v) noexcept {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CellResult run_cell(const CellKey& key, std::size_t replications, std::uint64_t base_seed, SelectPolicy select,
                    unsigned workers) {
  ExperimentConfig c;
  c.distribution = key.distribution;
  c.m_list = {key.m};
  c.lambda_list = {key.lambda};
  c.n_list = {key.n};
  c.replications = replications;
  c.base_seed = base_seed;
  c.select = select;
  auto cells = run_grid(c, workers);
  return std::move(cells.front());
}

std::vector<CellResult> run_grid(const ExperimentConfig& config, unsigned workers) {
  config.validate();
  std::vector<PreparedCell> cells;
  for (int m : config.m_list) {
    for (double lambda : config.lambda_list) {
      for (std::size_t n : config.n_list) cells.push_back(prepare({config.distribution, m, lambda, n}));
    }
  }
  const std::size_t reps = config.replications;
  const std::size_t blocks = (reps + kRepsPerTask - 1) / kRepsPerTask;
  std::vector<std::vector<std::optional<double>>> estimates(cells.size(),
                                                            std::vector<std::optional<double>>(reps));
  const auto model = reference_demand(config.distribution);
  std::mutex failure_mutex;
  std::vector<std::map<std::size_t, std::string>> failures(cells.size());

  parallel_for(cells.size() * blocks, workers, [&](std::size_t task) {
    const std::size_t ci = task / blocks;
    const auto& cell = cells[ci];
    if (cell.status == CellStatus::error) return;
    thread_local std::vector<double> buffer;
    const std::size_t begin = (task % blocks) * kRepsPerTask;
    const std::size_t end = std::min(reps, begin + kRepsPerTask);
    try {
      for (std::size_t r = begin; r < end; ++r) {
        estimates[ci][r] = estimate_replication(model, *cell.cost, cell.key.n,
                                                replication_seed(config.base_seed, cell.key, r), config.select, buffer);
      }
    } catch (const std::exception& e) {
      std::lock_guard lock(failure_mutex);
      failures[ci].emplace(begin, e.what());
    }
  });

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (failures[i].empty()) continue;
    cells[i].status = CellStatus::error;
    cells[i].message = "replication " + std::to_string(failures[i].begin()->first) + ": " + failures[i].begin()->second;
  }

  std::vector<CellResult> out;
  out.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out.push_back({summarize(cells[i], estimates[i]), std::move(estimates[i])});
  }
  return out;
}

ExistenceTable existence_table(std::span<const CellSummary> summaries, Distribution dist, std::size_t n,
                               bool even_only) {
  ExistenceTable t;
  t.distribution = dist;
  t.n = n;
  std::map<std::pair<int, double>, double> cells;
  for (const auto& s : summaries) {
    if (s.key.distribution != dist || s.key.n != n) continue;
    if (even_only && s.key.m % 2 != 0) continue;
    cells[{s.key.m, s.key.lambda}] = s.p_exist;
    if (std::find(t.m_values.begin(), t.m_values.end(), s.key.m) == t.m_values.end()) t.m_values.push_back(s.key.m);
    if (std::find(t.lambdas.begin(), t.lambdas.end(), s.key.lambda) == t.lambdas.end()) {
      t.lambdas.push_back(s.key.lambda);
    }
  }
  std::sort(t.m_values.begin(), t.m_values.end());
  std::sort(t.lambdas.begin(), t.lambdas.end());
  for (int m : t.m_values) {
    std::vector<std::optional<double>> row;
    for (double l : t.lambdas) {
      const auto it = cells.find({m, l});
      if (it == cells.end()) {
        row.emplace_back();
        ++t.missing;
      } else {
        row.emplace_back(it->second);
      }
    }
    t.values.push_back(std::move(row));
  }
  return t;
}

MseCurves mse_curves(std::span<const CellSummary> summaries) {
  MseCurves c;
  for (const auto& s : summaries) {
    if (s.mse) {
      c.records.push_back({s.key, *s.mse});
    } else {
      c.omitted.push_back(s.key);
    }
  }
  return c;
}

std::string render_summaries_csv(std::span<const CellSummary> summaries) {
  std::string out = "dist,m,lambda,n,M,count_exist,p_exist,q_true,mse,bias,q05,q25,q50,q75,q95\n";
  for (const auto& s : summaries) {
    out += to_string(s.key.distribution) + ',' + std::to_string(s.key.m) + ',' + format_number(s.key.lambda) + ',' +
           std::to_string(s.key.n) + ',' + std::to_string(s.replications) + ',' + std::to_string(s.count_exist) +
           ',' + format_number(s.p_exist) + ',' + opt(s.q_true) + ',' + opt(s.mse) + ',' + opt(s.bias);
    for (std::size_t i = 0; i < 5; ++i) {
      out += ',';
      if (s.quantiles) out += format_number((*s.quantiles)[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<CellSummary> parse_summaries_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw InputError("summaries: empty file");
  ++line_no;
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected{"dist", "m",    "lambda", "n",   "M",   "count_exist", "p_exist", "q_true",
                                          "mse",  "bias", "q05",    "q25", "q50", "q75",         "q95"};
  if (header != expected) throw InputError("summaries: unexpected header", line_no);
  std::vector<CellSummary> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != expected.size()) throw InputError("summaries: expected 15 fields", line_no);
    CellSummary s;
    try {
      s.key.distribution = parse_distribution(f[0]);
      s.key.m = parse_scalar<int>(f[1], "m");
      s.key.lambda = parse_scalar<double>(f[2], "lambda");
      s.key.n = parse_scalar<std::size_t>(f[3], "n");
      s.replications = parse_scalar<std::size_t>(f[4], "M");
      s.count_exist = parse_scalar<std::size_t>(f[5], "count_exist");
      s.p_exist = parse_scalar<double>(f[6], "p_exist");
    } catch (const std::exception& e) {
      throw InputError(std::string("summaries: ") + e.what(), line_no);
    }
    s.q_true = parse_opt(f[7], line_no);
    s.mse = parse_opt(f[8], line_no);
    s.bias = parse_opt(f[9], line_no);
    if (!f[10].empty()) {
      std::array<double, 5> q{};
      for (std::size_t i = 0; i < 5; ++i) {
        const auto v = parse_opt(f[10 + i], line_no);
        if (!v) throw InputError("summaries: incomplete quantiles", line_no);
        q[i] = *v;
      }
      s.quantiles = q;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string render_existence_table(const ExistenceTable& t) {
  std::string out = "m";
  for (double l : t.lambdas) out += ',' + format_number(l);
  out += '\n';
  for (std::size_t r = 0; r < t.m_values.size(); ++r) {
    out += std::to_string(t.m_values[r]);
    for (const auto& v : t.values[r]) {
      out += ',';
      if (v) out += format_number(*v);
    }
    out += '\n';
  }
  return out;
}

std::string render_mse_curves(const MseCurves& c) {
  std::string out = "dist,m,lambda,n,mse\n";
  for (const auto& r : c.records) {
    out += to_string(r.key.distribution) + ',' + std::to_string(r.key.m) + ',' + format_number(r.key.lambda) + ',' +
           std::to_string(r.key.n) + ',' + format_number(r.mse) + '\n';
  }
  return out;
}

std::string render_boxplot_csv(std::span<const CellResult> cells) {
  std::string out = "dist,m,lambda,n,replication,q_hat\n";
  for (const auto& c : cells) {
    const auto& k = c.summary.key;
    const std::string prefix = to_string(k.distribution) + ',' + std::to_string(k.m) + ',' + format_number(k.lambda) +
                               ',' + std::to_string(k.n) + ',';
    for (std::size_t r = 0; r < c.estimates.size(); ++r) {
      if (c.estimates[r]) out += prefix + std::to_string(r) + ',' + format_number(*c.estimates[r]) + '\n';
    }
  }
  return out;
}

}  // namespace gennv
