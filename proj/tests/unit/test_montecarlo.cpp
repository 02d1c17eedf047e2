#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "gennv/error.hpp"
#include "gennv/montecarlo.hpp"

using namespace gennv;
using Catch::Approx;

TEST_CASE("montecarlo: config parsing", "[montecarlo]") {
  const auto kv = parse_config(
      "# smoke\n"
      "distribution = exponential\n"
      "m = 3, 5\n"
      "lambda: 0.25, 1.85\n"
      "n = 20\n"
      "M = 12\n"
      "base_seed = 42\n"
      "select = cost-min\n");
  CHECK(kv.distribution == Distribution::exponential);
  CHECK(kv.m_list == std::vector<int>{3, 5});
  CHECK(kv.lambda_list == std::vector<double>{0.25, 1.85});
  CHECK(kv.n_list == std::vector<std::size_t>{20});
  CHECK(kv.replications == 12);
  CHECK(kv.base_seed == 42);
  CHECK(kv.select == SelectPolicy::cost_min);

  const auto js = parse_config(R"({"distribution": "unif", "m": [2], "lambda": [0.45], "n": [50], "replications": 7})");
  CHECK(js.distribution == Distribution::uniform);
  CHECK(js.replications == 7);
  CHECK(js.cell_count() == 1);

  const auto defaults = parse_config("");
  CHECK(defaults.cell_count() == 315);
  CHECK(defaults.replications == kDeskReplications);

  CHECK_THROWS_AS(parse_config("lambda = 1.0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("M = 0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("colour = red\n"), InputError);
  CHECK_THROWS_AS(parse_config("m = 31\n"), InvalidArgument);
  CHECK_THROWS(parse_config("{ not json"));
}

TEST_CASE("montecarlo: helpers", "[montecarlo]") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(pairwise_sum(v) == 10.0);
  CHECK(sorted_quantile(v, 0.0) == 1.0);
  CHECK(sorted_quantile(v, 1.0) == 4.0);
  CHECK(sorted_quantile(v, 0.5) == 2.5);
  CHECK(sorted_quantile(v, 0.25) == Approx(1.75));
  CHECK(replication_seed(1, {Distribution::uniform, 2, 0.25, 20}, 0) !=
        replication_seed(1, {Distribution::uniform, 2, 0.25, 20}, 1));
  CHECK(replication_seed(1, {Distribution::uniform, 2, 0.25, 20}, 0) !=
        replication_seed(1, {Distribution::exponential, 2, 0.25, 20}, 0));
}

TEST_CASE("montecarlo: grid determinism and invariants", "[montecarlo]") {
  ExperimentConfig cfg;
  cfg.m_list = {2, 3};
  cfg.lambda_list = {0.25, 0.85, 1.45};
  cfg.n_list = {20, 200};
  cfg.replications = 24;
  const auto one = run_grid(cfg, 1);
  const auto many = run_grid(cfg, 5);
  REQUIRE(one.size() == cfg.cell_count());
  std::vector<CellSummary> s1, s5;
  for (const auto& c : one) s1.push_back(c.summary);
  for (const auto& c : many) s5.push_back(c.summary);
  CHECK(render_summaries_csv(s1) == render_summaries_csv(s5));

  for (const auto& c : one) {
    CHECK(c.summary.status == CellStatus::ok);
    CHECK(c.estimates.size() == 24);
    REQUIRE(c.summary.q_true);
    const double closed = 1.0 / (1.0 + std::pow(c.summary.key.lambda, 1.0 / c.summary.key.m));
    CHECK(std::abs(*c.summary.q_true - closed) < 1e-8);
    if (c.summary.key.m % 2 == 1) CHECK(c.summary.p_exist == 1.0);
    std::size_t exist = 0;
    double sq = 0.0;
    for (const auto& e : c.estimates) {
      if (!e) continue;
      ++exist;
      sq += (*e - *c.summary.q_true) * (*e - *c.summary.q_true);
    }
    CHECK(exist == c.summary.count_exist);
    if (exist) CHECK(*c.summary.mse == Approx(sq / static_cast<double>(exist)));
  }

  const auto single = run_cell(one[4].summary.key, 24, cfg.base_seed, cfg.select, 3);
  CHECK(single.estimates == one[4].estimates);
}

TEST_CASE("montecarlo: tables and csv", "[montecarlo]") {
  ExperimentConfig cfg;
  cfg.distribution = Distribution::exponential;
  cfg.m_list = {2, 3, 4};
  cfg.lambda_list = {0.65, 1.05};
  cfg.n_list = {30};
  cfg.replications = 10;
  std::vector<CellSummary> sums;
  for (const auto& c : run_grid(cfg, 2)) sums.push_back(c.summary);

  const auto even = existence_table(sums, Distribution::exponential, 30);
  CHECK(even.m_values == std::vector<int>{2, 4});
  CHECK(even.lambdas == std::vector<double>{0.65, 1.05});
  CHECK(even.missing == 0);
  const auto all = existence_table(sums, Distribution::exponential, 30, false);
  CHECK(all.m_values.size() == 3);
  for (const auto& v : all.values[1]) CHECK(*v == 1.0);
  const auto absent = existence_table(sums, Distribution::exponential, 31);
  CHECK(absent.m_values.empty());

  const std::string table = render_existence_table(even);
  CHECK(table.rfind("m,0.65,1.05\n", 0) == 0);

  std::istringstream in(render_summaries_csv(sums));
  const auto back = parse_summaries_csv(in);
  REQUIRE(back.size() == sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    CHECK(back[i].key.m == sums[i].key.m);
    CHECK(back[i].count_exist == sums[i].count_exist);
    CHECK(back[i].p_exist == Approx(sums[i].p_exist));
  }

  auto with_hole = sums;
  with_hole[0].count_exist = 0;
  with_hole[0].mse.reset();
  const auto curves = mse_curves(with_hole);
  CHECK(curves.omitted.size() == 1);
  CHECK(curves.records.size() == sums.size() - 1);
  CHECK(render_mse_curves(curves).rfind("dist,m,lambda,n,mse\n", 0) == 0);
}

TEST_CASE("montecarlo: consistency along n", "[montecarlo][slow]") {
  ExperimentConfig cfg;
  cfg.m_list = {3};
  cfg.lambda_list = {0.25};
  cfg.n_list = {20, 10000};
  cfg.replications = 60;
  const auto cells = run_grid(cfg, 4);
  CHECK(*cells[1].summary.mse < *cells[0].summary.mse);
}
