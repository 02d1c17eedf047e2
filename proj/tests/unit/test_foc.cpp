#include <catch_amalgamated.hpp>

#include <cmath>

#include "gennv/error.hpp"
#include "gennv/foc.hpp"
#include "oracles.hpp"

using namespace gennv;
using Catch::Approx;

namespace {

const std::vector<double> kLambdaGrid{0.25, 0.45, 0.65, 0.85, 1.05, 1.25, 1.45, 1.65, 1.85};

// g(Q) = theta_1 - k theta_2 by direct quadrature against the density.
double foc_by_quadrature(const DemandModel& model, const SeverityCost& c, double q) {
  const int e = c.m() - 1;
  const double k = critical_ratio(c);
  if (const auto* u = std::get_if<UniformDemand>(&model.variant())) {
    const double w = u->upper - u->lower;
    const double top = std::min(q, u->upper);
    const double t1 = oracle::integrate([&](double x) { return std::pow(q - x, e) / w; }, u->lower, top);
    const double t2 = oracle::integrate([&](double x) { return std::pow(x - q, e) / w; }, u->lower, u->upper);
    return t1 - k * t2;
  }
  const double t1 = oracle::integrate([&](double x) { return std::pow(q - x, e) * std::exp(-x); }, 0.0, q);
  const double t2 = oracle::integrate([&](double x) { return std::pow(x - q, e) * std::exp(-x); }, 0.0, 80.0);
  return t1 - k * t2;
}

}  // namespace

TEST_CASE("foc: beta coefficients", "[foc]") {
  const auto u = DemandModel::uniform(0, 1);
  SECTION("m = 3 as Q -> 0") {
    const auto b = beta_coefficients(u, SeverityCost(3, 1, 2), 0.0);
    REQUIRE(b.betas.size() == 3);
    CHECK(b.betas[2] == Approx(-2.0 / 9.0));
  }
  SECTION("m = 1 collapses to the fractile equation") {
    const auto x = DemandModel::exponential(1);
    const SeverityCost c(1, 1, 2);
    const auto b = beta_coefficients(x, c, 0.8);
    REQUIRE(b.betas.size() == 1);
    CHECK(b.betas[0] == Approx(cdf(x, 0.8) - 2.0 / 3.0));
  }
  SECTION("m = 2 with negative critical ratio") {
    const auto b = beta_coefficients(u, SeverityCost(2, 1, 2), 0.5);
    CHECK(b.betas[0] == Approx(-1.5));
    CHECK(b.betas[1] == Approx(-0.875));
  }
  SECTION("recompute-and-compare") {
    const auto x = DemandModel::exponential(1.5);
    const SeverityCost c(6, 0.4, 1);
    const double k = critical_ratio(c);
    const auto b = beta_coefficients(x, c, 1.2);
    for (int j = 0; j < 6; ++j) {
      const double expect =
          static_cast<double>(binomial(5, j)) * (partial_raw_moment(x, j, 1.2) + k * raw_moment(x, j));
      CHECK(b.betas[j] == Approx(expect));
    }
  }
}

TEST_CASE("foc: residual", "[foc]") {
  const auto u = DemandModel::uniform(0, 1);
  const auto x = DemandModel::exponential(1);
  CHECK(foc_residual(x, SeverityCost(1, 1, 2), quantile(x, 2.0 / 3.0)) == Approx(0.0).margin(1e-14));
  CHECK(foc_residual(u, SeverityCost(2, 1, 2), 1.0 / (1.0 + std::sqrt(0.5))) == Approx(0.0).margin(1e-10));
  CHECK(foc_residual(u, SeverityCost(3, 1, 2), 1e-9) < 0.0);

  SECTION("agrees with quadrature of theta_1 - k theta_2") {
    for (int m : {1, 2, 3, 4, 5, 10}) {
      for (double lambda : {0.45, 1.65}) {
        const auto c = SeverityCost::from_ratio(m, lambda);
        for (double q : {0.1, 0.5, 0.9}) {
          CHECK(foc_residual(u, c, q) == Approx(foc_by_quadrature(u, c, q)).epsilon(1e-7).margin(1e-12));
        }
        for (double q : {0.3, 1.5, 4.0}) {
          CHECK(foc_residual(x, c, q) == Approx(foc_by_quadrature(x, c, q)).epsilon(1e-7).margin(1e-10));
        }
      }
    }
  }
  SECTION("odd-m sign structure") {
    for (int m : {1, 3, 5, 9}) {
      for (double lambda : kLambdaGrid) {
        const auto c = SeverityCost::from_ratio(m, lambda);
        CHECK(foc_residual(u, c, 1e-9) < 0.0);
        CHECK(foc_residual(u, c, 1.0) > 0.0);
        CHECK(foc_residual(x, c, 1e-9) < 0.0);
        CHECK(foc_residual(x, c, 27.6) > 0.0);
      }
    }
  }
}

TEST_CASE("foc: existence verdicts", "[foc]") {
  CHECK(check_existence(SeverityCost(3, 1, 2), {{-1.0, 1.0, -1.0}, 0.0}) == ExistenceVerdict::guaranteed);
  CHECK(check_existence(SeverityCost(2, 1, 2), {{-1.0, -0.5}, 0.0}) == ExistenceVerdict::conditional_satisfied);
  CHECK(check_existence(SeverityCost(4, 1, 2), {{1.0, -1.0, 1.0, -1.0}, 0.0}) ==
        ExistenceVerdict::conditional_violated);
}

TEST_CASE("foc: closed forms", "[foc]") {
  CHECK(uniform_closed_form(2, 0.25) == Approx(2.0 / 3.0));
  CHECK(uniform_closed_form(1, 3.0) == Approx(0.25));
  CHECK(uniform_closed_form(7, 1.0 + 1e-12) == Approx(0.5));
  CHECK(uniform_closed_form(10, 1.05) == Approx(0.498780).margin(1e-6));
}

TEST_CASE("foc: population solver", "[foc]") {
  const auto u = DemandModel::uniform(0, 1);
  const auto x = DemandModel::exponential(1);

  CHECK(*solve_population_foc(u, SeverityCost::from_ratio(2, 0.25)).selected == Approx(2.0 / 3.0).margin(1e-9));
  CHECK(*solve_population_foc(x, SeverityCost(1, 1, 2)).selected == Approx(std::log(3.0)).margin(1e-9));
  CHECK(*solve_population_foc(u, SeverityCost::from_ratio(10, 1.05)).selected ==
        Approx(uniform_closed_form(10, 1.05)).margin(1e-9));

  SECTION("uniform agreement over the grid") {
    for (int m : {1, 2, 3, 4, 5, 10}) {
      for (double lambda : kLambdaGrid) {
        const auto r = solve_population_foc(u, SeverityCost::from_ratio(m, lambda));
        REQUIRE(r.selected);
        CHECK(std::abs(*r.selected - uniform_closed_form(m, lambda)) < 1e-6);
        CHECK(r.local_minimum);
        CHECK(r.scaled_residual < 1e-8);
      }
    }
  }
  SECTION("m = 1 reduction") {
    for (const auto& model : {u, x, DemandModel::uniform(1, 4), DemandModel::exponential(0.5)}) {
      for (double lambda : {0.25, 1.85}) {
        const auto r = solve_population_foc(model, SeverityCost::from_ratio(1, lambda));
        CHECK(*r.selected == Approx(quantile(model, 1.0 / (1.0 + lambda))).margin(1e-8));
      }
    }
  }
  SECTION("root consistency and cost-min selection") {
    for (int m : {2, 3, 4, 5, 10}) {
      for (double lambda : kLambdaGrid) {
        SolveOptions opts;
        opts.select = SelectPolicy::cost_min;
        const auto c = SeverityCost::from_ratio(m, lambda);
        const auto r = solve_population_foc(x, c, opts);
        REQUIRE(r.selected);
        CHECK(*r.selected == *r.cost_min_root);
        CHECK(std::abs(foc_residual(x, c, *r.selected)) / (1 + std::abs(foc_residual(x, c, 0.0))) < 1e-8);
        CHECK(r.local_minimum);
      }
    }
  }
  SECTION("errors") {
    CHECK_THROWS_AS(solve_population_foc(DemandModel::empirical({1, 2}), SeverityCost(1, 1, 2)),
                    UnsupportedOperation);
    SolveOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(solve_population_foc(u, SeverityCost(1, 1, 2), bad), InvalidArgument);
  }
}

TEST_CASE("foc: exponential first-order condition", "[foc]") {
  CHECK(exp_foc_residual(SeverityCost(1, 1, 2), std::log(3.0)) == Approx(0.0).margin(1e-15));
  // Q = 0, m = 2: LHS = Q - 1 = -1, RHS = C_s/C_e - 1 = 1.
  CHECK(exp_foc_residual(SeverityCost(2, 1, 2), 0.0) == Approx(-2.0));

  const auto r3 = exp_solve(SeverityCost(3, 1, 2));
  REQUIRE(r3.selected);
  CHECK(std::abs(exp_foc_residual(SeverityCost(3, 1, 2), *r3.selected)) < 1e-10);
  const auto g3 = solve_population_foc(DemandModel::exponential(1), SeverityCost(3, 1, 2));
  CHECK(*r3.selected == Approx(*g3.selected).margin(1e-9));

  SECTION("proportional to the generic residual") {
    // For Exp(1), g(Q) = (m-1)! (1 - (-1)^{m-1} k) * exp_foc_residual(Q) up to sign convention.
    const auto x = DemandModel::exponential(1);
    for (int m : {1, 2, 3, 5}) {
      const auto c = SeverityCost::from_ratio(m, 0.65);
      const double ratio = foc_residual(x, c, 1.3) / exp_foc_residual(c, 1.3);
      CHECK(foc_residual(x, c, 2.7) / exp_foc_residual(c, 2.7) == Approx(ratio).epsilon(1e-9));
    }
  }
}
