#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "gennv/error.hpp"
#include "gennv/polyroot.hpp"
#include "gennv/rng.hpp"
#include "oracles.hpp"

using namespace gennv;
using Catch::Approx;

namespace {

Poly random_poly(Rng& rng, int degree) {
  std::vector<double> c(degree + 1);
  for (double& v : c) v = -10.0 + 20.0 * rng.uniform01();
  return Poly(c);
}

double horner(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (double v : c) r = r * x + v;
  return r;
}

}  // namespace

TEST_CASE("polyroot: evaluation and trimming", "[polyroot]") {
  const Poly p({1, -3, 2});
  CHECK(eval(p, 1.0) == 0.0);
  CHECK(eval(p, 0.0) == 2.0);
  CHECK(eval(Poly({4.5}), 123.0) == 4.5);
  CHECK(Poly({0, 0, 1, 2}).degree() == 1);
  CHECK(Poly({0, 0}).is_zero());
  CHECK(Poly({3, 0, 1}).derivative().coeffs()[0] == 6.0);
}

TEST_CASE("polyroot: known roots", "[polyroot]") {
  const double tol = 1e-12;
  auto r = roots_in_interval(Poly({1, -3, 2}), 0.0, 10.0, tol);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == Approx(1.0).margin(1e-12));
  CHECK(r[1] == Approx(2.0).margin(1e-12));
  CHECK(roots_in_interval(Poly({1, 0, 1}), -10, 10, tol).empty());

  r = positive_roots(Poly({1, -5}), tol);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Approx(5.0).margin(1e-12));
  r = positive_roots(Poly({1, -3, 2}), tol);
  REQUIRE(r.size() == 2);
  // (x + 1)(x - 0.3)
  r = positive_roots(Poly({1, 0.7, -0.3}), tol);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Approx(0.3).margin(1e-12));

  SECTION("half-open interval") {
    CHECK(roots_in_interval(Poly({1, -3, 2}), 1.0, 2.0, tol) == std::vector<double>{1.0});
    CHECK(roots_in_interval(Poly({1, -3, 2}), 1.5, std::numeric_limits<double>::infinity(), tol).size() == 1);
  }
  SECTION("degenerate inputs") {
    CHECK(roots_in_interval(Poly({3.0}), 0, 1, tol).empty());
    CHECK_THROWS_AS(roots_in_interval(Poly({0.0}), 0, 1, tol), DegeneratePolynomial);
  }
  SECTION("even multiplicity touch point") {
    // (x - 0.7)^2 (x + 2)
    r = roots_in_interval(Poly({1, 0.6, -2.31, 0.98}), 0.0, 5.0, 1e-10);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == Approx(0.7).margin(1e-6));
    // (x - 1)^4 (x - 3)
    r = positive_roots(Poly({1, -7, 18, -22, 13, -3}), 1e-10);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == Approx(1.0).margin(1e-3));
    CHECK(r[1] == Approx(3.0).margin(1e-9));
  }
  SECTION("close but distinct roots") {
    // (x - 1)(x - 1.001)(x - 5)
    const Poly p({1, -7.001, 11.006, -5.005});
    r = positive_roots(p, 1e-12);
    REQUIRE(r.size() == 3);
    CHECK(r[1] == Approx(1.001).margin(1e-9));
  }
}

TEST_CASE("polyroot: Descartes bound", "[polyroot]") {
  CHECK(sign_changes(std::vector<double>{1, -3, 2}) == 2);
  CHECK(sign_changes(std::vector<double>{1, 0, 0, -1}) == 1);
  CHECK(descartes_bound(Poly({1, -3, 2}), 0.0, 1.5) == 1);
  CHECK(descartes_bound(Poly({1, -3, 2}), 3.0, 4.0) == 0);
  CHECK(cauchy_bound(Poly({2, -4, 1})) == Approx(3.0));
}

TEST_CASE("polyroot: same-sign coefficients have no positive roots", "[polyroot]") {
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> c(2 + rng.next() % 9);
    const double s = (t % 2 == 0) ? 1.0 : -1.0;
    for (double& v : c) v = s * (0.01 + 10.0 * rng.uniform01());
    CHECK(positive_roots(Poly(c), 1e-10).empty());
  }
}

TEST_CASE("polyroot: random polynomials against the grid oracle", "[polyroot]") {
  Rng rng(20240611);
  const double tol = 1e-10;
  for (int t = 0; t < 200; ++t) {
    const int degree = 1 + static_cast<int>(rng.next() % 9);
    const Poly p = random_poly(rng, degree);
    const std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
    double bound = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) bound = std::max(bound, std::abs(c[i] / c[0]));
    bound += 1.0;
    const auto expected = oracle::grid_roots([&](double x) { return horner(c, x); }, -bound, bound, 200000, 1e-13);
    const auto got = roots_in_interval(p, -bound, bound, tol);
    INFO("trial " << t << " degree " << degree);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(std::abs(got[i] - expected[i]) < tol);
      CHECK(std::abs(p(got[i])) < residual_bound(p, got[i], tol));
    }
    const auto pos = positive_roots(p, tol);
    const int v = sign_changes(p.coeffs());
    CHECK(static_cast<int>(pos.size()) <= v);
    CHECK((v - static_cast<int>(pos.size())) % 2 == 0);
  }
}
