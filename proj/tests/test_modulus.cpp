#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "holocert/modulus.hpp"
#include "holocert/oracle.hpp"

using namespace holocert;

namespace {

ExprPtr z_pow(int d) { return poly_monomial(1, {1.0, 0.0}, {d}); }

ExprPtr exp_z() {
  return make_exppoly(1, {ExpPolyTerm{{PolyTerm{{1.0, 0.0}, {0}}},
                                      {Complex{1.0, 0.0}}}});
}

std::mt19937_64 rng(777);

ExprPtr random_poly(int max_deg, double scale = 1.0) {
  std::uniform_int_distribution<int> dd(1, max_deg);
  std::uniform_real_distribution<double> u(-scale, scale);
  int d = dd(rng);
  std::vector<PolyTerm> terms;
  for (int k = 0; k <= d; ++k) terms.push_back(PolyTerm{{u(rng), u(rng)}, {k}});
  return make_poly(1, std::move(terms));
}

}  // namespace

TEST_CASE("monomials have exact log-modulus d ln r") {
  for (int d : {1, 3, 7}) {
    for (double r : {0.5, 1.0, 2.5}) {
      LogModulus m = max_modulus(*z_pow(d), disk({0, 0}, r), 1e-9);
      CHECK(m.log_value == doctest::Approx(d * std::log(r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("max modulus of e^z on the r-disk is r") {
  for (double r : {0.5, 1.0, 3.0}) {
    LogModulus m = max_modulus(*exp_z(), disk({0, 0}, r), 1e-9);
    CHECK(m.log_value == doctest::Approx(r).epsilon(1e-9));
    CHECK(std::abs(m.witness[0] - Complex{r, 0.0}) < 1e-4 * (1 + r));
  }
}

TEST_CASE("z^2+z+1 attains ln 3 at z=1 on the unit circle") {
  ExprPtr f = make_poly(1, {PolyTerm{{1.0, 0.0}, {2}}, PolyTerm{{1.0, 0.0}, {1}},
                            PolyTerm{{1.0, 0.0}, {0}}});
  double grid = oracle::grid_max(*f, Point{{0, 0}}, 1.0, 100000);
  LogModulus m = max_modulus(*f, disk({0, 0}, 1.0), 1e-9);
  CHECK(m.log_value >= grid - 1e-12);
  CHECK(m.log_value == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("witness reproduces the reported value") {
  for (int k = 0; k < 10; ++k) {
    ExprPtr f = random_poly(6);
    LogModulus m = max_modulus(*f, disk({0, 0}, 1.3), 1e-9);
    double at_witness = log_abs(*f, m.witness);
    CHECK(at_witness == doctest::Approx(m.log_value).epsilon(1e-9));
  }
}

TEST_CASE("monotonicity in the radius") {
  for (int k = 0; k < 10; ++k) {
    ExprPtr f = random_poly(5);
    double prev = -1e300;
    for (double r = 0.25; r <= 4.0; r *= 1.7) {
      double v = max_modulus(*f, disk({0, 0}, r), 1e-9).log_value;
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("max modulus agrees with the dense grid oracle") {
  for (int k = 0; k < 12; ++k) {
    ExprPtr f = random_poly(8);
    double grid = oracle::grid_max(*f, Point{{0, 0}}, 1.0, 100000);
    double ours = max_modulus(*f, disk({0, 0}, 1.0), 1e-9).log_value;
    CHECK(ours >= grid - 1e-12);
    CHECK(std::abs(ours - grid) <= 1e-6 * (1.0 + std::abs(grid)));
  }
}

TEST_CASE("ball maximum for n=2 via homogeneous reduction and generic path") {
  // f = z1^2 z2: sup over the ball of radius r is r^3 * sup over unit sphere.
  ExprPtr f = poly_monomial(2, {1.0, 0.0}, {2, 1});
  // max over unit sphere of |u1|^2 |u2| = (2/3)*(1/sqrt27)*... = 2/(3 sqrt 3)
  double sphere_exact = std::log(2.0 / (3.0 * std::sqrt(3.0)));
  LogModulus m1 = max_modulus(*f, ball(Point{{0, 0}, {0, 0}}, 1.0), 1e-9);
  CHECK(m1.log_value == doctest::Approx(sphere_exact).epsilon(1e-6));
  LogModulus m2 = max_modulus(*f, ball(Point{{0, 0}, {0, 0}}, 2.0), 1e-9);
  CHECK(m2.log_value == doctest::Approx(sphere_exact + 3.0 * std::log(2.0)).epsilon(1e-6));

  // non-homogeneous generic path agrees with the sphere oracle
  ExprPtr g = make_poly(2, {PolyTerm{{1.0, 0.0}, {2, 1}}, PolyTerm{{0.5, 0.0}, {0, 0}}});
  double grid = oracle::grid_max(*g, Point{{0, 0}, {0, 0}}, 1.0, 20000);
  double ours = max_modulus(*g, ball(Point{{0, 0}, {0, 0}}, 1.0), 1e-9).log_value;
  CHECK(ours >= grid - 1e-9);
  CHECK(std::abs(ours - grid) < 2e-3);
}

TEST_CASE("growth ratio") {
  // z^d: ln R = d ln(s/t) exactly
  CHECK(growth_ratio(*z_pow(4), 1.0, 2.0, 8.0, 1e-9) ==
        doctest::Approx(4.0 * std::log(4.0)).epsilon(1e-12));
  // e^z: ln R = r/t - r/s
  CHECK(growth_ratio(*exp_z(), 1.0, 2.0, 4.0, 1e-9) ==
        doctest::Approx(0.5 - 0.25).epsilon(1e-8));
  // z^2 + 1e-3 z against the grid oracle
  ExprPtr f = make_poly(1, {PolyTerm{{1.0, 0.0}, {2}}, PolyTerm{{1e-3, 0.0}, {1}}});
  double lhs = growth_ratio(*f, 1.0, 2.0, 4.0, 1e-9);
  double orc = oracle::grid_max(*f, Point{{0, 0}}, 0.5, 100000) -
               oracle::grid_max(*f, Point{{0, 0}}, 0.25, 100000);
  CHECK(std::abs(lhs - orc) < 1e-8);
  // identically zero f signals the -inf denominator
  CHECK_THROWS_AS(growth_ratio(*make_poly(1, {}), 1.0, 2.0, 4.0, 1e-9),
                  std::domain_error);
}

TEST_CASE("three-circle certificate") {
  // z^d: equality, margin 0
  {
    auto reports = three_circle_check(z_pow(3), {0, 0}, 0.5, 1.0, 2.0, 1e-9);
    REQUIRE(!reports.empty());
    CHECK(reports[0].paper_tag == "e22");
    CHECK(reports[0].pass);
    CHECK(std::abs(reports[0].margin_log) < 1e-9);
  }
  // e^z with radii 1,2,4: margin (1-theta)*1 + theta*4 - 2 = 0.5
  {
    auto reports = three_circle_check(exp_z(), {0, 0}, 1.0, 2.0, 4.0, 1e-9);
    CHECK(reports[0].pass);
    CHECK(reports[0].margin_log == doctest::Approx(0.5).epsilon(1e-6));
  }
  // constants give equality with margin 0
  {
    auto reports = three_circle_check(poly_constant(1, {2.5, 0.0}), {0, 0},
                                      1.0, 2.0, 4.0, 1e-9);
    CHECK(reports[0].pass);
    CHECK(std::abs(reports[0].margin_log) < 1e-9);
  }
  // identically zero is reported vacuous
  {
    auto reports = three_circle_check(make_poly(1, {}), {0, 0}, 1.0, 2.0, 4.0, 1e-9);
    CHECK(reports[0].outcome == Outcome::Vacuous);
  }
}

TEST_CASE("section 3.1 properties hold on a small corpus") {
  std::vector<ExprPtr> corpus{z_pow(2), exp_z(),
                              make_poly(1, {PolyTerm{{1.0, 0.0}, {2}},
                                            PolyTerm{{1.0, 0.0}, {1}},
                                            PolyTerm{{1.0, 0.0}, {0}}})};
  for (int k = 0; k < 5; ++k) corpus.push_back(random_poly(6));
  for (const ExprPtr& f : corpus) {
    auto reports = three_circle_check(f, {0, 0}, 1.0, 2.0, 4.0, 1e-9);
    for (const CertReport& r : reports) {
      INFO(r.name);
      if (r.outcome == Outcome::Pass || r.outcome == Outcome::Fail)
        CHECK(r.margin_log >= -1e-9);
    }
  }
}

TEST_CASE("min modulus on a circle") {
  // |z^2 - 1/4| on |z| = 1: minimum is 3/4 at z = +-i... in fact min over
  // the circle of |z^2 - 1/4| is attained at z = +-1 giving 3/4.
  ExprPtr f = make_poly(1, {PolyTerm{{1.0, 0.0}, {2}}, PolyTerm{{-0.25, 0.0}, {0}}});
  LogModulus m = min_modulus_circle(*f, {0, 0}, 1.0, 1e-9);
  double orc = oracle::grid_circle_min(*f, {0, 0}, 1.0, 100000);
  CHECK(std::abs(m.log_value - orc) < 1e-6);
  CHECK(m.log_value == doctest::Approx(std::log(0.75)).epsilon(1e-9));
}
