#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "holocert/oracle.hpp"

using namespace holocert;

TEST_CASE("companion-matrix roots of simple polynomials") {
  // z^2 - 1/4
  auto r = oracle::poly_roots({{-0.25, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - Complex{-0.5, 0.0}) < 1e-10);
  CHECK(std::abs(r[1] - Complex{0.5, 0.0}) < 1e-10);

  // z^3 - 1: cube roots of unity
  auto c = oracle::poly_roots({{-1.0, 0.0}, {0, 0}, {0, 0}, {1.0, 0.0}});
  REQUIRE(c.size() == 3);
  for (const Complex& z : c) CHECK(std::abs(std::abs(z) - 1.0) < 1e-10);
}

TEST_CASE("random degree-8 roots pass the residual self-check") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 25; ++k) {
    std::vector<Complex> coeffs(9);
    for (Complex& c : coeffs) c = {u(rng), u(rng)};
    if (std::abs(coeffs[8]) < 0.1) coeffs[8] = {1.0, 0.0};
    CHECK_NOTHROW(oracle::poly_roots(coeffs));
  }
}

TEST_CASE("winding count") {
  ExprPtr f = poly_monomial(1, {1.0, 0.0}, {5});
  CHECK(oracle::winding_count(*f, {0, 0}, 1.0) == 5);
  ExprPtr g = make_poly(1, {PolyTerm{{1.0, 0.0}, {1}}, PolyTerm{{5.0, 0.0}, {0}}});
  CHECK(oracle::winding_count(*g, {0, 0}, 1.0) == 0);  // zero-free disk
  CHECK(oracle::winding_count(*g, {0, 0}, 6.0) == 1);
}

TEST_CASE("grid max on monomials") {
  ExprPtr f = poly_monomial(1, {2.0, 0.0}, {3});
  double v = oracle::grid_max(*f, Point{{0, 0}}, 2.0, 1000);
  CHECK(v == doctest::Approx(std::log(2.0) + 3 * std::log(2.0)).epsilon(1e-9));
}
