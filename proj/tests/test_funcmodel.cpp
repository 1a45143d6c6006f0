#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "holocert/function.hpp"

using namespace holocert;

namespace {

ExprPtr z_pow(int d) { return poly_monomial(1, {1.0, 0.0}, {d}); }

ExprPtr exp_z_exppoly() {
  // e^z as an exponential polynomial: 1 * e^{1*z}
  return make_exppoly(1, {ExpPolyTerm{{PolyTerm{{1.0, 0.0}, {0}}},
                                      {Complex{1.0, 0.0}}}});
}

ExprPtr exp_z_expof() {
  return exp_of(poly_monomial(1, {1.0, 0.0}, {1}));
}

std::mt19937_64 rng(12345);

Complex random_complex(double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("eval on the stock examples") {
  // z^2 - 1/4 at z = 1/2 has a root by construction
  ExprPtr f = make_poly(1, {PolyTerm{{1.0, 0.0}, {2}}, PolyTerm{{-0.25, 0.0}, {0}}});
  CHECK(std::abs(eval(*f, Point{{0.5, 0.0}})) == doctest::Approx(0.0));

  CHECK(std::abs(eval(*exp_z_expof(), Point{{0.0, 0.0}}) - 1.0) < 1e-15);

  ExprPtr g = poly_monomial(2, {1.0, 0.0}, {2, 1});  // z1^2 z2
  CHECK(std::abs(eval(*g, Point{{2.0, 0.0}, {3.0, 0.0}}) - 12.0) < 1e-12);
}

TEST_CASE("log evaluation agrees with plain evaluation") {
  ExprPtr f = make_poly(
      1, {PolyTerm{{1.0, 0.0}, {2}}, PolyTerm{{1.0, 0.0}, {1}},
          PolyTerm{{1.0, 0.0}, {0}}});
  for (int k = 0; k < 25; ++k) {
    Point z{random_complex(2.0)};
    Complex direct = eval(*f, z);
    LogComplex lg = eval_log(*f, z);
    CHECK(std::abs(lg.value() - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("log evaluation survives 9^(d^2)-sized values") {
  // (z w)^d at |z|=|w|=9 for d = 200 overflows doubles; the log path must not.
  int d = 200;
  ExprPtr g = poly_monomial(2, {1.0, 0.0}, {d, d});
  Point z{{9.0, 0.0}, {9.0, 0.0}};
  LogComplex v = eval_log(*g, z);
  CHECK(v.log_mag == doctest::Approx(2 * d * std::log(9.0)).epsilon(1e-12));
  CHECK_THROWS_AS(eval(*g, z), EvalOverflow);
}

TEST_CASE("directional derivatives") {
  ExprPtr f = z_pow(3);
  Complex d = directional_derivative(*f, Point{{1.0, 0.0}}, Point{{1.0, 0.0}});
  CHECK(std::abs(d - Complex{3.0, 0.0}) < 1e-12);

  ExprPtr g = poly_monomial(2, {1.0, 0.0}, {1, 1});  // z1 z2
  Complex d2 = directional_derivative(*g, Point{{1.0, 0.0}, {1.0, 0.0}},
                                      Point{{1.0, 0.0}, {0.0, 0.0}});
  CHECK(std::abs(d2 - Complex{1.0, 0.0}) < 1e-12);

  // e^z at z=1: symbolic (ExpPoly) path vs quadrature (ExpOf) path to 1e-10
  Complex sym = directional_derivative(*exp_z_exppoly(), Point{{1.0, 0.0}},
                                       Point{{1.0, 0.0}});
  Complex quad = directional_derivative(*exp_z_expof(), Point{{1.0, 0.0}},
                                        Point{{1.0, 0.0}});
  CHECK(std::abs(sym - Complex{std::numbers::e, 0.0}) < 1e-12);
  CHECK(std::abs(quad - sym) < 1e-10);
}

TEST_CASE("symbolic poly derivative matches central differences") {
  ExprPtr f = make_poly(2, {PolyTerm{{1.5, 0.25}, {3, 1}},
                            PolyTerm{{-0.5, 1.0}, {0, 2}},
                            PolyTerm{{2.0, 0.0}, {1, 0}}});
  for (int k = 0; k < 20; ++k) {
    Point z{random_complex(1.0), random_complex(1.0)};
    std::vector<Complex> v{random_complex(1.0), random_complex(1.0)};
    double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    if (n < 0.1) continue;
    v[0] /= n;
    v[1] /= n;
    Complex sym = directional_derivative(*f, z, Point{v[0], v[1]});
    double h = 1e-6;
    Point zp{z[0] + h * v[0], z[1] + h * v[1]};
    Point zm{z[0] - h * v[0], z[1] - h * v[1]};
    Complex fd = (eval(*f, zp) - eval(*f, zm)) / (2.0 * h);
    CHECK(std::abs(sym - fd) <= 1e-6 * (1.0 + std::abs(sym)));
  }
}

TEST_CASE("line restriction") {
  // z1^2 + z2^2 along e1 is zeta^2
  ExprPtr f = make_poly(2, {PolyTerm{{1.0, 0.0}, {2, 0}},
                            PolyTerm{{1.0, 0.0}, {0, 2}}});
  ExprPtr h = restrict_to_line(f, {Complex{1.0, 0.0}, Complex{0.0, 0.0}});
  REQUIRE(h->arity() == 1);
  CHECK(std::abs(eval(*h, Point{{2.0, 0.0}}) - 4.0) < 1e-12);

  // z1 z2 along (1,1)/sqrt2 is zeta^2/2, checked at 10 random points
  double s = 1.0 / std::sqrt(2.0);
  ExprPtr g = poly_monomial(2, {1.0, 0.0}, {1, 1});
  ExprPtr hg = restrict_to_line(g, {Complex{s, 0.0}, Complex{s, 0.0}});
  for (int k = 0; k < 10; ++k) {
    Complex zeta = random_complex(2.0);
    Complex lhs = eval(*hg, Point{zeta});
    Complex rhs = zeta * zeta * 0.5;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("line restriction of a homogeneous polynomial is f(v) zeta^d") {
  ExprPtr f = make_poly(2, {PolyTerm{{2.0, 1.0}, {2, 1}},
                            PolyTerm{{0.0, -1.0}, {0, 3}}});
  for (int k = 0; k < 10; ++k) {
    std::vector<Complex> v{random_complex(), random_complex()};
    double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    if (n < 0.1) continue;
    v[0] /= n;
    v[1] /= n;
    double n2 = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    v[0] /= n2;
    v[1] /= n2;
    ExprPtr h = restrict_to_line(f, {v[0], v[1]});
    Complex fv = eval(*f, Point{v[0], v[1]});
    for (double r : {0.5, 1.5}) {
      Complex zeta{r, 0.3};
      Complex expect = fv * std::pow(zeta, 3);
      CHECK(std::abs(eval(*h, Point{zeta}) - expect) <=
            1e-11 * (1.0 + std::abs(expect)));
    }
  }
}

TEST_CASE("restriction-evaluation consistency on random lines") {
  ExprPtr f = make_poly(3, {PolyTerm{{1.0, 0.0}, {2, 1, 0}},
                            PolyTerm{{0.5, -0.5}, {0, 0, 3}},
                            PolyTerm{{-1.0, 2.0}, {1, 1, 1}}});
  for (int k = 0; k < 20; ++k) {
    std::vector<Complex> v{random_complex(), random_complex(), random_complex()};
    double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
    if (n < 0.1) continue;
    for (Complex& c : v) c /= n;
    double n2 = std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
    for (Complex& c : v) c /= n2;
    ExprPtr h = restrict_to_line(f, v);
    Complex zeta = random_complex(1.5);
    Point amb{zeta * v[0], zeta * v[1], zeta * v[2]};
    Complex direct = eval(*f, amb);
    CHECK(std::abs(eval(*h, Point{zeta}) - direct) <=
          1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("graph restriction") {
  // g(z,w) = w with f = z^2 restricts to z^2
  ExprPtr w = poly_monomial(2, {1.0, 0.0}, {0, 1});
  ExprPtr f = z_pow(2);
  ExprPtr gf = graph_restriction(w, f);
  CHECK(std::abs(eval(*gf, Point{{3.0, 0.0}}) - 9.0) < 1e-12);

  // g(z,w) = w - f(z) restricts to the zero function
  ExprPtr g2 = make_poly(2, {PolyTerm{{1.0, 0.0}, {0, 1}},
                             PolyTerm{{-1.0, 0.0}, {2, 0}}});
  ExprPtr gf2 = graph_restriction(g2, f);
  CHECK(is_identically_zero(*gf2));

  // g(z,w) = w^d with f = z restricts to z^d
  ExprPtr g3 = poly_monomial(2, {1.0, 0.0}, {0, 4});
  ExprPtr gf3 = graph_restriction(g3, z_pow(1));
  CHECK(std::abs(eval(*gf3, Point{{2.0, 0.0}}) - 16.0) < 1e-12);
}

TEST_CASE("graph restriction is additive and multiplicative") {
  ExprPtr f = make_poly(1, {PolyTerm{{0.3, 0.7}, {2}}, PolyTerm{{1.0, 0.0}, {1}}});
  ExprPtr g1 = make_poly(2, {PolyTerm{{1.0, 0.5}, {1, 1}}});
  ExprPtr g2 = make_poly(2, {PolyTerm{{-0.5, 0.0}, {0, 2}},
                             PolyTerm{{2.0, 0.0}, {1, 0}}});
  ExprPtr sum_first = graph_restriction(sum_of({g1, g2}), f);
  ExprPtr restrict_first = sum_of({graph_restriction(g1, f), graph_restriction(g2, f)});
  ExprPtr prod_first = graph_restriction(product_of({g1, g2}), f);
  ExprPtr restrict_prod = product_of({graph_restriction(g1, f), graph_restriction(g2, f)});
  for (int k = 0; k < 15; ++k) {
    Point z{random_complex(1.2)};
    Complex a = eval(*sum_first, z), b = eval(*restrict_first, z);
    CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
    Complex c = eval(*prod_first, z), d = eval(*restrict_prod, z);
    CHECK(std::abs(c - d) <= 1e-12 * (1.0 + std::abs(c)));
  }
}

TEST_CASE("arity violations are rejected") {
  ExprPtr f = z_pow(2);
  CHECK_THROWS_AS(eval(*f, Point{{1.0, 0.0}, {1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(graph_restriction(z_pow(1), z_pow(1)), std::invalid_argument);
  CHECK_THROWS_AS(restrict_to_line(poly_monomial(2, {1.0, 0.0}, {1, 0}),
                                   {Complex{2.0, 0.0}, Complex{0.0, 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("shift and scale semantics") {
  ExprPtr f = z_pow(2);
  // f(z + 1) - 4 at z = 1 gives 0
  ExprPtr s = shifted(f, {Complex{1.0, 0.0}}, {-4.0, 0.0});
  CHECK(std::abs(eval(*s, Point{{1.0, 0.0}})) < 1e-12);
  // 3 f(2z) at z = 1 gives 12
  ExprPtr sc = scaled(f, {2.0, 0.0}, {3.0, 0.0});
  CHECK(std::abs(eval(*sc, Point{{1.0, 0.0}}) - 12.0) < 1e-12);
}

TEST_CASE("json round-trip is bit-exact on coefficients") {
  ExprPtr f = make_poly(
      2, {PolyTerm{{0.1, -0.3000000000000004}, {2, 1}},
          PolyTerm{{1e-17, 3.14159265358979}, {0, 5}}});
  ExprPtr g = graph_restriction(
      make_poly(3, {PolyTerm{{2.0, 0.0}, {1, 0, 1}}}), f);
  ExprPtr ep = make_exppoly(
      2, {ExpPolyTerm{{PolyTerm{{0.5, 0.5}, {1, 0}}},
                      {Complex{1.0, -2.0}, Complex{0.25, 0.0}}}});
  ExprPtr top = sum_of({g, ep});

  std::string text = expr_to_json_string(*top);
  ExprPtr back = expr_from_json_string(text);
  CHECK(expr_to_json_string(*back) == text);
  for (int k = 0; k < 10; ++k) {
    Point z{random_complex(), random_complex()};
    Complex a = eval(*top, z), b = eval(*back, z);
    CHECK(a.real() == b.real());
    CHECK(a.imag() == b.imag());
  }
}

TEST_CASE("identically-zero and constant probes") {
  CHECK(is_identically_zero(*make_poly(1, {})));
  CHECK(is_identically_zero(*graph_restriction(
      make_poly(2, {PolyTerm{{1.0, 0.0}, {0, 1}}, PolyTerm{{-1.0, 0.0}, {3, 0}}}),
      z_pow(3))));
  CHECK_FALSE(is_identically_zero(*z_pow(1)));
  CHECK(is_constant_probe(*poly_constant(1, {2.0, 0.0})));
  CHECK_FALSE(is_constant_probe(*exp_z_expof()));
}
