#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "holocert/constants.hpp"
#include "holocert/quantities.hpp"
#include "holocert/sampling.hpp"

using namespace holocert;

namespace {

ExprPtr z_pow(int d) { return poly_monomial(1, {1.0, 0.0}, {d}); }

std::mt19937_64 rng(31337);

ExprPtr random_poly_no_constant(int deg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PolyTerm> terms;
  for (int k = 1; k <= deg; ++k) terms.push_back(PolyTerm{{u(rng), u(rng)}, {k}});
  terms.back().coef += Complex{1.5, 0.0};
  return make_poly(1, std::move(terms));
}

}  // namespace

TEST_CASE("admissibility of monomials") {
  for (int d : {1, 2, 5}) {
    for (double t : {2.0, 9.0}) {
      GrowthData g = check_admissibility(z_pow(d), 1.0, t);
      CHECK(g.admissible);
      CHECK(g.lnR_t2 == doctest::Approx(d * std::log(t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("1+z at t=2 fails and the shift rescues it") {
  ExprPtr f = make_poly(1, {PolyTerm{{1.0, 0.0}, {0}}, PolyTerm{{1.0, 0.0}, {1}}});
  GrowthData g = check_admissibility(f, 1.0, 2.0);
  CHECK_FALSE(g.admissible);
  CHECK(std::exp(g.lnR_t2) == doctest::Approx(1.5 / 1.25).epsilon(1e-9));
  REQUIRE(g.shifted.has_value());
  CHECK(g.shifted->admissible);
  CHECK(g.shifted->M1_log == doctest::Approx(std::log(0.5)).epsilon(1e-9));
  CHECK(g.shifted->M2_log == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("functions vanishing at the origin are always admissible") {
  for (int trial = 0; trial < 20; ++trial) {
    ExprPtr f = random_poly_no_constant(5);
    GrowthData g = check_admissibility(f, 1.0, 3.0);
    CHECK(g.admissible);
  }
}

TEST_CASE("N_f of univariate monomials is the degree") {
  for (int d : {1, 2, 4}) {
    GrowthData g = n_f_quantity(z_pow(d), 1.0, 9.0);
    CHECK(g.N_f == static_cast<double>(d));
    CHECK(g.vanishing_order_at_0 == d);
  }
}

TEST_CASE("N_f of homogeneous polynomials equals the degree for n=2") {
  for (int d : {1, 2, 3}) {
    std::vector<ExprPtr> fams{
        make_poly(2, {PolyTerm{{1.0, 0.0}, {d, 0}}, PolyTerm{{1.0, 0.0}, {0, d}}}),
        poly_monomial(2, {1.0, 0.0}, {d, 0})};
    for (const ExprPtr& f : fams) {
      GrowthData g = n_f_quantity(f, 1.0, 9.0, NfConfig{.line_budget = 12});
      CHECK(g.N_f == static_cast<double>(d));
      CHECK(g.V_f == static_cast<double>(d));
    }
  }
}

TEST_CASE("N_f for z1^2 + z2^3 at t=4") {
  ExprPtr f = make_poly(2, {PolyTerm{{1.0, 0.0}, {2, 0}}, PolyTerm{{1.0, 0.0}, {0, 3}}});
  NfConfig cfg;
  cfg.line_budget = 12;
  GrowthData g = n_f_quantity(f, 1.0, 4.0, cfg);
  CHECK(g.V_f == 2.0);
  CHECK(g.N_f >= 2.0);
  // stability under doubling the line budget
  cfg.line_budget = 24;
  GrowthData g2 = n_f_quantity(f, 1.0, 4.0, cfg);
  CHECK(g2.N_f == g.N_f);
}

TEST_CASE("Lemma le41 consistency for n=1") {
  // ln R_f(r,t,s)/k(t,s) <= v_f(r/sqrt t) for each sampled s
  ExprPtr f = random_poly_no_constant(4);
  double r = 1.0, t = 4.0;
  Workspace ws;
  GrowthData g = n_f_quantity(ws, f, r, t);
  ValencyData v = valency(f, Disk{{0, 0}, r / std::sqrt(t)});
  for (const auto& [s, lnR] : g.R_log_samples)
    CHECK(lnR / k_ts(t, s) <= v.valency + 1e-9);
}

TEST_CASE("sandwich: inf_l v <= N_f <= sup_l v over sampled lines") {
  ExprPtr f = make_poly(2, {PolyTerm{{1.0, 0.0}, {2, 0}},
                            PolyTerm{{0.5, 0.0}, {1, 1}},
                            PolyTerm{{-0.25, 0.0}, {0, 2}}});
  double r = 1.0, t = 9.0;
  GrowthData g = n_f_quantity(f, r, t, NfConfig{.line_budget = 10});
  int vmin = std::numeric_limits<int>::max(), vmax = 0;
  for (int j = 0; j < 10; ++j) {
    std::vector<Complex> dir = sphere_point(2, j, 0);
    ExprPtr fl = restrict_to_line(f, dir);
    if (is_identically_zero(*fl, r) || is_constant_probe(*fl)) continue;
    ValencyData v = valency(fl, Disk{{0, 0}, r / 3.0});
    vmin = std::min(vmin, v.valency);
    vmax = std::max(vmax, v.valency);
  }
  CHECK(g.N_f >= vmin - 1e-9);
  CHECK(g.N_f <= vmax + 1e-9);
}

TEST_CASE("class params of g(z,w)=w") {
  ExprPtr g = poly_monomial(2, {1.0, 0.0}, {0, 1});
  ClassParams cp = class_params(g, 1.0, 9.0, std::log(2.0));
  CHECK(cp.p == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(cp.q <= 1.0 + 1e-6);
  CHECK(cp.q == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("bidegree caps from the classical Bernstein inequality") {
  // g = z^k w^l: p <= k ln t, q <= l
  for (int k : {1, 2}) {
    for (int l : {1, 2}) {
      ExprPtr g = poly_monomial(2, {1.0, 0.0}, {k, l});
      double t = 9.0;
      ClassParams cp = class_params(g, 1.0, t, std::log(3.0));
      CHECK(cp.p <= k * std::log(t) + 1e-6);
      CHECK(cp.p == doctest::Approx(k * std::log(t)).epsilon(1e-6));
      CHECK(cp.q <= l + 1e-6);
    }
  }
}

TEST_CASE("class params are invariant under scaling g") {
  ExprPtr g = make_poly(2, {PolyTerm{{1.0, 0.0}, {1, 1}}, PolyTerm{{0.5, 0.0}, {0, 2}}});
  ExprPtr g2 = scaled(g, {1.0, 0.0}, {0.0, -40.0});
  ClassParams a = class_params(g, 1.0, 4.0, std::log(1.5));
  ClassParams b = class_params(g2, 1.0, 4.0, std::log(1.5));
  CHECK(std::abs(a.p - b.p) < 1e-9);
  CHECK(std::abs(a.q - b.q) < 1e-9);
}

TEST_CASE("class params grow with the budget (monotone lower bounds)") {
  ExprPtr g = make_poly(2, {PolyTerm{{1.0, 0.0}, {2, 1}}, PolyTerm{{0.3, 0.4}, {1, 2}}});
  ClassParamsBudget small{.lines = 2, .w_points = 3, .z_points = 2, .max_doublings = 0};
  ClassParamsBudget big{.lines = 8, .w_points = 12, .z_points = 8, .max_doublings = 0};
  ClassParams a = class_params(g, 1.0, 4.0, std::log(2.0), small);
  ClassParams b = class_params(g, 1.0, 4.0, std::log(2.0), big);
  CHECK(b.p >= a.p - 1e-12);
  CHECK(b.q >= a.q - 1e-12);
}

TEST_CASE("exponential polynomial caps") {
  // purely polynomial content: p = q = m(g)
  {
    ExprPtr g = make_exppoly(
        2, {ExpPolyTerm{{PolyTerm{{1.0, 0.0}, {1, 1}}},
                        {Complex{0.0, 0.0}, Complex{0.0, 0.0}}}});
    Workspace ws;
    ClassParams cp = class_params_exp_poly(ws, g, 2.0, z_pow(1));
    CHECK(exp_poly_degree(*g) == 3.0);  // 1 + deg(z w) = 3
    CHECK(cp.p == doctest::Approx(3.0));
    CHECK(cp.q == doctest::Approx(3.0));
  }
  // g = e^{z+w}: m=1, eps = sqrt(2), p = 1 + 2 e^2 sqrt(2) r
  {
    ExprPtr g = make_exppoly(
        2, {ExpPolyTerm{{PolyTerm{{1.0, 0.0}, {0, 0}}},
                        {Complex{1.0, 0.0}, Complex{1.0, 0.0}}}});
    Workspace ws;
    double r = 1.5;
    ClassParams cp = class_params_exp_poly(ws, g, r, z_pow(1));
    double e2 = std::numbers::e * std::numbers::e;
    CHECK(exp_poly_type(*g) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(cp.p == doctest::Approx(1.0 + 2.0 * e2 * std::sqrt(2.0) * r).epsilon(1e-12));
    // q = m + 6 eps M_f(e^2 r) with f = z
    CHECK(cp.q == doctest::Approx(1.0 + 6.0 * std::sqrt(2.0) * e2 * r).epsilon(1e-6));
  }
  // exponent independent of w: q = deg_w p1
  {
    ExprPtr g = make_exppoly(
        2, {ExpPolyTerm{{PolyTerm{{2.0, 0.0}, {1, 3}}},
                        {Complex{1.0, 0.0}, Complex{0.0, 0.0}}}});
    Workspace ws;
    ClassParams cp = class_params_exp_poly(ws, g, 1.0, z_pow(1));
    CHECK(cp.q == 3.0);
  }
  // non-ExpPoly input is rejected
  Workspace ws;
  CHECK_THROWS_AS(class_params_exp_poly(ws, poly_monomial(2, {1, 0}, {1, 1}), 1.0, z_pow(1)),
                  std::invalid_argument);
}

TEST_CASE("range guards") {
  CHECK_THROWS_AS(check_admissibility(z_pow(2), 1.0, 12.0), std::domain_error);
  CHECK_THROWS_AS(check_admissibility(z_pow(2), -1.0, 4.0), std::domain_error);
  // inadmissible f is rejected by n_f_quantity
  ExprPtr f = make_poly(1, {PolyTerm{{1.0, 0.0}, {0}}, PolyTerm{{1.0, 0.0}, {1}}});
  CHECK_THROWS_AS(n_f_quantity(f, 1.0, 2.0), std::domain_error);
}
