#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "holocert/constants.hpp"
#include "holocert/geometry.hpp"
#include "holocert/oracle.hpp"

using namespace holocert;

namespace {

// F = (z/t)^d satisfies M_F(t)=1, M = M_F(1/t) = t^{-2d}
ExprPtr monomial_frame(int d, double t) {
  return poly_monomial(1, {std::pow(1.0 / t, d), 0.0}, {d});
}

std::mt19937_64 rng(5150);

}  // namespace

TEST_CASE("normalize_frame on the monomial family") {
  for (int d : {1, 2, 3}) {
    Workspace ws;
    ExprPtr F = monomial_frame(d, 4.0);
    NormalizedFrame fr = normalize_frame(ws, F, 4.0);
    CHECK(fr.N_F == d);
    CHECK(std::abs(fr.c) < 1e-9);
    CHECK(fr.M == doctest::Approx(std::pow(4.0, -2 * d)).epsilon(1e-9));
    // 1/M >= t^2 (inequality e23)
    CHECK(1.0 / fr.M >= 16.0 * (1 - 1e-12));
  }
}

TEST_CASE("find_center_c for a quadratic with a small linear part") {
  // F = (z^2 + eps z)/(t^2 + eps t) at t = 4: two sheets over most values
  double t = 4.0, eps = 1e-3;
  double denom = t * t + eps * t;
  ExprPtr F = make_poly(1, {PolyTerm{{1.0 / denom, 0.0}, {2}},
                            PolyTerm{{eps / denom, 0.0}, {1}}});
  Workspace ws;
  NormalizedFrame fr = normalize_frame(ws, F, t);
  CHECK(fr.N_F == 2);
  // oracle: roots of z^2 + eps z - denom c
  Complex c = fr.c;
  auto roots = oracle::poly_roots({-c * denom, {eps, 0.0}, {1.0, 0.0}});
  CHECK(oracle::roots_inside(roots, {0, 0}, 0.5) == 2);
}

TEST_CASE("good circle for the monomial family") {
  for (int d : {1, 2, 3}) {
    double t = 4.0;
    Workspace ws;
    ExprPtr F = monomial_frame(d, t);
    double M = std::pow(t, -2.0 * d);
    GoodCircle gc = good_circle(ws, F, t, M);  // c = 0 so F_c = F
    CHECK(gc.found);
    // closed form: min on S_l is (l/4)^d
    CHECK(gc.min_log == doctest::Approx(d * std::log(gc.level / t)).epsilon(1e-6));
    CHECK(gc.min_log >= std::log(2.0) + log_r0_t(t, M));
    // brute-force agreement at the reported level
    double orc = oracle::grid_circle_min(*F, {0, 0}, gc.level, 10000);
    CHECK(std::abs(gc.min_log - orc) < 1e-6 * (1.0 + std::abs(orc)));
  }
}

TEST_CASE("good circle on a zero-free shift reports the first admissible level") {
  // F_c = z/4 - 0.9: no zeros in the unit disk, min modulus well above 2 r0
  double t = 4.0;
  ExprPtr F = make_poly(1, {PolyTerm{{0.25, 0.0}, {1}}, PolyTerm{{-0.9, 0.0}, {0}}});
  Workspace ws;
  GoodCircle gc = good_circle(ws, F, t, 1.0 / (t * t));
  CHECK(gc.found);
  CHECK(gc.margin > 0.0);
}

TEST_CASE("line intersections for the te2 desk instances") {
  for (int d : {2, 3}) {
    double t = 4.0;
    Workspace ws;
    ExprPtr F = monomial_frame(d, t);
    NormalizedFrame fr = normalize_frame(ws, F, t);
    double s = fr.r0 / 3.0;
    GeometryWitness w = line_intersections(ws, F, t, {0.0, 0.0}, s);

    CHECK(static_cast<int>(w.intersection_points.size()) >= d);
    CHECK(w.min_pairwise_distance > w.separation_bound);
    CHECK(w.critical_count < fr.lambda);
    // closed form: roots of z^d = t^d (c + y + c_ys)
    Complex target = (w.c + w.y + w.c_ys) * std::pow(t, d);
    double mod = std::pow(std::abs(target), 1.0 / d);
    for (const Complex& z : w.intersection_points) {
      CHECK(std::abs(z) == doctest::Approx(mod).epsilon(1e-9));
      Complex zd = std::pow(z, d);
      CHECK(std::abs(zd - target) <= 1e-9 * std::abs(target));
    }
  }
}

TEST_CASE("rouche consequence e214 at the good-circle level") {
  double t = 4.0;
  int d = 2;
  Workspace ws;
  ExprPtr F = monomial_frame(d, t);
  NormalizedFrame fr = normalize_frame(ws, F, t);
  ExprPtr F_c = shifted(F, {Complex{0.0, 0.0}}, -fr.c);
  GoodCircle gc = good_circle(ws, F_c, t, fr.M);
  REQUIRE(gc.found);
  int base = count_zeros(F_c, Disk{{0, 0}, gc.level}).count;
  CHECK(base >= fr.N_F);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Complex a = std::polar(2.0 * fr.r0 * u(rng), 2 * std::numbers::pi * u(rng));
    ExprPtr Fa = shifted(F, {Complex{0.0, 0.0}}, -fr.c - a);
    CHECK(count_zeros(Fa, Disk{{0, 0}, gc.level}).count == base);
  }
}

TEST_CASE("cartan cover: zero-free case has no disks") {
  ExprPtr h = make_poly(1, {PolyTerm{{1.0, 0.0}, {1}}, PolyTerm{{5.0, 0.0}, {0}}});
  Workspace ws;
  CartanCover cov = cartan_cover(ws, h, 1.0, 0.3, 0.6, 0.5, 1.0);
  CHECK(cov.k == 0);
  CHECK(cov.violations == 0);
  CHECK(cov.worst_margin >= 0.0);
}

TEST_CASE("cartan cover for z^d against the closed form") {
  int d = 3;
  ExprPtr h = poly_monomial(1, {1.0, 0.0}, {d});
  Workspace ws;
  double R = 1.0, alpha = 0.3, beta = 0.6, H = 0.25;
  CartanCover cov = cartan_cover(ws, h, R, alpha, beta, H, 1.0);
  CHECK(cov.k == 1);
  CHECK(cov.zero_count == d);
  CHECK(cov.radius_sum <= cov.radius_cap);
  // closed-form bound value: m(bR) + ((b+a)/(b-a))^2 (m(aR)-m(bR)) + d ln(H/(b e))
  double expect = d * std::log(beta * R) +
                  std::pow((beta + alpha) / (beta - alpha), 2) *
                      (d * std::log(alpha / beta)) +
                  d * (std::log(H) - 1.0 - std::log(beta));
  CHECK(cov.lower_bound_log == doctest::Approx(expect).epsilon(1e-9));
  CHECK(cov.violations == 0);
}

TEST_CASE("cart2 cover on random scaled quartics") {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<PolyTerm> terms;
    for (int k = 0; k <= 4; ++k) terms.push_back(PolyTerm{{u(rng), u(rng)}, {k}});
    ExprPtr h0 = make_poly(1, terms);
    double t = 4.0, r = 1.0;
    Workspace ws0;
    double m = ws0.log_max(h0, t * r);
    // scale to M_h(tr) = 1
    ExprPtr h = scaled(h0, {1.0, 0.0}, {1.0, 0.0}, -m);
    Workspace ws;
    double H = 0.5 * std::numbers::e / std::sqrt(t);
    CartanCover cov = cartan_cover_t(ws, h, r, t, H, 1000);
    CHECK(cov.violations == 0);
    CHECK(cov.worst_margin >= 0.0);
    REQUIRE(cov.ca6_cap.has_value());
    CHECK(cov.zero_count <= *cov.ca6_cap + 1e-9);
    CHECK(*cov.ca6_cap <= *cov.ca6_cap_weak + 1e-9);
  }
}

TEST_CASE("frame guards reject non-normalized inputs") {
  Workspace ws;
  // M_F(t) > 1
  ExprPtr big = poly_monomial(1, {1.0, 0.0}, {2});
  CHECK_THROWS_AS(normalize_frame(ws, big, 4.0), std::domain_error);
  // |y| > r0
  ExprPtr F = monomial_frame(2, 4.0);
  NormalizedFrame fr = normalize_frame(ws, F, 4.0);
  CHECK_THROWS_AS(line_intersections(ws, F, 4.0, {2.0 * fr.r0, 0.0}, fr.r0 / 3.0),
                  std::domain_error);
}
