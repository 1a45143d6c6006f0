#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "holocert/constants.hpp"

using namespace holocert;

namespace {
constexpr double kE = std::numbers::e;
}

TEST_CASE("bounds at t = 9 match the worked example") {
  CHECK(a1_bound(9.0) == doctest::Approx(506.25).epsilon(1e-12));
  // (576 + 162 ln(54 e)) / 16
  double expected = (576.0 + 162.0 * std::log(54.0 * kE)) / 16.0;
  CHECK(a2_bound(9.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(a2_bound(9.0) == doctest::Approx(86.5134634715).epsilon(1e-9));
  // compatible with the c1 < 87, c2 < 510 digest
  CHECK(a2_bound(9.0) < 87.0);
  CHECK(a1_bound(9.0) < 510.0);
}

TEST_CASE("kappa at t = e") {
  CHECK(kappa(1.0, kE) == doctest::Approx(kE).epsilon(1e-12));
  CHECK(kappa(0.0, 9.0) == 0.0);
  // kappa(d;e) < 9d on a log grid of d
  for (double d = 1e-3; d <= 1e3; d *= 1.35) {
    CHECK(kappa(d, kE) < 9.0 * d);
  }
}

TEST_CASE("kappa mean-value bound for the top branch") {
  // kappa(d;t) <= e d / ln t for d >= 1/(e-1), t >= e
  for (double t : {kE, 4.0, 6.5, 9.0}) {
    for (double d = 1.0 / (kE - 1.0); d <= 100.0; d *= 1.7) {
      CHECK(kappa(d, t) <= kE * d / std::log(t) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("kappa records both values at the piecewise joints") {
  double t = 9.0;
  ConstantsRequest req;
  req.t = t;
  req.d = 1.0 / (kE - 1.0);
  ConstantsBundle b = eval_constants(req);
  REQUIRE(b.kappa.has_value());
  REQUIRE(b.kappa_other_branch.has_value());
  CHECK(*b.kappa == doctest::Approx(kE / (std::pow(t, std::log1p(1.0 / *req.d)) - 1.0)));
  CHECK(*b.kappa_other_branch == doctest::Approx(std::exp(*req.d) / (t - 1.0)));
}

TEST_CASE("k(t,s) values") {
  CHECK(k_ts(9.0, 9.0) ==
        doctest::Approx(std::log(54.0) + std::numbers::pi * std::numbers::pi)
            .epsilon(1e-12));
  CHECK(k_ts(9.0, 9.0) == doctest::Approx(13.8585884477).epsilon(1e-9));
  CHECK(k_ts(9.0, 81.0) == doctest::Approx(16.0558130250).epsilon(1e-9));
}

TEST_CASE("r0 lies in (0,1) and delta >= 1 for admissible M") {
  for (double t : {1.3, 2.0, 4.0, 9.0}) {
    for (double M : {1.0 / (t * t), 1e-4 / (t * t), 1e-12}) {
      double lr0 = log_r0_t(t, M);
      CHECK(lr0 < 0.0);            // r0 < 1
      CHECK(std::isfinite(lr0));   // r0 > 0 in the log domain
      CHECK(delta_t(t, M) >= 1.0);
      CHECK(lambda_t(t, M) > 0.0);
    }
  }
}

TEST_CASE("constants are continuous in t away from the kappa joints") {
  auto fields = {a1_bound, a2_bound, c1_t, c2_t, gamma_t};
  double prev_t = 1.05;
  for (double t = prev_t + 1e-3; t <= 9.0; t += 0.05) {
    for (auto f : fields) {
      double lhs = f(prev_t), rhs = f(t);
      CHECK(std::abs(rhs - lhs) <= 2e3 * (t - prev_t) * (1.0 + std::abs(lhs)));
    }
    prev_t = t;
  }
}

TEST_CASE("range guards name the violated constraint") {
  CHECK_THROWS_WITH_AS(a1_bound(12.0), "parameter out of range: requires 1<t<=9",
                       std::domain_error);
  CHECK_THROWS_AS(lambda_t(4.0, 0.5), std::domain_error);  // M > t^-2
  CHECK_THROWS_AS(c_of_H(2.0, 9.0), std::domain_error);    // H > e/sqrt(t)
  CHECK_THROWS_AS(k_ts(4.0, 2.0), std::domain_error);      // s < t
}

TEST_CASE("c(M1,M2,t) composes a2 and the log ratio") {
  double t = 9.0, M1 = 1.0 / 81.0, M2 = 81.0;
  double expect = a2_bound(t) * std::log(a1_bound(t) * M2 / M1);
  CHECK(c_M1M2_t(std::log(M1), std::log(M2), t) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("alpha_rho") {
  CHECK(alpha_rho(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(alpha_rho(0.5) == 1.0);
}
