#pragma once

// Every named closed-form constant of the certified inequalities, evaluated
// in one auditable place. All formulas are evaluated in log-safe arithmetic;
// quantities that can leave double range (r0) are carried as logs as well.

#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace holocert {

struct ConstantsRequest {
  double t = 0.0;  // required, 1 < t <= 9
  std::optional<double> d;       // growth exponent for kappa
  std::optional<double> H;       // Cartan disk parameter, 0 < H <= e/sqrt(t)
  std::optional<double> s;       // k(t,s) parameter, s >= t
  std::optional<double> M;       // normalized minimum bound, 0 < M <= t^-2
  std::optional<double> M1_log;  // ln M1
  std::optional<double> M2_log;  // ln M2
  std::optional<double> rho;     // order, for alpha_rho
};

struct ConstantsBundle {
  double t = 0.0;
  std::optional<double> a1_bound;  // upper bound for a1(t)
  std::optional<double> a2_bound;  // upper bound for a2(t)
  std::optional<double> c1_t;      // c1(t), univariate-case constant
  std::optional<double> c2_t;      // c2(t)
  std::optional<double> kappa;     // kappa(d;t)
  std::optional<double> kappa_other_branch;  // recorded at piecewise joints
  std::optional<double> cH;        // c(H)
  std::optional<double> gamma_t;   // gamma(t)
  std::optional<double> lambda_t;  // lambda(t), needs M
  std::optional<double> delta_t;   // delta(t), needs M
  std::optional<double> r0_t;      // r0(t), may underflow to 0; see log
  std::optional<double> log_r0_t;  // ln r0(t), always finite
  std::optional<double> k_ts;      // k(t,s)
  std::optional<double> c_M1M2_t;  // c(M1,M2,t), needs M1_log/M2_log
  std::optional<double> alpha_rho;
};

// Individual formulas.
double a1_bound(double t);
double a2_bound(double t);
double c1_t(double t);
double c2_t(double t);
double kappa(double d, double t);
double c_of_H(double H, double t);
double gamma_t(double t);
double lambda_t(double t, double M);
double delta_t(double t, double M);
double log_r0_t(double t, double M);
double k_ts(double t, double s);
double c_M1M2_t(double M1_log, double M2_log, double t);
double alpha_rho(double rho);

// Validates parameter ranges (throws std::domain_error naming the violated
// constraint) and fills exactly the requested fields.
ConstantsBundle eval_constants(const ConstantsRequest& req);

void check_t_range(double t);  // 1 < t <= 9

nlohmann::json constants_to_json(const ConstantsBundle& b);

}  // namespace holocert
