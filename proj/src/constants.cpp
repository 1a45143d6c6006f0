#include "holocert/constants.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace holocert {

namespace {
constexpr double kE = std::numbers::e;
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

void check(bool ok, const std::string& constraint) {
  if (!ok) throw std::domain_error("parameter out of range: requires " + constraint);
}
}  // namespace

void check_t_range(double t) { check(t > 1.0 && t <= 9.0, "1<t<=9"); }

double a1_bound(double t) {
  check_t_range(t);
  double st = std::sqrt(t);
  return 300.0 * (st + 1.0) * t * st / ((t - 1.0) * (t - 1.0));
}

double a2_bound(double t) {
  check_t_range(t);
  double st = std::sqrt(t);
  double num = 36.0 * (st + 1.0) * (st + 1.0) +
               162.0 * std::log(108.0 * kE / (st - 1.0));
  return num / std::pow(st - 1.0, 4);
}

double c1_t(double t) {
  check_t_range(t);
  double st = std::sqrt(t);
  return 50.0 * (st + 1.0) / ((t - 1.0) * (t - 1.0));
}

double c2_t(double t) {
  check_t_range(t);
  double st = std::sqrt(t);
  double num = 18.0 * (st + 1.0) * (st + 1.0) +
               81.0 * std::log(108.0 * kE / (st - 1.0));
  return num / std::pow(st - 1.0, 4);
}

double kappa(double d, double t) {
  check_t_range(t);
  check(d >= 0.0, "d>=0");
  double st = std::sqrt(t);
  double low_joint = std::log((1.0 + t) / (2.0 * st));
  double high_joint = 1.0 / (kE - 1.0);
  if (d >= high_joint) return kE / (std::pow(t, std::log1p(1.0 / d)) - 1.0);
  if (d < low_joint) return 2.0 * d / (st - 1.0);
  return std::exp(d) / (t - 1.0);
}

double c_of_H(double H, double t) {
  check_t_range(t);
  double st = std::sqrt(t);
  check(H > 0.0 && H <= kE / st, "0<H<=e/sqrt(t)");
  double p2 = (st + 1.0) * (st + 1.0);
  return (p2 * p2 + 18.0 * p2 * (1.0 - std::log(H))) /
         (2.0 * (t - 1.0) * (t - 1.0));
}

double gamma_t(double t) {
  check_t_range(t);
  double st = std::sqrt(t);
  double p2 = (st + 1.0) * (st + 1.0);
  return (p2 * p2 +
          18.0 * p2 * std::log(4.0 * kE * t * st / (st - 1.0))) /
         (2.0 * (t - 1.0) * (t - 1.0));
}

double lambda_t(double t, double M) {
  check_t_range(t);
  check(M > 0.0 && M <= 1.0 / (t * t), "0<M<=t^-2");
  double st = std::sqrt(t);
  return 9.0 * (st + 1.0) * (st + 1.0) / ((t - 1.0) * (t - 1.0)) *
         (std::log(2.0 * (st + 1.0) / ((t - 1.0) * (t - 1.0))) - std::log(M));
}

double delta_t(double t, double M) {
  check_t_range(t);
  check(M > 0.0 && M <= 1.0 / (t * t), "0<M<=t^-2");
  double st = std::sqrt(t);
  return 9.0 * (st + 1.0) * (st + 1.0) / (2.0 * (t - 1.0) * (t - 1.0)) *
         (std::log(4.0 * (st + 1.0) / (t - 1.0)) - std::log(M));
}

double log_r0_t(double t, double M) {
  check_t_range(t);
  check(M > 0.0 && M <= 1.0 / (t * t), "0<M<=t^-2");
  double st = std::sqrt(t);
  double base_log = std::log(M) + std::log((t - 1.0) / (4.0 * (st + 1.0)));
  return (gamma_t(t) + 1.0) * base_log;
}

double k_ts(double t, double s) {
  check(t > 1.0, "t>1");
  check(s >= t, "t<=s<inf");
  double st = std::sqrt(t);
  return std::log(8.0 * s * st / ((st - 1.0) * (st - 1.0))) + kPi2;
}

double c_M1M2_t(double M1_log, double M2_log, double t) {
  return a2_bound(t) * (std::log(a1_bound(t)) + M2_log - M1_log);
}

double alpha_rho(double rho) {
  check(rho > 0.0, "rho>0");
  return std::min(1.0, std::log1p(1.0 / rho));
}

ConstantsBundle eval_constants(const ConstantsRequest& req) {
  check_t_range(req.t);
  ConstantsBundle b;
  b.t = req.t;
  b.a1_bound = a1_bound(req.t);
  b.a2_bound = a2_bound(req.t);
  b.c1_t = c1_t(req.t);
  b.c2_t = c2_t(req.t);
  b.gamma_t = gamma_t(req.t);
  if (req.d) {
    b.kappa = kappa(*req.d, req.t);
    // At the two piecewise joints both branch values are recorded; the paper
    // does not state which branch wins at the boundary.
    double st = std::sqrt(req.t);
    double low = std::log((1.0 + req.t) / (2.0 * st));
    double high = 1.0 / (kE - 1.0);
    if (*req.d == low) b.kappa_other_branch = 2.0 * *req.d / (st - 1.0);
    if (*req.d == high) b.kappa_other_branch = std::exp(*req.d) / (req.t - 1.0);
  }
  if (req.H) b.cH = c_of_H(*req.H, req.t);
  if (req.s) b.k_ts = k_ts(req.t, *req.s);
  if (req.M) {
    b.lambda_t = lambda_t(req.t, *req.M);
    b.delta_t = delta_t(req.t, *req.M);
    double lr0 = log_r0_t(req.t, *req.M);
    b.log_r0_t = lr0;
    b.r0_t = std::exp(lr0);  // may underflow; the log field stays exact
  }
  if (req.M1_log && req.M2_log)
    b.c_M1M2_t = c_M1M2_t(*req.M1_log, *req.M2_log, req.t);
  if (req.rho) b.alpha_rho = alpha_rho(*req.rho);
  return b;
}

nlohmann::json constants_to_json(const ConstantsBundle& b) {
  nlohmann::json j;
  j["t"] = b.t;
  auto put = [&j](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("a1_bound", b.a1_bound);
  put("a2_bound", b.a2_bound);
  put("c1_t", b.c1_t);
  put("c2_t", b.c2_t);
  put("kappa", b.kappa);
  put("kappa_other_branch", b.kappa_other_branch);
  put("cH", b.cH);
  put("gamma_t", b.gamma_t);
  put("lambda_t", b.lambda_t);
  put("delta_t", b.delta_t);
  put("r0_t", b.r0_t);
  put("log_r0_t", b.log_r0_t);
  put("k_ts", b.k_ts);
  put("c_M1M2_t", b.c_M1M2_t);
  put("alpha_rho", b.alpha_rho);
  return j;
}

}  // namespace holocert
