#pragma once

// Composite growth quantities: admissibility of f, the V_f/N_f quantities,
// and the class parameters (p,q) that place a function g in F_{p,q}(r;t;M2).

#include <cstdint>
#include <optional>

#include "holocert/modulus.hpp"
#include "holocert/zeros.hpp"

namespace holocert {

struct GrowthData {
  double r = 0.0, t = 0.0;
  double M1_log = 0.0;  // ln M_f(r/t)
  double M2_log = 0.0;  // ln M_f(tr)
  double lnR_t2 = 0.0;  // ln R_f(r,t,t^2)
  bool admissible = false;
  std::vector<std::pair<double, double>> R_log_samples;  // (s, ln R_f(r,t,s))
  double V_f = 0.0;
  double N_f = 0.0;
  int vanishing_order_at_0 = 0;

  struct Shifted {
    double M1_log, M2_log, lnR_t2;
    bool admissible;
  };
  std::optional<Shifted> shifted;  // f - f(0) data when f itself fails (re1 B)
};

// M1 := M_f(r/t), M2 := M_f(tr) and the admissibility test
// R_f(r,t,t^2) >= t; on failure the shifted data for f - f(0) is attached.
GrowthData check_admissibility(Workspace& ws, const ExprPtr& f, double r,
                               double t);
GrowthData check_admissibility(const ExprPtr& f, double r, double t,
                               double tol = 1e-9);

struct NfConfig {
  int line_budget = 24;
  int s_grid = 64;
  double s_max_factor = 1e6;
  int valency_budget = 48;
  std::uint64_t seed = 0;
};

// V_f as the min of line-restriction valencies and N_f per its two-branch
// definition (valency for n=1; the k(t,s)-normalized growth sup completed by
// the vanishing-order tail, combined with V_f, for n>=2).
GrowthData n_f_quantity(Workspace& ws, const ExprPtr& f, double r, double t,
                        const NfConfig& cfg = {});
GrowthData n_f_quantity(const ExprPtr& f, double r, double t,
                        const NfConfig& cfg = {});

struct ClassParams {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0, t = 0.0, M2_log = 0.0;
  long lines_sampled = 0;
  long points_sampled = 0;
  bool analytic = false;  // true when (p,q) come from a closed-form cap
  bool stable = false;    // relative change < 1% under budget doubling
  int doublings = 0;
  std::vector<Complex> p_witness_dir;
  Complex p_witness_w{0.0, 0.0};
  Point q_witness_z;
  Complex q_witness_center{0.0, 0.0};
  double q_witness_s = 0.0;
};

struct ClassParamsBudget {
  int lines = 6;
  int w_points = 10;
  int z_points = 6;
  int max_doublings = 2;
  int bernstein_grid = 4;
  std::uint64_t seed = 0;
};

// Sampled lower bounds of the Definition-d11 suprema, tightened by budget
// doubling until the relative change drops below 1%.
ClassParams class_params(Workspace& ws, const ExprPtr& g, double r, double t,
                         double M2_log, const ClassParamsBudget& budget = {});
ClassParams class_params(const ExprPtr& g, double r, double t, double M2_log,
                         const ClassParamsBudget& budget = {});

// Closed-form caps for exponential polynomials: p = m(g) + 2e^2 eps(g) r and
// q = m(g) + 6 eps(g) M_f(e^2 r), or q = deg_w when no exponent involves w.
ClassParams class_params_exp_poly(Workspace& ws, const ExprPtr& g, double r,
                                  const ExprPtr& f);

// degree m(g) = sum_j (1 + deg p_j) and exponential type eps(g) = max |l_j|_2
double exp_poly_degree(const FuncExpr& g);
double exp_poly_type(const FuncExpr& g);

}  // namespace holocert
