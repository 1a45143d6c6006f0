#pragma once

// End-to-end inequality certificates: the two main growth inequalities, their
// Bernstein/Markov/Remez/Jensen corollaries, the directional Markov theorem,
// the curve-chain generalization, and parametrized instance checks of the
// asymptotic theorems. Hypothesis failures are reported, never thrown.

#include <cstdint>

#include "holocert/geometry.hpp"
#include "holocert/quantities.hpp"
#include "holocert/report.hpp"

namespace holocert {

struct CertBudgets {
  ClassParamsBudget cp;
  NfConfig nf;
  long sup_samples = 2048;
  int deriv_dirs = 4;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

// Distinguished-boundary sup of |g| over the ball-times-disk product
// B_r^n x D_W, in the log domain.
double product_sup(Workspace& ws, const ExprPtr& g, double r, double W,
                   long samples, std::uint64_t seed, Point* witness = nullptr);

struct Te1Context {
  ExprPtr f, g;          // as supplied
  ExprPtr f_eff, g_eff;  // after the Remark re1(B) shift when applied
  bool shift_applied = false;
  bool admissible = false;
  double r = 0.0, t = 0.0;
  CertBudgets budgets;
  GrowthData growth;  // of f_eff, with N_f filled
  ClassParams cp;     // of g_eff
  double M1_log = 0.0, M2_log = 0.0;
  double c_const = 0.0;  // c(M1,M2,t)
  ExprPtr gf;            // restriction of g to the graph of f
  bool gf_zero = false;
  double m_gf_r = 0.0, m_gf_tr = 0.0;
  double cond1_rhs = 0.0;
  bool cond1_ok = false;
  ConstantsBundle constants;
  Workspace ws;
};

Te1Context prepare_te1(const ExprPtr& f, const ExprPtr& g, double r, double t,
                       const CertBudgets& budgets = {});

// The e15/e18 pair. Degenerate inputs (g vanishing on the graph with p above
// the threshold) reproduce the paper's counterexample regime and are reported
// as an unmet hypothesis.
std::vector<CertReport> certify_te1(Te1Context& ctx);
std::vector<CertReport> certify_te1(const ExprPtr& f, const ExprPtr& g,
                                    double r, double t,
                                    const CertBudgets& budgets = {});

// Lebesgue-measurable omega for the Remez certificate: either the full ball
// or a finite union of axis-aligned cells in the 2n real coordinates, so the
// measure ratio is exact.
struct RemezSet {
  bool full_ball = true;
  struct Cell {
    std::vector<double> lo, hi;  // 2n entries: Re z1, Im z1, ...
  };
  std::vector<Cell> cells;
};

struct CorollaryParams {
  std::vector<double> s_grid;  // defaults to 6 log-spaced values up to r
  double remez_s = 0.0;        // defaults to r
  Point remez_center;          // defaults to 0
  RemezSet omega;
};

std::vector<CertReport> certify_corollaries(Te1Context& ctx,
                                            const CorollaryParams& params = {});

// Directional Markov inequality e32 plus, in the small-d regime, the
// zero-free Lemma iter check on sampled lines.
std::vector<CertReport> certify_markov(const ExprPtr& h, double R, double t,
                                       const std::vector<Complex>& v,
                                       double tol = 1e-9, int line_budget = 8);

struct Te12Budgets {
  CertBudgets base;
  int tuple_budget = 8;  // w-tuples per slice sup
  int z_budget = 4;
};

std::vector<CertReport> certify_te12(const std::vector<ExprPtr>& f_list,
                                     const ExprPtr& g, double r, double t,
                                     const Te12Budgets& budgets = {});

struct Te13Instance {
  double n_j = 0.0;
  double r_j = 0.0;
  double eps_j = 0.0;
  double rho = 1.0;
  double C_rho = 1.0;
};

std::vector<CertReport> certify_te13_instance(const ExprPtr& f,
                                              const ExprPtr& g,
                                              const Te13Instance& inst,
                                              const CertBudgets& budgets = {});

// Purely diagnostic probes of the te14 hypotheses along a t-grid; limits are
// not decidable from finitely many samples, so there is no pass/fail.
std::vector<CertReport> probe_te14_condition(const ExprPtr& f, double rho,
                                             const std::vector<double>& t_grid,
                                             const CertBudgets& budgets = {});

}  // namespace holocert
