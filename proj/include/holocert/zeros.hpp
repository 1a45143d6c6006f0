#pragma once

// Univariate disk analytics: zero counting by the argument principle, zero
// localization by disk subdivision, valency, the Bernstein index, and the two
// zero/valency bounds the certificates lean on.

#include <functional>
#include <optional>

#include "holocert/function.hpp"
#include "holocert/modulus.hpp"

namespace holocert {

struct Disk {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

// A univariate holomorphic function presented as callbacks, so shifted and
// composed variants (h + c, F - c - y, ...) reuse one code path.
struct Univariate {
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> deriv;
  std::function<double(Complex)> log_abs;
};

Univariate make_univariate(ExprPtr h);
Univariate offset_by(const Univariate& h, Complex c);  // h + c

struct CountConfig {
  int initial_nodes = 256;
  int max_nodes = 1 << 16;
  double integer_window = 0.1;
  double residual_limit = 0.25;
};

struct ZeroCount {
  bool identically_zero = false;
  int count = 0;
  double residual = 0.0;
  double radius_used = 0.0;
  bool perturbed = false;
  long nodes_used = 0;
};

// Exact integer zero count (with multiplicity) in the open disk. A zero too
// close to the boundary triggers an outward radius perturbation of 1e-6*r,
// recorded in the result. Throws on an indeterminate count.
ZeroCount count_zeros(const Univariate& h, const Disk& disk,
                      const CountConfig& cfg = {});
ZeroCount count_zeros(const ExprPtr& h, const Disk& disk,
                      const CountConfig& cfg = {});

struct LocatedZero {
  Complex location;
  int multiplicity = 1;
};

// All zeros in the disk by hex-cover subdivision plus Newton refinement;
// total multiplicity is verified against the argument-principle count.
std::vector<LocatedZero> locate_zeros(const Univariate& h, const Disk& disk,
                                      double eps_rel = 1e-12,
                                      const CountConfig& cfg = {});
std::vector<LocatedZero> locate_zeros(const ExprPtr& h, const Disk& disk,
                                      double eps_rel = 1e-12);

struct ValencyData {
  int valency = 0;
  Complex witness_c{0.0, 0.0};
  long budget_used = 0;
  bool stable = false;  // unchanged under budget doubling
};

// sup_c n_{h+c}(disk). Exact via critical values for polynomials; a certified
// lower bound (stability-checked) via image sampling otherwise.
ValencyData valency(const ExprPtr& h, const Disk& disk, int budget = 64);

struct BernsteinIndexData {
  double value = 0.0;
  Complex witness_center{0.0, 0.0};
  double witness_s = 0.0;
};

struct BernsteinConfig {
  int center_grid = 8;   // radial/angular resolution for subdisk centers
  int s_grid = 8;        // log-spaced subdisk radii per center
  int refine_iters = 30;
  SearchConfig circle;
};

// sup over subdisks D_{es}(z) inside D_r(z0) of m_h(es,z) - m_h(s,z).
// Total: identically-zero input returns 0 by convention.
BernsteinIndexData bernstein_index(const ExprPtr& h, const Disk& disk,
                                   const BernsteinConfig& cfg = {});
BernsteinIndexData bernstein_index(const Univariate& h, const Disk& disk,
                                   const BernsteinConfig& cfg = {});

// [m_h(R) - m_h(beta R)] / ln((1+beta^2)/(2 beta)); an upper bound for the
// zero count in the beta R disk.
double vp_zero_bound(const ExprPtr& h, double R, double beta,
                     const SearchConfig& cfg = {});

// max{ [m_h(R/t) - m_h(R/s)] / k(t,s), 1 }; a lower bound for the valency on
// the R/sqrt(t) disk for nonconstant h.
double valency_lower_bound(const ExprPtr& h, double R, double t, double s,
                           const SearchConfig& cfg = {});

}  // namespace holocert
