#pragma once

// Constructive geometric content: the line-graph intersection theorem with
// separation (find a center c, dodge critical values, locate the intersection
// points), the Cartan exceptional-disk covers, and the good-circle corollary.

#include <optional>

#include "holocert/quantities.hpp"
#include "holocert/zeros.hpp"

namespace holocert {

// Normalized frame of section 4.1: F on D_t with M_F(t) <= 1,
// M := M_F(1/t) and M_F(1/t)/M_F(1/t^2) >= sqrt(t).
struct NormalizedFrame {
  double t = 0.0;
  double M_log = 0.0;   // ln M_F(1/t)
  double M = 0.0;       // plain value (guarded)
  double lambda = 0.0;  // lambda(t)
  double log_r0 = 0.0;  // ln r0(t)
  double r0 = 0.0;
  double delta = 0.0;   // delta(t)
  int N_F = 0;          // v_F(1/sqrt t)
  Complex c{0.0, 0.0};  // valency witness center, n_{F-c}(1/sqrt t) = N_F
};

// Validates the e21 conditions, computes the section-4.1 constants and the
// center c (smallest |c| among valency witnesses).
NormalizedFrame normalize_frame(Workspace& ws, const ExprPtr& F, double t,
                                int valency_budget = 64);

Complex find_center_c(Workspace& ws, const ExprPtr& F, double t,
                      int valency_budget = 64);

struct GoodCircle {
  double level = 0.0;       // l in [1/sqrt t, 1]
  double min_log = 0.0;     // ln min_{|z|=l} |F_c|
  double bound_log = 0.0;   // ln(2 r0(t))
  double margin = 0.0;      // min_log - bound_log
  bool found = false;
  Point witness;            // boundary point attaining the circle minimum
};

// Scans levels l in [1/sqrt t, 1] for a circle on which |F_c| >= 2 r0(t).
// Reports the best level even when the bound is not met.
GoodCircle good_circle(Workspace& ws, const ExprPtr& F_c, double t, double M,
                       int level_grid = 96);

struct GeometryWitness {
  Complex c{0.0, 0.0};
  Complex y{0.0, 0.0};
  double s = 0.0;
  Complex c_ys{0.0, 0.0};
  double circle_level = 0.0;
  std::vector<Complex> intersection_points;
  double min_pairwise_distance = 0.0;
  double separation_bound = 0.0;  // s(t-1)/sqrt(lambda)
  int N_F = 0;
  int critical_count = 0;  // n_{F'}(1), must stay below lambda(t)
  NormalizedFrame frame;
  std::vector<Complex> critical_values;
  double max_equation_residual = 0.0;  // max |F - c - y - c_ys| at the points
};

// The full constructive witness: c, then c_{y,s} clear of the critical
// values, then all roots of F - c - y - c_{y,s} in the good-circle disk with
// their pairwise separation.
GeometryWitness line_intersections(Workspace& ws, const ExprPtr& F, double t,
                                   Complex y, double s);

struct CartanCover {
  std::vector<std::pair<Complex, double>> disks;  // (center, radius)
  int k = 0;                                      // number of disks
  int zero_count = 0;                             // with multiplicity
  double radius_sum = 0.0;
  double radius_cap = 0.0;
  double lower_bound_log = 0.0;
  long samples_checked = 0;
  int violations = 0;
  double worst_margin = 0.0;
  Point worst_point;
  std::optional<double> ca6_cap;  // cart2 zero-count bound (middle and right)
  std::optional<double> ca6_cap_weak;
};

// Theorem cart1: disks centered on the zeros of h in D_{beta R}, radii sized
// to the sum cap, and the lower bound verified on a dense sample of
// D_{alpha R} minus the disks.
CartanCover cartan_cover(Workspace& ws, const ExprPtr& h, double R,
                         double alpha, double beta, double H, double d_exp,
                         long sample_budget = 1200);

// Theorem cart2 specialization R := tr, beta := 1/sqrt t, alpha := 1/t with
// the c(H) exponent and the ca6 zero-count cap.
CartanCover cartan_cover_t(Workspace& ws, const ExprPtr& h, double r, double t,
                           double H, long sample_budget = 1200);

}  // namespace holocert
