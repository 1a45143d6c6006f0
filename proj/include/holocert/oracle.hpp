#pragma once

// Deliberately naive reference implementations used only by the test surface
// to validate the main modules. Nothing here shares code with the production
// paths: the only dependency is the function model itself.

#include <vector>

#include "holocert/function.hpp"

namespace holocert {
namespace oracle {

// Max of log|f| over a uniform boundary grid of the given density.
// No refinement.
double grid_max(const FuncExpr& f, const Point& center, double radius,
                long density);

double grid_circle_min(const FuncExpr& f, Complex center, double radius,
                       long density);

// All roots of sum_k coeffs[k] z^k via companion-matrix eigenvalues,
// polished by a few Newton steps. Residual-checked.
std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs);

// Number of the above roots strictly inside the disk.
int roots_inside(const std::vector<Complex>& roots, Complex center,
                 double radius);

// Total boundary phase change / 2pi by polygonal tracking, halving segments
// until every phase step is below pi/2.
int winding_count(const FuncExpr& h, Complex center, double radius,
                  int initial_segments = 64);

}  // namespace oracle
}  // namespace holocert
