#pragma once

// Maximum-modulus quantities on disks, balls, circles and spheres, plus the
// Hadamard three-circle toolkit. By the maximum principle every sup over a
// closed region is computed on its boundary: a circle for n=1, the unit
// sphere times a radius for n>=2. All values live in the log domain.

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>

#include "holocert/function.hpp"
#include "holocert/report.hpp"

namespace holocert {

enum class RegionKind { Disk, Ball, Circle, Sphere };

struct Region {
  RegionKind kind = RegionKind::Disk;
  Point center;
  double radius = 1.0;
};

Region disk(Complex center, double radius);
Region ball(Point center, double radius);

struct LogModulus {
  double log_value = 0.0;  // ln sup |f|
  Point witness;           // boundary point attaining the sup (empirically)
  double lower_bracket = 0.0;
  double upper_bracket = 0.0;
  long samples_used = 0;
  bool converged = true;
};

struct SearchConfig {
  int circle_grid = 512;
  int sphere_grid = 4096;
  int refine_candidates = 8;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

// Boundary extremum of a scalar field over a circle; the workhorse behind
// everything univariate. fn maps the boundary angle to a log-magnitude.
LogModulus circle_extremum(const std::function<double(double)>& log_abs_at,
                           Complex center, double radius, bool maximize,
                           const SearchConfig& cfg);

LogModulus max_modulus(const FuncExpr& f, const Region& region, double tol,
                       const SearchConfig& cfg = {});
LogModulus min_modulus_circle(const FuncExpr& f, Complex center, double radius,
                              double tol, const SearchConfig& cfg = {});

// Memoizing wrapper used by the composite computations so that repeated
// moduli of the same expression are bit-identical (and cheap).
class Workspace {
 public:
  explicit Workspace(SearchConfig cfg = {}) : cfg_(cfg) {}

  const SearchConfig& config() const { return cfg_; }
  SearchConfig& config() { return cfg_; }

  // ln M_f over the closed ball/disk of the given radius centered at 0
  double log_max(const ExprPtr& f, double radius);
  // centered variant (univariate circles)
  double log_max_at(const ExprPtr& f, Complex center, double radius);
  LogModulus modulus(const ExprPtr& f, const Region& region);

 private:
  // Keys retain the expression so node addresses stay unique for the
  // lifetime of the cache (a freed node could otherwise be reallocated at a
  // cached address).
  struct Key {
    ExprPtr expr;
    double cx, cy, radius;
    bool operator==(const Key& o) const {
      return expr.get() == o.expr.get() && cx == o.cx && cy == o.cy &&
             radius == o.radius;
    }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const;
  };
  SearchConfig cfg_;
  std::unordered_map<Key, LogModulus, KeyHash> cache_;
};

// ln R_f(r,t,s) = m_f(r/t) - m_f(r/s), t <= s. Throws std::domain_error when
// f vanishes identically (the -inf denominator case).
double growth_ratio(const FuncExpr& f, double r, double t, double s, double tol,
                    const SearchConfig& cfg = {});
double growth_ratio(Workspace& ws, const ExprPtr& f, double r, double t,
                    double s);

// Hadamard three-circle certificate (e22) together with the derived
// log-convexity properties; the first report is the main inequality.
std::vector<CertReport> three_circle_check(const ExprPtr& f, Complex z0,
                                           double r0, double r1, double r2,
                                           double tol,
                                           const SearchConfig& cfg = {});

}  // namespace holocert
