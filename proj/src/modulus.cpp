#include "holocert/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "holocert/sampling.hpp"

namespace holocert {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Candidate {
  double value;
  double theta;
};

// Golden-section search for the maximum of fn on [lo, hi].
std::pair<double, double> golden_max(const std::function<double(double)>& fn,
                                     double lo, double hi, long& evals) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  evals += 2;
  for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = fn(x1);
    }
    ++evals;
  }
  return f1 >= f2 ? std::make_pair(f1, x1) : std::make_pair(f2, x2);
}

}  // namespace

Region disk(Complex center, double radius) {
  return Region{RegionKind::Disk, Point{center}, radius};
}

Region ball(Point center, double radius) {
  return Region{RegionKind::Ball, std::move(center), radius};
}

LogModulus circle_extremum(const std::function<double(double)>& log_abs_at,
                           Complex center, double radius, bool maximize,
                           const SearchConfig& cfg) {
  const int n = cfg.circle_grid;
  long evals = 0;
  auto fn = [&](double th) {
    double v = log_abs_at(th);
    return maximize ? v : -v;
  };
  std::vector<double> grid(n);
  for (int k = 0; k < n; ++k) {
    grid[k] = fn(kTwoPi * k / n);
    ++evals;
  }
  // local maxima over the cyclic grid
  std::vector<Candidate> cands;
  for (int k = 0; k < n; ++k) {
    double prev = grid[(k + n - 1) % n], next = grid[(k + 1) % n];
    if (grid[k] >= prev && grid[k] >= next)
      cands.push_back({grid[k], kTwoPi * k / n});
  }
  if (cands.empty())
    for (int k = 0; k < n; ++k) cands.push_back({grid[k], kTwoPi * k / n});
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.value > b.value;
                   });
  if (static_cast<int>(cands.size()) > cfg.refine_candidates)
    cands.resize(cfg.refine_candidates);

  double best_v = kNegInf, best_th = 0.0;
  const double delta = kTwoPi / n;
  for (const Candidate& c : cands) {
    auto [v, th] = golden_max(fn, c.theta - delta, c.theta + delta, evals);
    if (v > best_v) {
      best_v = v;
      best_th = th;
    }
  }
  LogModulus out;
  out.log_value = maximize ? best_v : -best_v;
  out.witness = Point{circle_point(center, radius, best_th)};
  if (maximize) {
    out.lower_bracket = out.log_value;  // attained by the witness
    out.upper_bracket = out.log_value + cfg.tol;
  } else {
    out.lower_bracket = out.log_value - cfg.tol;
    out.upper_bracket = out.log_value;
  }
  out.samples_used = evals;
  out.converged = true;
  return out;
}

namespace {

LogModulus sphere_max(const FuncExpr& f, const Point& center, double radius,
                      const SearchConfig& cfg) {
  const int n = f.arity();
  long evals = 0;
  auto value_at = [&](const std::vector<Complex>& u) {
    Point z(n);
    for (int i = 0; i < n; ++i) z[i] = center[i] + radius * u[i];
    return eval_log(f, z).log_mag;
  };
  struct SphereCand {
    double value;
    std::vector<Complex> u;
  };
  std::vector<SphereCand> cands;
  for (int j = 0; j < cfg.sphere_grid; ++j) {
    std::vector<Complex> u = sphere_point(n, j, cfg.seed);
    double v = value_at(u);
    ++evals;
    if (static_cast<int>(cands.size()) < cfg.refine_candidates) {
      cands.push_back({v, std::move(u)});
      std::stable_sort(cands.begin(), cands.end(),
                       [](const SphereCand& a, const SphereCand& b) {
                         return a.value > b.value;
                       });
    } else if (v > cands.back().value) {
      cands.back() = {v, std::move(u)};
      std::stable_sort(cands.begin(), cands.end(),
                       [](const SphereCand& a, const SphereCand& b) {
                         return a.value > b.value;
                       });
    }
  }
  // Local pattern refinement with shrinking step.
  double best_v = kNegInf;
  std::vector<Complex> best_u;
  for (SphereCand& c : cands) {
    double step = 0.15;
    std::vector<Complex> u = c.u;
    double v = c.value;
    while (step > 1e-8) {
      bool improved = false;
      for (int k = 0; k < 8; ++k) {
        std::vector<Complex> d = sphere_point(n, 1000003 + k, cfg.seed + 1);
        std::vector<Complex> u2(n);
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
          u2[i] = u[i] + step * d[i];
          norm += std::norm(u2[i]);
        }
        norm = std::sqrt(norm);
        for (Complex& x : u2) x /= norm;
        double v2 = value_at(u2);
        ++evals;
        if (v2 > v) {
          v = v2;
          u = std::move(u2);
          improved = true;
        }
      }
      if (!improved) step *= 0.5;
    }
    if (v > best_v) {
      best_v = v;
      best_u = u;
    }
  }
  LogModulus out;
  out.log_value = best_v;
  Point w(n);
  for (int i = 0; i < n; ++i) w[i] = center[i] + radius * best_u[i];
  out.witness = std::move(w);
  out.lower_bracket = best_v;
  out.upper_bracket = best_v + cfg.tol;
  out.samples_used = evals;
  out.converged = true;
  return out;
}

bool center_is_origin(const Point& c) {
  for (const Complex& v : c)
    if (v != Complex(0.0, 0.0)) return false;
  return true;
}

}  // namespace

LogModulus max_modulus(const FuncExpr& f, const Region& region, double tol,
                       const SearchConfig& cfg_in) {
  if (region.radius <= 0.0 || !std::isfinite(region.radius))
    throw std::domain_error("max_modulus: radius must be positive and finite");
  SearchConfig cfg = cfg_in;
  cfg.tol = tol;
  const int n = f.arity();
  if (static_cast<int>(region.center.size()) != n)
    throw std::invalid_argument("max_modulus: center dimension mismatch");

  // Exact reduction for homogeneous polynomials centered at the origin:
  // sup_{|z|=r} |f| = r^d sup_{|u|=1} |f(u)|.
  if (const auto* p = f.get_if<PolyNode>(); p && center_is_origin(region.center)) {
    int d = poly_homogeneous_degree(*p);
    if (d >= 0) {
      Region unit = region;
      unit.radius = 1.0;
      LogModulus at1 =
          n == 1 ? circle_extremum(
                       [&](double th) {
                         return eval_log(f, Point{std::polar(1.0, th)}).log_mag;
                       },
                       region.center[0], 1.0, true, cfg)
                 : sphere_max(f, region.center, 1.0, cfg);
      LogModulus out = at1;
      double shift = d * std::log(region.radius);
      out.log_value += shift;
      out.lower_bracket += shift;
      out.upper_bracket += shift;
      for (Complex& c : out.witness) c *= region.radius;
      return out;
    }
  }

  if (n == 1)
    return circle_extremum(
        [&](double th) {
          return eval_log(f, Point{circle_point(region.center[0],
                                                region.radius, th)})
              .log_mag;
        },
        region.center[0], region.radius, true, cfg);
  return sphere_max(f, region.center, region.radius, cfg);
}

LogModulus min_modulus_circle(const FuncExpr& f, Complex center, double radius,
                              double tol, const SearchConfig& cfg_in) {
  SearchConfig cfg = cfg_in;
  cfg.tol = tol;
  if (f.arity() != 1)
    throw std::invalid_argument("min_modulus_circle: univariate only");
  LogModulus m = circle_extremum(
      [&](double th) {
        return eval_log(f, Point{circle_point(center, radius, th)}).log_mag;
      },
      center, radius, false, cfg);
  m.lower_bracket = m.log_value - cfg.tol;
  m.upper_bracket = m.log_value;
  return m;
}

// ---------------------------------------------------------------------------
// Workspace

size_t Workspace::KeyHash::operator()(const Key& k) const {
  size_t h = std::hash<const void*>()(k.expr.get());
  auto mix = [&h](double v) {
    h ^= std::hash<double>()(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(k.cx);
  mix(k.cy);
  mix(k.radius);
  return h;
}

LogModulus Workspace::modulus(const ExprPtr& f, const Region& region) {
  Complex c0 = region.center.empty() ? Complex{0, 0} : region.center[0];
  bool cacheable = f->arity() == 1 || center_is_origin(region.center);
  Key key{f, c0.real(), c0.imag(), region.radius};
  if (cacheable) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  LogModulus m = max_modulus(*f, region, cfg_.tol, cfg_);
  if (cacheable) cache_.emplace(key, m);
  return m;
}

double Workspace::log_max(const ExprPtr& f, double radius) {
  Region r{f->arity() == 1 ? RegionKind::Disk : RegionKind::Ball,
           Point(f->arity(), Complex{0.0, 0.0}), radius};
  return modulus(f, r).log_value;
}

double Workspace::log_max_at(const ExprPtr& f, Complex center, double radius) {
  if (f->arity() != 1)
    throw std::invalid_argument("log_max_at: univariate only");
  return modulus(f, Region{RegionKind::Disk, Point{center}, radius}).log_value;
}

// ---------------------------------------------------------------------------

double growth_ratio(Workspace& ws, const ExprPtr& f, double r, double t,
                    double s) {
  if (!(t <= s) || !(r > 0.0))
    throw std::domain_error("growth_ratio: requires t<=s and r>0");
  if (is_identically_zero(*f, r))
    throw std::domain_error(
        "growth_ratio: f vanishes identically (denominator is -inf)");
  return ws.log_max(f, r / t) - ws.log_max(f, r / s);
}

double growth_ratio(const FuncExpr& f, double r, double t, double s, double tol,
                    const SearchConfig& cfg_in) {
  SearchConfig cfg = cfg_in;
  cfg.tol = tol;
  Workspace ws(cfg);
  ExprPtr alias = make_expr(f.node());
  return growth_ratio(ws, alias, r, t, s);
}

std::vector<CertReport> three_circle_check(const ExprPtr& f, Complex z0,
                                           double r0, double r1, double r2,
                                           double tol,
                                           const SearchConfig& cfg_in) {
  if (!(0 < r0 && r0 < r1 && r1 < r2))
    throw std::domain_error("three_circle_check: requires 0<r0<r1<r2");
  SearchConfig cfg = cfg_in;
  cfg.tol = tol;
  Workspace ws(cfg);
  std::vector<CertReport> out;

  if (is_identically_zero(*f, r2)) {
    CertReport r = CertReport::hypothesis_not_met(
        "hadamard_three_circle", "e22", "f is identically zero");
    r.outcome = Outcome::Vacuous;
    out.push_back(std::move(r));
    return out;
  }

  auto m = [&](double rad) { return ws.log_max_at(f, z0, rad); };

  double m0 = m(r0), m1 = m(r1), m2 = m(r2);
  double theta = std::log(r1 / r0) / std::log(r2 / r0);
  CertReport main = CertReport::compare("hadamard_three_circle", "e22", m1,
                                        (1.0 - theta) * m0 + theta * m2, tol);
  main.params = {{"r0", r0}, {"r1", r1}, {"r2", r2}, {"theta", theta},
                 {"m0", m0}, {"m1", m1}, {"m2", m2}};
  out.push_back(std::move(main));

  // (a) r -> m(r) - m(r/e) is nondecreasing; checked at r1 against r2.
  out.push_back(CertReport::compare("log_derivative_monotone", "sec3.1(a)",
                                    m(r1) - m(r1 / std::numbers::e),
                                    m(r2) - m(r2 / std::numbers::e), tol));
  out.back().params = {{"r", r1}, {"r2", r2}};

  // (b) m(r) - m(1) <= ln r * (m(er) - m(r)) for r2 > e, 1 <= r <= r2/e.
  if (r2 > std::numbers::e && r1 >= 1.0 && r1 <= r2 / std::numbers::e) {
    out.push_back(CertReport::compare(
        "doubling_controls_growth", "sec3.1(b)", m(r1) - m(1.0),
        std::log(r1) * (m(std::numbers::e * r1) - m(r1)), tol));
    out.back().params = {{"r", r1}};
  } else {
    CertReport b = CertReport::diagnostic("doubling_controls_growth", "sec3.1(b)");
    b.outcome = Outcome::Vacuous;
    b.pass = true;
    b.note = "range 1<=r<=r2/e empty for these radii";
    out.push_back(std::move(b));
  }

  // (c) m(r2) - m(r2/e) <= (m(r2) - m(r2/t)) / ln t for 1 < t <= e.
  double tc = std::min(std::numbers::e, r2 / r1);
  if (tc > 1.0) {
    out.push_back(CertReport::compare(
        "inner_ratio_bound", "sec3.1(c)", m2 - m(r2 / std::numbers::e),
        (m2 - m(r2 / tc)) / std::log(tc), tol));
    out.back().params = {{"t", tc}, {"r2", r2}};
  }
  return out;
}

}  // namespace holocert
