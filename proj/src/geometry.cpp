#include "holocert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holocert/constants.hpp"
#include "holocert/sampling.hpp"

namespace holocert {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

NormalizedFrame normalize_frame(Workspace& ws, const ExprPtr& F, double t,
                                int valency_budget) {
  check_t_range(t);
  if (F->arity() != 1)
    throw std::invalid_argument("normalize_frame: univariate F required");
  NormalizedFrame fr;
  fr.t = t;
  double m_t = ws.log_max(F, t);
  if (m_t > 1e-9)
    throw std::domain_error("normalize_frame: requires M_F(t) <= 1");
  fr.M_log = ws.log_max(F, 1.0 / t);
  if (fr.M_log < -700.0)
    throw std::domain_error(
        "normalize_frame: M_F(1/t) below floating range; rescale the instance");
  fr.M = std::exp(fr.M_log);
  double lnR = fr.M_log - ws.log_max(F, 1.0 / (t * t));
  if (lnR < 0.5 * std::log(t) - 1e-9)
    throw std::domain_error(
        "normalize_frame: requires M_F(1/t)/M_F(1/t^2) >= sqrt(t)");
  fr.lambda = lambda_t(t, fr.M);
  fr.log_r0 = log_r0_t(t, fr.M);
  fr.r0 = std::exp(fr.log_r0);
  fr.delta = delta_t(t, fr.M);
  ValencyData v =
      valency(F, Disk{{0.0, 0.0}, 1.0 / std::sqrt(t)}, valency_budget);
  fr.N_F = v.valency;
  fr.c = -v.witness_c;  // n_{F - c} = N_F
  double cap = std::exp(ws.log_max(F, 1.0 / std::sqrt(t)));
  if (std::abs(fr.c) > cap * (1.0 + 1e-9) + 1e-12)
    throw std::runtime_error("normalize_frame: witness |c| exceeds M_F(1/sqrt t)");
  return fr;
}

Complex find_center_c(Workspace& ws, const ExprPtr& F, double t,
                      int valency_budget) {
  return normalize_frame(ws, F, t, valency_budget).c;
}

GoodCircle good_circle(Workspace& ws, const ExprPtr& F_c, double t, double M,
                       int level_grid) {
  check_t_range(t);
  const double lo = 1.0 / std::sqrt(t), hi = 1.0;
  const double bound = std::log(2.0) + log_r0_t(t, M);
  SearchConfig cfg = ws.config();
  cfg.circle_grid = 256;

  auto min_at = [&](double l) {
    return min_modulus_circle(*F_c, {0.0, 0.0}, l, cfg.tol, cfg);
  };

  GoodCircle best;
  best.bound_log = bound;
  best.margin = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < level_grid; ++j) {
    double l = lo + (hi - lo) * (j + 0.5) / level_grid;
    LogModulus m = min_at(l);
    if (m.log_value - bound > best.margin) {
      best.margin = m.log_value - bound;
      best.level = l;
      best.min_log = m.log_value;
      best.witness = m.witness;
    }
  }
  // golden refinement on the level
  double a = std::max(lo, best.level - (hi - lo) / level_grid);
  double b = std::min(hi, best.level + (hi - lo) / level_grid);
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = min_at(x1).log_value, f2 = min_at(x2).log_value;
  for (int it = 0; it < 40 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = min_at(x2).log_value;
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = min_at(x1).log_value;
    }
  }
  double l_ref = f1 >= f2 ? x1 : x2;
  LogModulus m_ref = min_at(l_ref);
  if (m_ref.log_value - bound > best.margin) {
    best.margin = m_ref.log_value - bound;
    best.level = l_ref;
    best.min_log = m_ref.log_value;
    best.witness = m_ref.witness;
  }
  best.found = best.margin >= -ws.config().tol;
  return best;
}

namespace {

// Spiral sweep over |c| < s at the pigeonhole resolution s/(4 sqrt(lambda)).
// Returns the candidate maximizing the computed distance to the critical
// values. Critical values are only known to the precision their locations
// allow, which can be far coarser than s itself; ties at that noise level are
// broken toward larger |c| so the final root-separation verification (done in
// exact-relative arithmetic on the located roots) has the most room.
std::optional<Complex> find_c_ys(Complex y, double s,
                                 const std::vector<Complex>& critical_values,
                                 double lambda) {
  double clearance = s / std::sqrt(lambda);
  double delta = s / (4.0 * std::sqrt(lambda));
  double best_dist = -1.0;
  double best_abs = -1.0;
  Complex best{0.0, 0.0};
  bool have = false;
  long rings = std::lround(std::floor(s / delta));
  for (long j = 0; j < rings; ++j) {
    double rho = j * delta;
    long m = std::max<long>(1, std::lround(std::ceil(kTwoPi * rho / delta)));
    for (long i = 0; i < m; ++i) {
      Complex cand = std::polar(rho, kTwoPi * i / m);
      if (std::abs(cand) >= s) continue;
      double dist = std::numeric_limits<double>::infinity();
      for (const Complex& cv : critical_values)
        dist = std::min(dist, std::abs(y + cand - cv));
      bool tie = have && std::abs(dist - best_dist) <=
                             1e-9 * (std::abs(dist) + std::abs(best_dist));
      if (!have || (!tie && dist > best_dist) ||
          (tie && std::abs(cand) > best_abs)) {
        best = cand;
        best_dist = dist;
        best_abs = std::abs(cand);
        have = true;
      }
    }
  }
  if (!have) return std::nullopt;
  // The pigeonhole argument guarantees some candidate clears s/sqrt(lambda);
  // anything less is a falsifier.
  if (std::isfinite(best_dist) && best_dist <= clearance) return std::nullopt;
  return best;
}

}  // namespace

GeometryWitness line_intersections(Workspace& ws, const ExprPtr& F, double t,
                                   Complex y, double s) {
  GeometryWitness w;
  w.frame = normalize_frame(ws, F, t);
  w.c = w.frame.c;
  w.y = y;
  w.s = s;
  w.N_F = w.frame.N_F;
  if (std::abs(y) > w.frame.r0 * (1.0 + 1e-12))
    throw std::domain_error("line_intersections: requires |y| <= r0(t)");
  if (!(s > 0.0) || s > w.frame.r0 / 3.0 * (1.0 + 1e-12))
    throw std::domain_error("line_intersections: requires s in (0, r0(t)/3]");

  ExprPtr F_c = shifted(F, {Complex{0.0, 0.0}}, -w.c);

  // critical values of F_c on D: F_c at the zeros of F' (Lemma le1 caps the
  // number of those by lambda(t))
  ExprPtr dF = derivative_expr(F, 0);
  std::vector<Complex> critical_values;
  w.critical_count = 0;
  if (!is_identically_zero(*dF, 1.0)) {
    std::vector<LocatedZero> crit = locate_zeros(dF, Disk{{0.0, 0.0}, 1.0});
    Univariate u = make_univariate(F_c);
    for (const LocatedZero& p : crit) {
      critical_values.push_back(u.value(p.location));
      w.critical_count += p.multiplicity;
    }
  }
  w.critical_values = critical_values;
  if (w.critical_count >= w.frame.lambda)
    throw std::runtime_error(
        "line_intersections: critical count reached lambda(t); Lemma le1 falsified");

  auto c_ys = find_c_ys(y, s, critical_values, w.frame.lambda);
  if (!c_ys)
    throw std::runtime_error(
        "line_intersections: no admissible c_{y,s} at pigeonhole resolution");
  w.c_ys = *c_ys;

  GoodCircle gc = good_circle(ws, F_c, t, w.frame.M);
  if (!gc.found)
    throw std::runtime_error(
        "line_intersections: no good circle level found (e213 falsified)");
  w.circle_level = gc.level;

  Complex a = w.c + y + w.c_ys;
  ExprPtr shifted_F = shifted(F, {Complex{0.0, 0.0}}, -a);
  std::vector<LocatedZero> roots =
      locate_zeros(shifted_F, Disk{{0.0, 0.0}, gc.level});
  Univariate res = make_univariate(shifted_F);
  for (const LocatedZero& z : roots)
    for (int q = 0; q < z.multiplicity; ++q)
      w.intersection_points.push_back(z.location);
  w.max_equation_residual = 0.0;
  for (const Complex& z : w.intersection_points)
    w.max_equation_residual =
        std::max(w.max_equation_residual, std::abs(res.value(z)));

  w.separation_bound = s * (t - 1.0) / std::sqrt(w.frame.lambda);
  w.min_pairwise_distance = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < w.intersection_points.size(); ++i)
    for (size_t j = i + 1; j < w.intersection_points.size(); ++j)
      w.min_pairwise_distance =
          std::min(w.min_pairwise_distance,
                   std::abs(w.intersection_points[i] - w.intersection_points[j]));
  return w;
}

// ---------------------------------------------------------------------------
// Cartan covers

namespace {

CartanCover build_cover(Workspace& ws, const ExprPtr& h, double R,
                        double alpha, double beta, double H, double d_exp,
                        double bound_log, long sample_budget) {
  CartanCover cov;
  cov.lower_bound_log = bound_log;
  std::vector<LocatedZero> zeros;
  ZeroCount zc = count_zeros(h, Disk{{0.0, 0.0}, beta * R});
  if (zc.identically_zero)
    throw std::domain_error("cartan_cover: h is identically zero");
  if (zc.count > 0) zeros = locate_zeros(h, Disk{{0.0, 0.0}, beta * R});
  for (const LocatedZero& z : zeros) cov.zero_count += z.multiplicity;
  cov.k = static_cast<int>(zeros.size());

  // Equal radii spending 90% of the sum cap; the theorems constrain only the
  // sum, and the slack improves the verification margins.
  cov.radius_cap = std::pow(2.0 * H * R, d_exp) / d_exp;
  if (cov.k > 0) {
    double r_each =
        0.9 * std::pow(cov.radius_cap / cov.k, 1.0 / d_exp);
    for (const LocatedZero& z : zeros) cov.disks.emplace_back(z.location, r_each);
    cov.radius_sum = cov.k * r_each;
  }

  // dense sample of D_{alpha R} minus the disks
  cov.worst_margin = std::numeric_limits<double>::infinity();
  long rings = std::lround(std::sqrt(static_cast<double>(sample_budget)));
  for (long i = 0; i < rings; ++i) {
    double rho = alpha * R * (i + 0.5) / rings;
    long m = std::max<long>(8, std::lround(std::ceil(sample_budget / static_cast<double>(rings))));
    for (long j = 0; j < m; ++j) {
      Complex z = std::polar(rho, kTwoPi * j / m + 0.05 * i);
      bool excluded = false;
      for (const auto& [c, rad] : cov.disks)
        if (std::abs(z - c) < rad) {
          excluded = true;
          break;
        }
      if (excluded) continue;
      double margin = eval_log(*h, Point{z}).log_mag - bound_log;
      ++cov.samples_checked;
      if (margin < cov.worst_margin) {
        cov.worst_margin = margin;
        cov.worst_point = Point{z};
      }
      if (margin < -ws.config().tol) ++cov.violations;
    }
  }
  return cov;
}

}  // namespace

CartanCover cartan_cover(Workspace& ws, const ExprPtr& h, double R,
                         double alpha, double beta, double H, double d_exp,
                         long sample_budget) {
  if (!(0.0 < alpha && alpha < beta && beta < 1.0))
    throw std::domain_error("cartan_cover: requires 0<alpha<beta<1");
  if (!(H > 0.0 && H <= beta * std::numbers::e))
    throw std::domain_error("cartan_cover: requires 0<H<=beta*e");
  if (!(d_exp > 0.0)) throw std::domain_error("cartan_cover: requires d>0");

  double m_alpha = ws.log_max(h, alpha * R);
  double m_beta = ws.log_max(h, beta * R);
  ZeroCount zc = count_zeros(h, Disk{{0.0, 0.0}, beta * R});
  if (zc.identically_zero)
    throw std::domain_error("cartan_cover: h is identically zero");
  double harnack = std::pow((beta + alpha) / (beta - alpha), 2.0);
  double bound_log = m_beta + harnack * (m_alpha - m_beta) +
                     zc.count * (std::log(H) - 1.0 - std::log(beta));
  return build_cover(ws, h, R, alpha, beta, H, d_exp, bound_log, sample_budget);
}

CartanCover cartan_cover_t(Workspace& ws, const ExprPtr& h, double r, double t,
                           double H, long sample_budget) {
  check_t_range(t);
  if (!(H > 0.0 && H <= std::numbers::e / std::sqrt(t)))
    throw std::domain_error("cartan_cover_t: requires 0<H<=e/sqrt(t)");
  double st = std::sqrt(t);
  double m_r = ws.log_max(h, r);
  double m_st = ws.log_max(h, st * r);
  double m_tr = ws.log_max(h, t * r);
  double bound_log = m_st + c_of_H(H, t) * (m_r - m_tr);
  CartanCover cov = build_cover(ws, h, t * r, 1.0 / t, 1.0 / st, H, 1.0,
                                bound_log, sample_budget);
  double log_ratio = m_tr - m_st;
  cov.ca6_cap = log_ratio / std::log((1.0 + t) / (2.0 * st));
  cov.ca6_cap_weak = 9.0 * (st + 1.0) * (st + 1.0) * log_ratio / ((t - 1.0) * (t - 1.0));
  return cov;
}

}  // namespace holocert
