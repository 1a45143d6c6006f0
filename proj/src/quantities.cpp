#include "holocert/quantities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holocert/constants.hpp"
#include "holocert/sampling.hpp"

namespace holocert {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

GrowthData check_admissibility(Workspace& ws, const ExprPtr& f, double r,
                               double t) {
  check_t_range(t);
  if (!(r > 0.0)) throw std::domain_error("parameter out of range: requires r>0");
  GrowthData g;
  g.r = r;
  g.t = t;
  if (is_identically_zero(*f, t * r)) {
    g.M1_log = g.M2_log = g.lnR_t2 = kNegInf;
    g.admissible = false;
    return g;
  }
  g.M1_log = ws.log_max(f, r / t);
  g.M2_log = ws.log_max(f, t * r);
  g.lnR_t2 = g.M1_log - ws.log_max(f, r / (t * t));
  g.admissible = g.lnR_t2 >= std::log(t) - 1e-9;
  if (!g.admissible) {
    Point zero_offset(f->arity(), Complex{0.0, 0.0});
    Complex f0 = eval(*f, zero_offset);
    ExprPtr ft = shifted(f, zero_offset, -f0);
    GrowthData::Shifted sh{};
    if (is_identically_zero(*ft, t * r)) {
      sh.M1_log = sh.M2_log = sh.lnR_t2 = kNegInf;
      sh.admissible = false;
    } else {
      sh.M1_log = ws.log_max(ft, r / t);
      sh.M2_log = ws.log_max(ft, t * r);
      sh.lnR_t2 = sh.M1_log - ws.log_max(ft, r / (t * t));
      sh.admissible = sh.lnR_t2 >= std::log(t) - 1e-9;
    }
    g.shifted = sh;
  }
  return g;
}

GrowthData check_admissibility(const ExprPtr& f, double r, double t,
                               double tol) {
  SearchConfig cfg;
  cfg.tol = tol;
  Workspace ws(cfg);
  return check_admissibility(ws, f, r, t);
}

namespace {

int vanishing_order_at_origin(const ExprPtr& f, double r, std::uint64_t seed) {
  ExprPtr h = f;
  if (f->arity() > 1) {
    for (std::uint64_t j = 0; j < 64; ++j) {
      std::vector<Complex> v = sphere_point(f->arity(), j, seed + 5);
      ExprPtr cand = restrict_to_line(f, v);
      if (!is_identically_zero(*cand, r)) {
        h = cand;
        break;
      }
    }
  }
  ZeroCount zc = count_zeros(h, Disk{{0.0, 0.0}, 1e-4 * r});
  return zc.identically_zero ? 0 : zc.count;
}

}  // namespace

GrowthData n_f_quantity(Workspace& ws, const ExprPtr& f, double r, double t,
                        const NfConfig& cfg) {
  GrowthData g = check_admissibility(ws, f, r, t);
  if (!g.admissible)
    throw std::domain_error(
        "n_f_quantity: f fails the admissibility inequality R_f(r,t,t^2) >= t");
  const int n = f->arity();
  const double root_t_radius = r / std::sqrt(t);

  if (n == 1) {
    ValencyData v = valency(f, Disk{{0.0, 0.0}, root_t_radius}, cfg.valency_budget);
    g.V_f = v.valency;
    g.N_f = v.valency;
    g.vanishing_order_at_0 = vanishing_order_at_origin(f, r, cfg.seed);
    for (int k = 0; k < 8; ++k) {
      double s = t * std::pow(16.0, k);
      g.R_log_samples.emplace_back(s, g.M1_log - ws.log_max(f, r / s));
    }
    return g;
  }

  // V_f: min of valencies of nonconstant line restrictions
  int vmin = std::numeric_limits<int>::max();
  int nonconstant = 0;
  for (int j = 0; j < cfg.line_budget; ++j) {
    std::vector<Complex> dir = sphere_point(n, j, cfg.seed);
    ExprPtr fl = restrict_to_line(f, dir);
    if (is_identically_zero(*fl, r) || is_constant_probe(*fl, root_t_radius))
      continue;
    ++nonconstant;
    ValencyData v = valency(fl, Disk{{0.0, 0.0}, root_t_radius}, cfg.valency_budget);
    vmin = std::min(vmin, v.valency);
  }
  if (nonconstant == 0)
    throw std::runtime_error("n_f_quantity: f is constant on all sampled lines");
  g.V_f = vmin;

  // sup over s in [t, inf) of [ln R_f(r,t,s) - ln sqrt(t)] / k(t,s) on a log
  // grid, completed by the analytic tail (the vanishing order at 0)
  const double half_log_t = 0.5 * std::log(t);
  auto value_at = [&](double s) {
    double lnR = g.M1_log - ws.log_max(f, r / s);
    return (lnR - half_log_t) / k_ts(t, s);
  };
  double smax = cfg.s_max_factor * t;
  double best_s = t, best_v = kNegInf;
  for (int k = 0; k < cfg.s_grid; ++k) {
    double s = t * std::pow(smax / t, static_cast<double>(k) / (cfg.s_grid - 1));
    double v = value_at(s);
    g.R_log_samples.emplace_back(s, g.M1_log - ws.log_max(f, r / s));
    if (v > best_v) {
      best_v = v;
      best_s = s;
    }
  }
  // local refinement around the grid argmax
  double lo = std::max(t, best_s / 2.0), hi = std::min(smax, best_s * 2.0);
  for (int it = 0; it < 24; ++it) {
    double m1 = lo * std::pow(hi / lo, 1.0 / 3.0);
    double m2 = lo * std::pow(hi / lo, 2.0 / 3.0);
    if (value_at(m1) >= value_at(m2))
      hi = m2;
    else
      lo = m1;
  }
  best_v = std::max(best_v, value_at(std::sqrt(lo * hi)));

  g.vanishing_order_at_0 = vanishing_order_at_origin(f, r, cfg.seed);
  double s_term = std::max(best_v, static_cast<double>(g.vanishing_order_at_0));
  g.N_f = std::max(s_term, g.V_f);
  return g;
}

GrowthData n_f_quantity(const ExprPtr& f, double r, double t,
                        const NfConfig& cfg) {
  Workspace ws;
  return n_f_quantity(ws, f, r, t, cfg);
}

// ---------------------------------------------------------------------------
// Class parameters

namespace {

struct PQResult {
  double p = kNegInf, q = kNegInf;
  std::vector<Complex> p_dir;
  Complex p_w{0.0, 0.0};
  Point q_z;
  Complex q_center{0.0, 0.0};
  double q_s = 0.0;
  long lines = 0, points = 0;
};

// zeta -> g(zeta v, w)
ExprPtr z_slice(const ExprPtr& g, const std::vector<Complex>& dir, Complex w) {
  int n = g->arity() - 1;
  ExprPtr g_w = graph_restriction(g, poly_constant(n, w));
  return restrict_to_line(g_w, dir);
}

// w -> g(z, w)
ExprPtr w_slice(const ExprPtr& g, const Point& z) {
  int n = g->arity() - 1;
  Point offset(z.begin(), z.end());
  offset.push_back({0.0, 0.0});
  std::vector<Complex> dir(n + 1, Complex{0.0, 0.0});
  dir[n] = {1.0, 0.0};
  return restrict_to_line(shifted(g, offset, {0.0, 0.0}), dir);
}

PQResult sample_pq(Workspace& ws, const ExprPtr& g, double r, double t,
                   double M2_log, const ClassParamsBudget& b) {
  const int n = g->arity() - 1;
  if (n < 1) throw std::invalid_argument("class_params: g must live on C^{n+1}");
  double Mw = 3.0 * std::exp(M2_log);
  if (!std::isfinite(Mw))
    throw std::domain_error(
        "class_params: 3*M2 exceeds floating range; w-samples are not representable");
  PQResult res;

  // p: growth of z-slices across radii r -> tr
  int lines = n == 1 ? 1 : b.lines;
  for (int j = 0; j < lines; ++j) {
    std::vector<Complex> dir =
        n == 1 ? std::vector<Complex>{Complex{1.0, 0.0}} : sphere_point(n, j, b.seed);
    for (int k = 0; k < b.w_points; ++k) {
      // The growth ratio in z is not subject to the maximum principle in w:
      // sweep boundary, interior shells and w = 0 alike.
      double frac = halton(k + 1 + 31 * b.seed, 3);
      double rad;
      switch (k % 4) {
        case 0: rad = Mw * (1.0 - 1e-9); break;
        case 1: rad = Mw * std::pow(frac, 0.5); break;
        case 2: rad = Mw * 0.05 * frac; break;
        default: rad = 0.0; break;
      }
      Complex w = std::polar(rad, 2.0 * std::numbers::pi *
                                      halton(k + 1 + 31 * b.seed, 2));
      ExprPtr slice = z_slice(g, dir, w);
      ++res.points;
      if (is_identically_zero(*slice, t * r)) continue;
      double cand = ws.log_max_at(slice, {0.0, 0.0}, t * r) -
                    ws.log_max_at(slice, {0.0, 0.0}, r);
      if (cand > res.p) {
        res.p = cand;
        res.p_dir = dir;
        res.p_w = w;
      }
    }
    ++res.lines;
  }

  // q: Bernstein index of vertical slices over D_{3M2}
  BernsteinConfig bc;
  bc.center_grid = b.bernstein_grid;
  bc.s_grid = std::max(4, b.bernstein_grid);
  bc.circle = ws.config();
  bc.circle.circle_grid = 128;
  for (int k = 0; k < b.z_points; ++k) {
    Point z = k == 0 ? Point(n, Complex{0.0, 0.0}) : ball_point(n, t * r, k, b.seed);
    ExprPtr slice = w_slice(g, z);
    BernsteinIndexData bi = bernstein_index(slice, Disk{{0.0, 0.0}, Mw}, bc);
    ++res.points;
    if (bi.value > res.q) {
      res.q = bi.value;
      res.q_z = z;
      res.q_center = bi.witness_center;
      res.q_s = bi.witness_s;
    }
  }
  if (res.p == kNegInf) res.p = 0.0;
  if (res.q == kNegInf) res.q = 0.0;
  res.p = std::max(res.p, 0.0);
  res.q = std::max(res.q, 0.0);
  return res;
}

}  // namespace

ClassParams class_params(Workspace& ws, const ExprPtr& g, double r, double t,
                         double M2_log, const ClassParamsBudget& budget) {
  check_t_range(t);
  ClassParams out;
  out.r = r;
  out.t = t;
  out.M2_log = M2_log;
  ClassParamsBudget b = budget;
  PQResult prev = sample_pq(ws, g, r, t, M2_log, b);
  out.doublings = 0;
  for (int round = 0; round < budget.max_doublings; ++round) {
    b.lines *= 2;
    b.w_points *= 2;
    b.z_points *= 2;
    PQResult next = sample_pq(ws, g, r, t, M2_log, b);
    ++out.doublings;
    bool close = std::abs(next.p - prev.p) <= 0.01 * std::max(1.0, std::abs(next.p)) &&
                 std::abs(next.q - prev.q) <= 0.01 * std::max(1.0, std::abs(next.q));
    prev = next;
    if (close) {
      out.stable = true;
      break;
    }
  }
  out.p = prev.p;
  out.q = prev.q;
  out.lines_sampled = prev.lines;
  out.points_sampled = prev.points;
  out.p_witness_dir = prev.p_dir;
  out.p_witness_w = prev.p_w;
  out.q_witness_z = prev.q_z;
  out.q_witness_center = prev.q_center;
  out.q_witness_s = prev.q_s;
  return out;
}

ClassParams class_params(const ExprPtr& g, double r, double t, double M2_log,
                         const ClassParamsBudget& budget) {
  Workspace ws;
  return class_params(ws, g, r, t, M2_log, budget);
}

// ---------------------------------------------------------------------------
// Exponential polynomials

double exp_poly_degree(const FuncExpr& g) {
  const auto* ep = g.get_if<ExpPolyNode>();
  if (!ep) throw std::invalid_argument("exp_poly_degree: ExpPoly input required");
  double m = 0.0;
  for (const ExpPolyTerm& t : ep->terms) {
    PolyNode p{ep->nvars, t.poly};
    m += 1.0 + std::max(0, poly_total_degree(p));
  }
  return m;
}

double exp_poly_type(const FuncExpr& g) {
  const auto* ep = g.get_if<ExpPolyNode>();
  if (!ep) throw std::invalid_argument("exp_poly_type: ExpPoly input required");
  double eps = 0.0;
  for (const ExpPolyTerm& t : ep->terms) {
    double n2 = 0.0;
    for (const Complex& c : t.lin) n2 += std::norm(c);
    eps = std::max(eps, std::sqrt(n2));
  }
  return eps;
}

ClassParams class_params_exp_poly(Workspace& ws, const ExprPtr& g, double r,
                                  const ExprPtr& f) {
  const auto* ep = g->get_if<ExpPolyNode>();
  if (!ep)
    throw std::invalid_argument("class_params_exp_poly: ExpPoly input required");
  const int n = g->arity() - 1;
  if (f->arity() != n)
    throw std::invalid_argument("class_params_exp_poly: arity(f)+1 != arity(g)");
  const double e2 = std::numbers::e * std::numbers::e;
  double m = exp_poly_degree(*g);
  double eps = exp_poly_type(*g);

  ClassParams out;
  out.analytic = true;
  out.stable = true;
  out.r = r;
  out.t = std::numbers::e;
  out.p = m + 2.0 * e2 * eps * r;

  bool w_free = true;
  int deg_w = 0;
  for (const ExpPolyTerm& t : ep->terms) {
    if (t.lin[n] != Complex(0.0, 0.0)) w_free = false;
    for (const PolyTerm& pt : t.poly) deg_w = std::max(deg_w, pt.exps[n]);
  }
  double mf_log = ws.log_max(f, e2 * r);
  out.M2_log = mf_log;
  if (eps == 0.0) {
    out.q = m;  // purely polynomial
  } else if (w_free) {
    out.q = deg_w;  // no exponent depends on w: g(z,.) is a polynomial in w
  } else {
    double Mf = std::exp(mf_log);
    if (!std::isfinite(Mf))
      throw std::domain_error(
          "class_params_exp_poly: M_f(e^2 r) exceeds floating range");
    out.q = m + 6.0 * eps * Mf;
  }
  return out;
}

}  // namespace holocert
