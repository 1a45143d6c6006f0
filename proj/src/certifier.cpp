#include "holocert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holocert/constants.hpp"
#include "holocert/sampling.hpp"

namespace holocert {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double cond1_factor(double t) { return std::log((1.0 + t) / (2.0 * std::sqrt(t))); }

nlohmann::json complex_json(Complex c) {
  return nlohmann::json{{"re", c.real()}, {"im", c.imag()}};
}

// directional derivative as an expression: sum_i v_i d_i f
ExprPtr directional_expr(const ExprPtr& f, const std::vector<Complex>& v) {
  std::vector<ExprPtr> parts;
  for (int i = 0; i < f->arity(); ++i) {
    if (v[i] == Complex(0.0, 0.0)) continue;
    parts.push_back(scaled(derivative_expr(f, i), {1.0, 0.0}, v[i]));
  }
  if (parts.empty()) return make_poly(f->arity(), {});
  return sum_of(std::move(parts));
}

}  // namespace

double product_sup(Workspace& ws, const ExprPtr& g, double r, double W,
                   long samples, std::uint64_t seed, Point* witness) {
  const int n = g->arity() - 1;
  if (n < 1) throw std::invalid_argument("product_sup: g must live on C^{n+1}");
  auto value_at = [&](const std::vector<Complex>& u, double phi) {
    Point z(n + 1);
    for (int i = 0; i < n; ++i) z[i] = r * u[i];
    z[n] = std::polar(W, phi);
    return std::make_pair(eval_log(*g, z).log_mag, z);
  };
  double best = kNegInf;
  std::vector<Complex> best_u;
  double best_phi = 0.0;
  Point best_z;
  for (long j = 0; j < samples; ++j) {
    std::vector<Complex> u = sphere_point(n, j, seed);
    double phi = kTwoPi * halton(j + 1, 5);
    auto [v, z] = value_at(u, phi);
    if (v > best) {
      best = v;
      best_u = u;
      best_phi = phi;
      best_z = z;
    }
  }
  // local pattern refinement over (u, phi)
  double step = 0.2;
  while (step > 1e-9) {
    bool improved = false;
    for (int k = 0; k < 6; ++k) {
      std::vector<Complex> d = sphere_point(n, 2000003 + k, seed + 1);
      std::vector<Complex> u2(n);
      double norm = 0.0;
      for (int i = 0; i < n; ++i) {
        u2[i] = best_u[i] + step * d[i];
        norm += std::norm(u2[i]);
      }
      norm = std::sqrt(norm);
      for (Complex& x : u2) x /= norm;
      auto [v, z] = value_at(u2, best_phi);
      if (v > best) {
        best = v;
        best_u = u2;
        best_z = z;
        improved = true;
      }
    }
    for (double dphi : {step, -step}) {
      auto [v, z] = value_at(best_u, best_phi + dphi);
      if (v > best) {
        best = v;
        best_phi += dphi;
        best_z = z;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  if (witness) *witness = best_z;
  return best;
}

// ---------------------------------------------------------------------------
// Theorem te1

Te1Context prepare_te1(const ExprPtr& f, const ExprPtr& g, double r, double t,
                       const CertBudgets& budgets) {
  check_t_range(t);
  if (g->arity() != f->arity() + 1)
    throw std::invalid_argument("prepare_te1: arity(g) must be arity(f)+1");
  Te1Context ctx;
  ctx.f = f;
  ctx.g = g;
  ctx.r = r;
  ctx.t = t;
  ctx.budgets = budgets;
  ctx.ws.config().tol = budgets.tol;
  ctx.ws.config().seed = budgets.seed;

  GrowthData adm = check_admissibility(ctx.ws, f, r, t);
  ctx.f_eff = f;
  ctx.g_eff = g;
  if (adm.admissible) {
    ctx.admissible = true;
    ctx.M1_log = adm.M1_log;
    ctx.M2_log = adm.M2_log;
  } else if (adm.shifted && adm.shifted->admissible) {
    // Remark re1(B): certify for f - f(0) and g(z, w + f(0)).
    Point origin(f->arity(), Complex{0.0, 0.0});
    Complex f0 = eval(*f, origin);
    ctx.f_eff = shifted(f, origin, -f0);
    Point warg(g->arity(), Complex{0.0, 0.0});
    warg[g->arity() - 1] = f0;
    ctx.g_eff = shifted(g, warg, {0.0, 0.0});
    ctx.shift_applied = true;
    ctx.admissible = true;
    ctx.M1_log = adm.shifted->M1_log;
    ctx.M2_log = adm.shifted->M2_log;
  } else {
    ctx.admissible = false;
    ctx.growth = adm;
    return ctx;
  }

  NfConfig nf = budgets.nf;
  nf.seed = budgets.seed;
  ctx.growth = n_f_quantity(ctx.ws, ctx.f_eff, r, t, nf);

  ClassParamsBudget cpb = budgets.cp;
  cpb.seed = budgets.seed;
  ctx.cp = class_params(ctx.ws, ctx.g_eff, r, t, ctx.M2_log, cpb);

  ctx.c_const = c_M1M2_t(ctx.M1_log, ctx.M2_log, t);
  ctx.cond1_rhs = cond1_factor(t) * ctx.growth.N_f;
  ctx.cond1_ok = ctx.cp.p <= ctx.cond1_rhs + budgets.tol;

  ctx.gf = graph_restriction(g, f);  // equals the shifted pair's restriction
  ctx.gf_zero = is_identically_zero(*ctx.gf, t * r);
  if (!ctx.gf_zero) {
    ctx.m_gf_r = ctx.ws.log_max(ctx.gf, r);
    ctx.m_gf_tr = ctx.ws.log_max(ctx.gf, t * r);
  } else {
    ctx.m_gf_r = ctx.m_gf_tr = kNegInf;
  }

  ConstantsRequest creq;
  creq.t = t;
  creq.M1_log = ctx.M1_log;
  creq.M2_log = ctx.M2_log;
  ctx.constants = eval_constants(creq);
  return ctx;
}

namespace {

nlohmann::json te1_params(const Te1Context& ctx) {
  nlohmann::json p;
  p["r"] = ctx.r;
  p["t"] = ctx.t;
  p["M1_log"] = ctx.M1_log;
  p["M2_log"] = ctx.M2_log;
  p["p"] = ctx.cp.p;
  p["q"] = ctx.cp.q;
  p["N_f"] = ctx.growth.N_f;
  p["cond1_rhs"] = ctx.cond1_rhs;
  p["shift_applied"] = ctx.shift_applied;
  p["seed"] = ctx.budgets.seed;
  return p;
}

}  // namespace

std::vector<CertReport> certify_te1(Te1Context& ctx) {
  std::vector<CertReport> out;
  const std::string tag15 = ctx.shift_applied ? "e15'" : "e15";
  const std::string tag18 = ctx.shift_applied ? "e18'" : "e18";
  if (!ctx.admissible) {
    out.push_back(CertReport::hypothesis_not_met(
        "te1_product_bound", tag15,
        "f fails the admissibility inequality e12 even after the re1(B) shift"));
    out.push_back(CertReport::hypothesis_not_met("te1_graph_growth", tag18,
                                                 "same admissibility failure"));
    return out;
  }
  if (!ctx.cond1_ok) {
    std::string note = "condition cond1 fails: p > ln((1+t)/(2 sqrt t)) N_f";
    if (ctx.gf_zero)
      note += "; degenerate: g vanishes on the graph (Example ex1 counterexample regime)";
    for (const char* name : {"te1_product_bound", "te1_graph_growth"}) {
      CertReport rep = CertReport::hypothesis_not_met(
          name, name == std::string("te1_product_bound") ? tag15 : tag18, note);
      rep.params = te1_params(ctx);
      rep.constants = ctx.constants;
      out.push_back(std::move(rep));
    }
    return out;
  }

  double rhs = ctx.c_const * (ctx.cp.p + ctx.cp.q) + ctx.m_gf_r;
  Point witness;
  double lhs1 = product_sup(ctx.ws, ctx.g_eff, ctx.r, std::exp(ctx.M2_log),
                            ctx.budgets.sup_samples, ctx.budgets.seed, &witness);
  CertReport r15 =
      CertReport::compare("te1_product_bound", tag15, lhs1, rhs, ctx.budgets.tol);
  r15.constants = ctx.constants;
  r15.params = te1_params(ctx);
  r15.witnesses.push_back(witness);
  out.push_back(std::move(r15));

  CertReport r18 = CertReport::compare("te1_graph_growth", tag18, ctx.m_gf_tr,
                                       rhs, ctx.budgets.tol);
  r18.constants = ctx.constants;
  r18.params = te1_params(ctx);
  out.push_back(std::move(r18));
  return out;
}

std::vector<CertReport> certify_te1(const ExprPtr& f, const ExprPtr& g,
                                    double r, double t,
                                    const CertBudgets& budgets) {
  Te1Context ctx = prepare_te1(f, g, r, t, budgets);
  return certify_te1(ctx);
}

// ---------------------------------------------------------------------------
// Corollaries e110-e113

std::vector<CertReport> certify_corollaries(Te1Context& ctx,
                                            const CorollaryParams& params) {
  std::vector<CertReport> out;
  if (!ctx.admissible || !ctx.cond1_ok || ctx.gf_zero) {
    for (const char* tag : {"e110", "e111", "e112", "e113"})
      out.push_back(CertReport::hypothesis_not_met(
          std::string("corollary_") + tag, tag,
          "te1 hypotheses not met (or g vanishes on the graph)"));
    return out;
  }
  const double tol = ctx.budgets.tol;
  const double cpq = ctx.c_const * (ctx.cp.p + ctx.cp.q);
  std::vector<double> s_grid = params.s_grid;
  if (s_grid.empty()) {
    for (int k = 5; k >= 1; --k) s_grid.push_back(ctx.r * std::pow(0.45, k));
    s_grid.push_back(ctx.r);
  }

  // e110: Bernstein type, over the s grid
  {
    double worst = std::numeric_limits<double>::infinity();
    double lhs_at = kNegInf, rhs_at = 0.0;
    nlohmann::json per_s = nlohmann::json::array();
    for (double s : s_grid) {
      double m_s = ctx.ws.log_max(ctx.gf, s);
      double m_ts = ctx.ws.log_max(ctx.gf, ctx.t * s);
      double margin = (cpq + m_s) - m_ts;
      per_s.push_back({{"s", s}, {"margin", margin}});
      if (margin < worst) {
        worst = margin;
        lhs_at = m_ts - m_s;
        rhs_at = cpq;
      }
    }
    CertReport rep = CertReport::compare("bernstein_type", "e110", lhs_at,
                                         rhs_at, tol);
    rep.margin_log = worst;
    rep.pass = worst >= -tol;
    rep.outcome = rep.pass ? Outcome::Pass : Outcome::Fail;
    rep.constants = ctx.constants;
    rep.params = te1_params(ctx);
    rep.params["per_s"] = per_s;
    out.push_back(std::move(rep));
  }

  // e111: Markov type, directional derivatives on a direction grid
  {
    const int n = ctx.f->arity();
    double c1 = c1_t(ctx.t);
    double worst = std::numeric_limits<double>::infinity();
    double lhs_at = kNegInf, rhs_at = 0.0;
    int dirs = n == 1 ? 1 : ctx.budgets.deriv_dirs;
    for (int jd = 0; jd < dirs; ++jd) {
      std::vector<Complex> v = n == 1 ? std::vector<Complex>{Complex{1.0, 0.0}}
                                      : sphere_point(n, jd, ctx.budgets.seed + 3);
      ExprPtr dgf = directional_expr(ctx.gf, v);
      for (double s : s_grid) {
        double lhs = ctx.ws.log_max(dgf, s);
        // c1(t) c(M1,M2,t)(p+q)/s * M_gf(s), assembled in the log domain
        double rhs = std::log(c1) + std::log(cpq) - std::log(s) +
                     ctx.ws.log_max(ctx.gf, s);
        double margin = rhs - lhs;
        if (margin < worst) {
          worst = margin;
          lhs_at = lhs;
          rhs_at = rhs;
        }
      }
    }
    CertReport rep =
        CertReport::compare("markov_type", "e111", lhs_at, rhs_at, tol);
    rep.constants = ctx.constants;
    rep.params = te1_params(ctx);
    rep.params["c1_t"] = c1;
    out.push_back(std::move(rep));
  }

  // e112: Remez type, both the Phi form and the 8n/lambda form
  {
    const int n = ctx.f->arity();
    double s = params.remez_s > 0.0 ? params.remez_s : ctx.r;
    Point z = params.remez_center.empty() ? Point(n, Complex{0.0, 0.0})
                                          : params.remez_center;
    double znorm = 0.0;
    for (const Complex& c : z) znorm += std::norm(c);
    if (std::sqrt(znorm) + s > ctx.r * (1.0 + 1e-12))
      throw std::domain_error("certify_corollaries: remez ball must sit inside B_r");

    double lambda = 1.0;
    double sup_omega = kNegInf;
    double ball_vol = std::pow(std::numbers::pi, n) * std::pow(s, 2 * n);
    for (int i = 2; i <= n; ++i) ball_vol /= i;
    if (params.omega.full_ball) {
      Region reg{n == 1 ? RegionKind::Disk : RegionKind::Ball, z, s};
      sup_omega = ctx.ws.modulus(ctx.gf, reg).log_value;
    } else {
      if (params.omega.cells.empty())
        throw std::domain_error("certify_corollaries: omega has zero measure");
      double vol = 0.0;
      for (const RemezSet::Cell& cell : params.omega.cells) {
        if (static_cast<int>(cell.lo.size()) != 2 * n ||
            static_cast<int>(cell.hi.size()) != 2 * n)
          throw std::invalid_argument("remez cell dimension mismatch");
        double v = 1.0, corner = 0.0;
        for (int i = 0; i < 2 * n; ++i) {
          if (!(cell.hi[i] > cell.lo[i]))
            throw std::domain_error("certify_corollaries: omega has zero measure");
          v *= cell.hi[i] - cell.lo[i];
          double zi = i % 2 == 0 ? z[i / 2].real() : z[i / 2].imag();
          corner += std::pow(std::max(std::abs(cell.lo[i] - zi),
                                      std::abs(cell.hi[i] - zi)),
                             2);
        }
        if (std::sqrt(corner) > s * (1.0 + 1e-12))
          throw std::domain_error("remez cell leaves the ball B_s(z)");
        vol += v;
        // sample the cell on a small grid for sup_omega
        int side = std::max(2, static_cast<int>(std::lround(
                                   std::pow(256.0, 1.0 / (2 * n)))));
        std::vector<int> idx(2 * n, 0);
        while (true) {
          Point pt(n);
          for (int i = 0; i < n; ++i) {
            double re = cell.lo[2 * i] + (cell.hi[2 * i] - cell.lo[2 * i]) *
                                             (idx[2 * i] + 0.5) / side;
            double im = cell.lo[2 * i + 1] +
                        (cell.hi[2 * i + 1] - cell.lo[2 * i + 1]) *
                            (idx[2 * i + 1] + 0.5) / side;
            pt[i] = {re, im};
          }
          sup_omega = std::max(sup_omega, eval_log(*ctx.gf, pt).log_mag);
          int carry = 0;
          while (carry < 2 * n && ++idx[carry] == side) idx[carry++] = 0;
          if (carry == 2 * n) break;
        }
      }
      lambda = vol / ball_vol;
      if (!(lambda > 0.0))
        throw std::domain_error("certify_corollaries: omega has zero measure");
    }

    Region reg{n == 1 ? RegionKind::Disk : RegionKind::Ball, z, s};
    double lhs = ctx.ws.modulus(ctx.gf, reg).log_value;
    double c2 = c2_t(ctx.t);

    double root = std::pow(1.0 - std::min(lambda, 1.0), 1.0 / (2.0 * n));
    double phi_term;
    if (root >= 1.0 - 1e-300) {
      phi_term = std::numeric_limits<double>::infinity();
    } else {
      double x = (1.0 + root) / (1.0 - root);
      phi_term = std::log(x + std::sqrt(x * x - 1.0));
    }
    CertReport phi_rep = CertReport::compare(
        "remez_type_phi", "e112",
        lhs, c2 * cpq * phi_term + sup_omega, tol);
    phi_rep.constants = ctx.constants;
    phi_rep.params = te1_params(ctx);
    phi_rep.params["lambda"] = lambda;
    phi_rep.params["s"] = s;
    phi_rep.params["sup_omega"] = sup_omega;
    out.push_back(std::move(phi_rep));

    CertReport weak_rep = CertReport::compare(
        "remez_type_measure", "e112",
        lhs, c2 * cpq * std::log(8.0 * n / lambda) + sup_omega, tol);
    weak_rep.constants = ctx.constants;
    weak_rep.params = te1_params(ctx);
    weak_rep.params["lambda"] = lambda;
    out.push_back(std::move(weak_rep));
  }

  // e113: Jensen type (n = 1 only)
  {
    if (ctx.f->arity() == 1) {
      ZeroCount zc = count_zeros(ctx.gf, Disk{{0.0, 0.0}, ctx.r});
      double rhs = cpq / std::log((1.0 + ctx.t * ctx.t) / (2.0 * ctx.t));
      CertReport rep = CertReport::compare("jensen_type", "e113",
                                           static_cast<double>(zc.count), rhs, tol);
      rep.constants = ctx.constants;
      rep.params = te1_params(ctx);
      rep.params["domain"] = "count";
      rep.params["zero_count"] = zc.count;
      out.push_back(std::move(rep));
    } else {
      CertReport rep = CertReport::diagnostic("jensen_type", "e113");
      rep.outcome = Outcome::Vacuous;
      rep.note = "stated for n=1 only";
      out.push_back(std::move(rep));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Markov theorem

std::vector<CertReport> certify_markov(const ExprPtr& h, double R, double t,
                                       const std::vector<Complex>& v,
                                       double tol, int line_budget) {
  check_t_range(t);
  const int n = h->arity();
  if (static_cast<int>(v.size()) != n)
    throw std::invalid_argument("certify_markov: direction dimension mismatch");
  std::vector<CertReport> out;
  Workspace ws;
  ws.config().tol = tol;
  if (is_identically_zero(*h, t * R)) {
    CertReport rep = CertReport::diagnostic("markov_directional", "e32");
    rep.outcome = Outcome::Vacuous;
    rep.note = "h is identically zero";
    out.push_back(std::move(rep));
    return out;
  }
  double m_R = ws.log_max(h, R);
  double m_tR = ws.log_max(h, t * R);
  double d_param = m_tR - m_R;
  ConstantsRequest creq;
  creq.t = t;
  creq.d = d_param;
  ConstantsBundle cb = eval_constants(creq);

  ExprPtr dh = directional_expr(h, v);
  double lhs = is_identically_zero(*dh, R) ? kNegInf : ws.log_max(dh, R);
  double rhs = *cb.kappa > 0.0 ? std::log(*cb.kappa) - std::log(R) + m_R : kNegInf;
  CertReport rep = CertReport::compare("markov_directional", "e32", lhs, rhs, tol);
  rep.constants = cb;
  rep.params = {{"R", R}, {"t", t}, {"d", d_param}, {"kappa", *cb.kappa}};
  out.push_back(std::move(rep));

  // Lemma iter: in the small-d regime h is zero free on B_{sqrt t R}
  if (d_param < cond1_factor(t)) {
    int zeros = 0;
    long lines = 0;
    if (n == 1) {
      ZeroCount zc = count_zeros(h, Disk{{0.0, 0.0}, std::sqrt(t) * R});
      zeros = zc.count;
      lines = 1;
    } else {
      for (int j = 0; j < line_budget; ++j) {
        ExprPtr hl = restrict_to_line(h, sphere_point(n, j, 11));
        if (is_identically_zero(*hl, std::sqrt(t) * R)) continue;
        ZeroCount zc = count_zeros(hl, Disk{{0.0, 0.0}, std::sqrt(t) * R});
        zeros += zc.count;
        ++lines;
      }
    }
    CertReport iter = CertReport::compare("zero_free_small_d", "iter",
                                          static_cast<double>(zeros), 0.0, 0.5);
    iter.params = {{"d", d_param}, {"threshold", cond1_factor(t)},
                   {"lines_sampled", lines}, {"domain", "count"}};
    out.push_back(std::move(iter));
  } else {
    CertReport iter = CertReport::diagnostic("zero_free_small_d", "iter");
    iter.outcome = Outcome::Vacuous;
    iter.note = "d >= ln((1+t)/(2 sqrt t)): the zero-free lemma does not apply";
    out.push_back(std::move(iter));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theorem te12 (chains of curves)

namespace {

// univariate slice of g with all coordinates fixed except slot `var`
ExprPtr coordinate_slice(const ExprPtr& g, const Point& base, int var) {
  Point offset = base;
  offset[var] = {0.0, 0.0};
  std::vector<Complex> dir(g->arity(), Complex{0.0, 0.0});
  dir[var] = {1.0, 0.0};
  return restrict_to_line(shifted(g, offset, {0.0, 0.0}), dir);
}

}  // namespace

std::vector<CertReport> certify_te12(const std::vector<ExprPtr>& f_list,
                                     const ExprPtr& g, double r, double t,
                                     const Te12Budgets& budgets) {
  check_t_range(t);
  const int k = static_cast<int>(f_list.size());
  if (k < 1) throw std::invalid_argument("certify_te12: needs at least one f");
  if (g->arity() != k + 1)
    throw std::invalid_argument("certify_te12: arity(g) must equal k+1");
  for (const ExprPtr& fi : f_list)
    if (fi->arity() != 1)
      throw std::invalid_argument("certify_te12: every f_i must be univariate");

  std::vector<CertReport> out;
  const double tol = budgets.base.tol;

  // Single-curve chains are exactly Theorem te1; sharing its computation
  // keeps the margins bit-identical.
  if (k == 1) {
    Te1Context ctx = prepare_te1(f_list[0], g, r, t, budgets.base);
    std::vector<CertReport> te1 = certify_te1(ctx);
    for (CertReport& rep : te1) {
      rep.name = rep.name == "te1_product_bound" ? "te12_product_bound"
                                                 : "te12_graph_growth";
      rep.paper_tag = "e118";
      rep.params["k"] = 1;
      rep.params["note"] = "k=1 chain coincides with te1";
      out.push_back(std::move(rep));
    }
    return out;
  }

  Workspace ws;
  ws.config().tol = tol;
  ws.config().seed = budgets.base.seed;

  // admissibility and N for each curve
  std::vector<double> M1(k), M2(k), N(k);
  for (int i = 0; i < k; ++i) {
    GrowthData adm = check_admissibility(ws, f_list[i], r, t);
    if (!adm.admissible) {
      out.push_back(CertReport::hypothesis_not_met(
          "te12_product_bound", "e118",
          "f_" + std::to_string(i + 1) + " fails the admissibility inequality e12"));
      out.push_back(CertReport::hypothesis_not_met("te12_graph_growth", "e118",
                                                   "same admissibility failure"));
      return out;
    }
    M1[i] = adm.M1_log;
    M2[i] = adm.M2_log;
    NfConfig nf = budgets.base.nf;
    nf.seed = budgets.base.seed;
    N[i] = n_f_quantity(ws, f_list[i], r, t, nf).N_f;
  }
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return N[a] < N[b]; });

  // slice parameters p and q_i of condition e115, by sampled sups
  auto w_tuple = [&](int idx, int skip) {
    Point base(k + 1, Complex{0.0, 0.0});
    for (int j = 0; j < k; ++j) {
      if (j == skip) continue;
      double rad = 3.0 * std::exp(M2[j]) * (1.0 - 1e-9);
      base[1 + j] = std::polar(rad, kTwoPi * halton(idx + 1, nth_prime(j + 2)));
    }
    return base;
  };
  double p = 0.0;
  std::vector<double> q(k, 0.0);
  for (int idx = 0; idx < budgets.tuple_budget; ++idx) {
    Point base = w_tuple(idx, -1);
    ExprPtr zs = coordinate_slice(g, base, 0);
    if (!is_identically_zero(*zs, t * r))
      p = std::max(p, ws.log_max_at(zs, {0, 0}, t * r) -
                          ws.log_max_at(zs, {0, 0}, r));
  }
  BernsteinConfig bc;
  bc.center_grid = 4;
  bc.s_grid = 4;
  bc.circle = ws.config();
  bc.circle.circle_grid = 128;
  for (int i = 0; i < k; ++i) {
    for (int idx = 0; idx < budgets.tuple_budget; ++idx) {
      Point base = w_tuple(idx, i);
      for (int zi = 0; zi < budgets.z_budget; ++zi) {
        base[0] = std::polar(t * r * (zi == 0 ? 0.0 : (1.0 - 1e-9)),
                             kTwoPi * halton(zi + 1, 17));
        ExprPtr wslice = coordinate_slice(g, base, 1 + i);
        BernsteinIndexData bi =
            bernstein_index(wslice, Disk{{0.0, 0.0}, 3.0 * std::exp(M2[i])}, bc);
        q[i] = std::max(q[i], bi.value);
      }
    }
  }

  // recursion e117 on the sorted chain
  std::vector<double> pseq(k + 1, 0.0);
  pseq[0] = p;
  bool hyp_ok = true;
  std::string hyp_note;
  for (int j = 1; j <= k; ++j) {
    int fi = order[j - 1];
    if (pseq[j - 1] > cond1_factor(t) * N[fi] + tol) {
      hyp_ok = false;
      hyp_note = "p_" + std::to_string(j - 1) + " exceeds ln((1+t)/(2 sqrt t)) N_" +
                 std::to_string(fi + 1);
      break;
    }
    pseq[j] = c_M1M2_t(M1[fi], M2[fi], t) * (pseq[j - 1] + q[fi]);
  }

  nlohmann::json params;
  params["k"] = k;
  params["p"] = p;
  params["q"] = q;
  params["N"] = N;
  params["p_sequence"] = pseq;
  params["seed"] = budgets.base.seed;

  if (!hyp_ok) {
    for (const char* name : {"te12_product_bound", "te12_graph_growth"}) {
      CertReport rep = CertReport::hypothesis_not_met(name, "e118", hyp_note);
      rep.params = params;
      out.push_back(std::move(rep));
    }
    return out;
  }

  // g_Phi(z) = g(z, f_1(z), ..., f_k(z)) as a callback
  std::vector<Univariate> fu;
  for (const ExprPtr& fi : f_list) fu.push_back(make_univariate(fi));
  auto gphi_log = [&](Complex z) {
    Point pt(k + 1);
    pt[0] = z;
    for (int i = 0; i < k; ++i) pt[1 + i] = fu[i].value(z);
    return eval_log(*g, pt).log_mag;
  };
  SearchConfig scfg = ws.config();
  double m_phi_r =
      circle_extremum([&](double th) { return gphi_log(std::polar(r, th)); },
                      {0.0, 0.0}, r, true, scfg)
          .log_value;
  double m_phi_tr =
      circle_extremum([&](double th) { return gphi_log(std::polar(t * r, th)); },
                      {0.0, 0.0}, t * r, true, scfg)
          .log_value;

  // distinguished-boundary sup over D_r x prod D_{M_i2}
  double lhs1 = kNegInf;
  for (long j = 0; j < budgets.base.sup_samples; ++j) {
    Point pt(k + 1);
    pt[0] = std::polar(r, kTwoPi * halton(j + 1, 2));
    for (int i = 0; i < k; ++i)
      pt[1 + i] = std::polar(std::exp(M2[i]),
                             kTwoPi * halton(j + 1, nth_prime(i + 2)));
    lhs1 = std::max(lhs1, eval_log(*g, pt).log_mag);
  }

  double sum_p = 0.0;
  for (int j = 1; j <= k; ++j) sum_p += pseq[j];

  CertReport first = CertReport::compare("te12_product_bound", "e118", lhs1,
                                         sum_p + m_phi_r, tol);
  first.params = params;
  out.push_back(std::move(first));
  CertReport second = CertReport::compare("te12_graph_growth", "e118", m_phi_tr,
                                          pseq[k] + m_phi_r, tol);
  second.params = params;
  out.push_back(std::move(second));
  return out;
}

// ---------------------------------------------------------------------------
// Theorem te13 instances

std::vector<CertReport> certify_te13_instance(const ExprPtr& f,
                                              const ExprPtr& g,
                                              const Te13Instance& inst,
                                              const CertBudgets& budgets) {
  std::vector<CertReport> out;
  const double tol = budgets.tol;
  const int n = f->arity();
  if (g->arity() != n + 1)
    throw std::invalid_argument("certify_te13_instance: arity(g) != arity(f)+1");
  if (f->get_if<PolyNode>()) {
    out.push_back(CertReport::hypothesis_not_met(
        "te13_instance", "te13", "f must be a nonpolynomial entire function"));
    return out;
  }
  Workspace ws;
  ws.config().tol = tol;
  ws.config().seed = budgets.seed;

  double M2_log = ws.log_max(f, kE * kE * inst.r_j);

  // class parameters: closed-form caps for structural g, sampled otherwise
  double p, q;
  bool analytic = true;
  if (const auto* pg = g->get_if<PolyNode>()) {
    p = q = static_cast<double>(std::max(0, poly_total_degree(*pg)));
  } else if (g->get_if<ExpPolyNode>()) {
    ClassParams cp = class_params_exp_poly(ws, g, inst.r_j, f);
    p = cp.p;
    q = cp.q;
  } else {
    ClassParamsBudget cpb = budgets.cp;
    cpb.seed = budgets.seed;
    ClassParams cp = class_params(ws, g, kE * inst.r_j, kE, M2_log, cpb);
    p = cp.p;
    q = cp.q;
    analytic = false;
  }
  nlohmann::json params;
  params["n_j"] = inst.n_j;
  params["r_j"] = inst.r_j;
  params["eps_j"] = inst.eps_j;
  params["rho"] = inst.rho;
  params["C_rho"] = inst.C_rho;
  params["p"] = p;
  params["q"] = q;
  params["class_params_analytic"] = analytic;
  params["seed"] = budgets.seed;

  if (p > inst.n_j + tol) {
    CertReport rep = CertReport::hypothesis_not_met(
        "te13_instance", "te13", "class parameter p exceeds n_j");
    rep.params = params;
    out.push_back(std::move(rep));
    return out;
  }

  double E = inst.C_rho * std::pow(inst.n_j, 1.0 + inst.eps_j) * std::max(p, q);
  ExprPtr gf = graph_restriction(g, f);
  double m1 = ws.log_max(gf, 1.0);
  std::vector<double> r_grid{1.0, std::sqrt(inst.r_j), inst.r_j};
  r_grid.erase(std::unique(r_grid.begin(), r_grid.end()), r_grid.end());

  // (a) sup over B^n x D
  {
    Point witness;
    double lhs = product_sup(ws, g, 1.0, 1.0, budgets.sup_samples, budgets.seed,
                             &witness);
    CertReport rep = CertReport::compare("te13_a_product_bound", "te13(a)", lhs,
                                         E * std::log(inst.r_j) + m1, tol);
    rep.params = params;
    rep.witnesses.push_back(witness);
    out.push_back(std::move(rep));
  }
  // (b) growth from radius 1
  {
    double worst = std::numeric_limits<double>::infinity();
    double lhs_at = kNegInf, rhs_at = 0.0;
    for (double rr : r_grid) {
      double lhs = ws.log_max(gf, rr);
      double rhs = E * std::log(rr) + m1;
      if (rhs - lhs < worst) {
        worst = rhs - lhs;
        lhs_at = lhs;
        rhs_at = rhs;
      }
    }
    CertReport rep =
        CertReport::compare("te13_b_radius_growth", "te13(b)", lhs_at, rhs_at, tol);
    rep.params = params;
    out.push_back(std::move(rep));
  }
  // (c) one-e-step ratio
  {
    double worst = std::numeric_limits<double>::infinity();
    double lhs_at = kNegInf, rhs_at = 0.0;
    for (double rr : r_grid) {
      double lhs = ws.log_max(gf, kE * rr) - ws.log_max(gf, rr);
      if (E - lhs < worst) {
        worst = E - lhs;
        lhs_at = lhs;
        rhs_at = E;
      }
    }
    CertReport rep =
        CertReport::compare("te13_c_e_step", "te13(c)", lhs_at, rhs_at, tol);
    rep.params = params;
    out.push_back(std::move(rep));
  }
  // (d) directional Markov with c1 := 9
  {
    double worst = std::numeric_limits<double>::infinity();
    double lhs_at = kNegInf, rhs_at = 0.0;
    int dirs = n == 1 ? 1 : budgets.deriv_dirs;
    for (int jd = 0; jd < dirs; ++jd) {
      std::vector<Complex> v = n == 1 ? std::vector<Complex>{Complex{1.0, 0.0}}
                                      : sphere_point(n, jd, budgets.seed + 7);
      ExprPtr dgf = directional_expr(gf, v);
      for (double rr : r_grid) {
        double lhs = ws.log_max(dgf, rr);
        double rhs = std::log(9.0 * E) - std::log(rr) + ws.log_max(gf, rr);
        if (rhs - lhs < worst) {
          worst = rhs - lhs;
          lhs_at = lhs;
          rhs_at = rhs;
        }
      }
    }
    CertReport rep =
        CertReport::compare("te13_d_markov", "te13(d)", lhs_at, rhs_at, tol);
    rep.params = params;
    out.push_back(std::move(rep));
  }
  // (e) Remez with the default inscribed cube at s=1, c2 := 5
  {
    double s = 1.0;
    double half = 0.5 * s / std::sqrt(2.0 * n);
    double cube_vol = std::pow(2.0 * half, 2 * n);
    double ball_vol = std::pow(std::numbers::pi, n) * std::pow(s, 2 * n);
    for (int i = 2; i <= n; ++i) ball_vol /= i;
    double lambda = cube_vol / ball_vol;
    double sup_omega = kNegInf;
    const int side = 12;
    std::vector<int> idx(2 * n, 0);
    while (true) {
      Point pt(n);
      for (int i = 0; i < n; ++i)
        pt[i] = {-half + 2.0 * half * (idx[2 * i] + 0.5) / side,
                 -half + 2.0 * half * (idx[2 * i + 1] + 0.5) / side};
      sup_omega = std::max(sup_omega, eval_log(*gf, pt).log_mag);
      int carry = 0;
      while (carry < 2 * n && ++idx[carry] == side) idx[carry++] = 0;
      if (carry == 2 * n) break;
    }
    Region reg{n == 1 ? RegionKind::Disk : RegionKind::Ball,
               Point(n, Complex{0.0, 0.0}), s};
    double lhs = ws.modulus(gf, reg).log_value;
    double rhs = 5.0 * E * std::log(8.0 / lambda) + sup_omega;
    CertReport rep = CertReport::compare("te13_e_remez", "te13(e)", lhs, rhs, tol);
    rep.params = params;
    rep.params["lambda"] = lambda;
    out.push_back(std::move(rep));
  }
  // (f) zero count for n = 1, c3 := 5
  {
    if (n == 1) {
      ZeroCount zc = count_zeros(gf, Disk{{0.0, 0.0}, inst.r_j});
      CertReport rep = CertReport::compare("te13_f_zero_count", "te13(f)",
                                           static_cast<double>(zc.count),
                                           5.0 * E, tol);
      rep.params = params;
      rep.params["domain"] = "count";
      out.push_back(std::move(rep));
    } else {
      CertReport rep = CertReport::diagnostic("te13_f_zero_count", "te13(f)");
      rep.outcome = Outcome::Vacuous;
      rep.note = "stated for n=1 only";
      out.push_back(std::move(rep));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theorem te14 probes

std::vector<CertReport> probe_te14_condition(const ExprPtr& f, double rho,
                                             const std::vector<double>& t_grid,
                                             const CertBudgets& budgets) {
  std::vector<CertReport> out;
  if (f->get_if<PolyNode>()) {
    out.push_back(CertReport::hypothesis_not_met(
        "te14_probe", "te14", "f must be a nonpolynomial entire function"));
    return out;
  }
  if (t_grid.size() < 3)
    throw std::invalid_argument("probe_te14_condition: need at least 3 grid points");
  Workspace ws;
  ws.config().tol = budgets.tol;
  auto m_f = [&](double radius) { return ws.log_max(f, radius); };

  CertReport rep = CertReport::diagnostic("te14_probe", "te14");
  rep.params["rho"] = rho;
  if (std::isfinite(rho)) {
    double a = alpha_rho(rho);
    nlohmann::json rows = nlohmann::json::array();
    std::vector<double> ratios;
    for (double t : t_grid) {
      double r = std::exp(t);
      double num = m_f(std::exp(a) * r) - m_f(std::exp(-a) * r) +
                   rho * std::exp(rho * t);
      double den = m_f(std::exp(-a) * r) - m_f(std::exp(-2.0 * a) * r);
      double ratio = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
      ratios.push_back(ratio);
      rows.push_back({{"t", t}, {"ratio", ratio}});
    }
    // running max of the tail, reported from each grid point onward
    nlohmann::json tails = nlohmann::json::array();
    double running = -std::numeric_limits<double>::infinity();
    for (int i = static_cast<int>(ratios.size()) - 1; i >= 0; --i) {
      running = std::max(running, ratios[i]);
      tails.push_back({{"t", t_grid[i]}, {"tail_max", running}});
    }
    rep.params["condition"] = "I";
    rep.params["alpha_rho"] = a;
    rep.params["ratios"] = rows;
    rep.params["tail_max"] = tails;
    rep.note = "diagnostic probe of condition (I); limits are not decidable "
               "from finitely many samples";
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t i = 1; i + 1 < t_grid.size(); ++i) {
      double h = 0.5 * std::min(t_grid[i] - t_grid[i - 1], t_grid[i + 1] - t_grid[i]);
      double tp = t_grid[i] + h, tm = t_grid[i] - h;
      double vp_ = 1.0 / std::log(m_f(std::exp(tp)));
      double vm = 1.0 / std::log(m_f(std::exp(tm)));
      double val = t_grid[i] * t_grid[i] * (vp_ - vm) / (2.0 * h);
      rows.push_back({{"t", t_grid[i]}, {"value", val}});
    }
    rep.params["condition"] = "II";
    rep.params["values"] = rows;
    rep.note = "diagnostic probe of condition (II)";
  }
  out.push_back(std::move(rep));
  return out;
}

}  // namespace holocert
