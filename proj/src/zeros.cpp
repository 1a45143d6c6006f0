#include "holocert/zeros.hpp"
#include <cstdio>
#include <cstdlib>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "holocert/constants.hpp"
#include "holocert/sampling.hpp"

namespace holocert {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool probe_identically_zero(const Univariate& h, const Disk& d) {
  for (int k = 0; k < 16; ++k) {
    double a = 2.399963229728653 * (k + 1);
    double r = d.radius * (0.08 + 0.9 * std::fmod(0.618033988749895 * (k + 1), 1.0));
    double la = h.log_abs(d.center + std::polar(r, a));
    if (la > -600.0) return false;
  }
  return true;
}

}  // namespace

Univariate make_univariate(ExprPtr h) {
  if (!h || h->arity() != 1)
    throw std::invalid_argument("make_univariate: univariate expression required");
  Univariate u;
  u.value = [h](Complex z) { return eval(*h, Point{z}); };
  ExprPtr dh = derivative_expr(h, 0);
  u.deriv = [dh](Complex z) { return eval(*dh, Point{z}); };
  u.log_abs = [h](Complex z) { return eval_log(*h, Point{z}).log_mag; };
  return u;
}

Univariate offset_by(const Univariate& h, Complex c) {
  Univariate u;
  u.value = [h, c](Complex z) { return h.value(z) + c; };
  u.deriv = h.deriv;
  u.log_abs = [h, c](Complex z) {
    LogComplex items[2] = {log_complex_of(h.value(z)), log_complex_of(c)};
    return log_sum(items).log_mag;
  };
  return u;
}

// ---------------------------------------------------------------------------
// Argument-principle count

namespace {

struct RawIntegral {
  Complex value{0.0, 0.0};
  bool boundary_zero = false;
};

RawIntegral contour_integral(const Univariate& h, Complex c, double r, int m) {
  // (1/2 pi i) oint h'/h = (r/m) sum (h'/h)(xi_k) e^{i theta_k}
  RawIntegral out;
  Complex acc{0.0, 0.0};
  for (int k = 0; k < m; ++k) {
    double th = kTwoPi * k / m;
    Complex xi = c + std::polar(r, th);
    Complex hv = h.value(xi);
    if (hv == Complex(0.0, 0.0)) {
      out.boundary_zero = true;
      return out;
    }
    acc += h.deriv(xi) / hv * std::polar(1.0, th);
  }
  out.value = acc * (r / m);
  return out;
}

}  // namespace

ZeroCount count_zeros(const Univariate& h, const Disk& disk,
                      const CountConfig& cfg) {
  if (disk.radius <= 0.0)
    throw std::domain_error("count_zeros: radius must be positive");
  ZeroCount out;
  out.radius_used = disk.radius;
  if (probe_identically_zero(h, disk)) {
    out.identically_zero = true;
    return out;
  }
  // Zeros near the contour slow convergence; the radius is nudged outward
  // (recorded) until the integral settles on an integer.
  const double factors[] = {1.0,        1.0 + 1e-6, 1.0 + 3.1e-6, 1.0 + 9.7e-6,
                            1.0 + 3.1e-5, 1.0 + 1.1e-4, 1.0 + 4.7e-4};
  for (double fac : factors) {
    double r = disk.radius * fac;
    int prev_n = std::numeric_limits<int>::min();
    bool prev_ok = false;
    for (int m = cfg.initial_nodes; m <= cfg.max_nodes; m *= 2) {
      RawIntegral raw = contour_integral(h, disk.center, r, m);
      out.nodes_used += m;
      if (raw.boundary_zero) break;
      double re = raw.value.real();
      if (!std::isfinite(re)) break;
      int n = static_cast<int>(std::lround(re));
      double resid = std::abs(raw.value - Complex(static_cast<double>(n), 0.0));
      bool ok = resid < cfg.integer_window && n >= 0;
      if (ok && prev_ok && n == prev_n && resid < cfg.residual_limit) {
        out.count = n;
        out.residual = resid;
        out.radius_used = r;
        out.perturbed = fac != 1.0;
        return out;
      }
      prev_n = n;
      prev_ok = ok;
    }
  }
  throw std::runtime_error("count_zeros: indeterminate count (zero persistently near the contour?)");
}

ZeroCount count_zeros(const ExprPtr& h, const Disk& disk,
                      const CountConfig& cfg) {
  if (is_identically_zero(*h, disk.radius)) {
    ZeroCount out;
    out.identically_zero = true;
    out.radius_used = disk.radius;
    return out;
  }
  return count_zeros(make_univariate(h), disk, cfg);
}

// ---------------------------------------------------------------------------
// Localization

namespace {

struct Candidate {
  Complex z;
  int mult;
  double res;  // scale at which the candidate was pinned down
};

// Newton with multiplicity acceleration. Multiple zeros of inexactly
// represented functions stall at the rounding floor (|h| ~ delta^mult), so
// the best-|h| iterate is returned; the caller validates it with counts.
std::optional<Complex> newton_refine(const Univariate& h, Complex z0, int mult,
                                     double trust_radius, Complex trust_center) {
  Complex z = z0;
  Complex best = z0;
  double best_la = h.log_abs(z0);
  for (int it = 0; it < 120; ++it) {
    Complex d = h.deriv(z);
    Complex v = h.value(z);
    if (v == Complex(0.0, 0.0)) return z;
    if (d == Complex(0.0, 0.0)) break;
    Complex step = static_cast<double>(mult) * v / d;
    if (!(std::isfinite(step.real()) && std::isfinite(step.imag()))) break;
    z -= step;
    if (std::abs(z - trust_center) > trust_radius) break;
    double la = h.log_abs(z);
    if (la < best_la) {
      best_la = la;
      best = z;
    }
    if (std::abs(step) <= 1e-15 * (std::abs(z) + 1e-300)) return z;
  }
  if (best_la < h.log_abs(z0) - 3.0) return best;
  return std::nullopt;
}

// Sum of zeros inside the circle via the first-moment contour integral
// (1/2 pi i) oint xi h'/h dxi; divided by the count it pins a cluster's
// centroid far more accurately than Newton can at the rounding floor.
std::optional<Complex> zero_centroid(const Univariate& h, Complex c, double r,
                                     int count, const CountConfig& cfg) {
  Complex prev{0.0, 0.0};
  bool have_prev = false;
  for (int m = cfg.initial_nodes; m <= cfg.max_nodes; m *= 2) {
    Complex acc{0.0, 0.0};
    for (int k = 0; k < m; ++k) {
      double th = kTwoPi * k / m;
      Complex xi = c + std::polar(r, th);
      Complex hv = h.value(xi);
      if (hv == Complex(0.0, 0.0)) return std::nullopt;
      acc += xi * (h.deriv(xi) / hv) * std::polar(1.0, th);
    }
    Complex est = acc * (r / m) / static_cast<double>(count);
    if (!(std::isfinite(est.real()) && std::isfinite(est.imag())))
      return std::nullopt;
    if (have_prev && std::abs(est - prev) <= 1e-11 * (std::abs(est) + r))
      return est;
    prev = est;
    have_prev = true;
  }
  return std::nullopt;
}

void locate_rec(const Univariate& h, const Disk& d, double eps_rel,
                const CountConfig& cfg, int depth,
                std::vector<Candidate>& out) {
  ZeroCount zc = count_zeros(h, d, cfg);
  if (zc.identically_zero)
    throw std::runtime_error("locate_zeros: function is identically zero");
  const int count = zc.count;
  if (count == 0) return;
  const double reach = zc.radius_used;  // zeros live within this radius
  double eps = eps_rel * std::max(std::abs(d.center), d.radius);
  bool bottomed = d.radius <= std::max(eps, 1e-300) || depth > 1200;

  // Try to capture the whole content of the disk as one cluster: Newton with
  // multiplicity, then a growing guard disk. Acceptance requires the guard to
  // stay well below the current scale, so genuinely separated zeros fall
  // through to subdivision.
  std::optional<Complex> z =
      newton_refine(h, d.center, count, 1.6 * d.radius, d.center);
  if (z && std::abs(*z - d.center) > reach) z.reset();
  if (z) {
    // the guard disk must stay inside the counted region, otherwise a
    // matching count could come from foreign zeros
    double gmax = std::min(0.05 * d.radius, reach - std::abs(*z - d.center));
    double g0 = std::max(8.0 * eps_rel * std::max(std::abs(*z), d.radius * 1e-30),
                         d.radius * 1e-12);
    for (double g = g0; g <= gmax; g *= 10.0) {
      ZeroCount inner;
      try {
        inner = count_zeros(h, Disk{*z, g}, cfg);
      } catch (const std::runtime_error&) {
        continue;  // below the rounding floor; a larger guard will be clean
      }
      if (inner.count == count) {
        // A multi-point capture is only final if the content does not split
        // cleanly at a finer scale (multiple zeros sit at the rounding floor
        // where smaller contours are indeterminate).
        bool resolved = count == 1 || g <= 64.0 * g0;
        if (!resolved) {
          try {
            ZeroCount probe = count_zeros(h, Disk{*z, g / 20.0}, cfg);
            resolved = probe.count == count;
          } catch (const std::runtime_error&) {
            resolved = true;  // below the rounding floor
          }
        }
        if (resolved) {
          Complex loc = *z;
          if (auto cen = zero_centroid(h, *z, g, count, cfg)) loc = *cen;
          out.push_back({loc, count, g});
          return;
        }
        break;  // splits at a finer scale; subdivide
      }
      if (inner.count > 0) break;  // the zeros split at this scale
    }
  }
  if (bottomed) {
    out.push_back({z ? *z : d.center, count, d.radius});
    return;
  }

  // Hex cover of the (possibly perturbed) reach: a center child plus six
  // around it. The pattern rotates per level so child boundaries do not stay
  // aligned with zero constellations. Child radius 0.56*reach keeps every
  // Voronoi cell inside its own child disk, which makes ownership-based
  // deduplication exact.
  double phi = 0.37 * depth;
  double cr = 0.56 * reach;
  std::vector<Disk> children;
  children.push_back({d.center, cr});
  for (int k = 0; k < 6; ++k)
    children.push_back({d.center + std::polar(0.8660254037844386 * reach,
                                              phi + k * std::numbers::pi / 3.0),
                        cr});
  std::vector<Candidate> merged;
  for (size_t j = 0; j < children.size(); ++j) {
    std::vector<Candidate> sub;
    locate_rec(h, children[j], eps_rel, cfg, depth + 1, sub);
    for (const Candidate& cand : sub) {
      if (std::abs(cand.z - d.center) > reach * (1.0 + 1e-12)) continue;
      size_t owner = 0;
      double best = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < children.size(); ++i) {
        double dist = std::abs(cand.z - children[i].center);
        if (dist < best) {
          best = dist;
          owner = i;
        }
      }
      if (owner != j) continue;
      // two reports of one zero differ by at most its pin-down scale
      bool dup = false;
      for (const Candidate& m : merged)
        if (std::abs(m.z - cand.z) <= 4.0 * std::max(m.res, cand.res)) {
          dup = true;
          break;
        }
      if (!dup) merged.push_back(cand);
    }
  }
  int total = 0;
  for (const Candidate& m : merged) total += m.mult;
  if (total != count) {
    // Re-verify every candidate with a tight disk sized by the distances to
    // its neighbors and to the parent boundary.
    total = 0;
    for (Candidate& m : merged) {
      double lim = 0.49 * (reach - std::abs(m.z - d.center));
      for (const Candidate& o : merged)
        if (&o != &m) lim = std::min(lim, 0.45 * std::abs(o.z - m.z));
      if (lim > 1e-250) {
        try {
          ZeroCount inner = count_zeros(h, Disk{m.z, lim}, cfg);
          m.mult = inner.count;
        } catch (const std::runtime_error&) {
        }
      }
      total += m.mult;
    }
  }
  if (total != count) {
    if (std::getenv("HOLOCERT_DEBUG_LOCATE")) {
      std::fprintf(stderr,
                   "[locate] mismatch at c=(%.6g,%.6g) r=%.6g reach=%.6g count=%d total=%d\n",
                   d.center.real(), d.center.imag(), d.radius, reach, count,
                   total);
      for (const Candidate& m : merged)
        std::fprintf(stderr, "  cand (%.12g,%.12g) mult %d |z-c|=%.6g\n",
                     m.z.real(), m.z.imag(), m.mult, std::abs(m.z - d.center));
    }
    throw std::runtime_error("locate_zeros: subdivision bookkeeping mismatch");
  }
  out.insert(out.end(), merged.begin(), merged.end());
}

}  // namespace

std::vector<LocatedZero> locate_zeros(const Univariate& h, const Disk& disk,
                                      double eps_rel, const CountConfig& cfg) {
  std::vector<Candidate> cands;
  locate_rec(h, disk, eps_rel, cfg, 0, cands);
  std::vector<LocatedZero> out;
  out.reserve(cands.size());
  for (const Candidate& c : cands) out.push_back({c.z, c.mult});
  std::stable_sort(out.begin(), out.end(),
                   [](const LocatedZero& a, const LocatedZero& b) {
                     if (a.location.real() != b.location.real())
                       return a.location.real() < b.location.real();
                     return a.location.imag() < b.location.imag();
                   });
  return out;
}

std::vector<LocatedZero> locate_zeros(const ExprPtr& h, const Disk& disk,
                                      double eps_rel) {
  return locate_zeros(make_univariate(h), disk, eps_rel);
}

// ---------------------------------------------------------------------------
// Valency

namespace {

int count_for_candidate(const Univariate& h, Complex c, const Disk& disk,
                        const CountConfig& cfg) {
  try {
    ZeroCount zc = count_zeros(offset_by(h, c), disk, cfg);
    return zc.identically_zero ? -1 : zc.count;
  } catch (const std::runtime_error&) {
    return -1;
  }
}

ValencyData valency_with_budget(const ExprPtr& h, const Disk& disk,
                                int budget) {
  CountConfig ccfg;
  Univariate u = make_univariate(h);
  std::vector<Complex> candidates;
  candidates.push_back(-u.value(disk.center));

  const auto* poly = h->get_if<PolyNode>();
  bool poly_path = poly != nullptr && poly->nvars == 1;
  if (poly_path) {
    PolyNode dp = poly_partial(*poly, 0);
    if (poly_is_zero(dp))
      throw std::domain_error("valency: undefined for constant functions");
    ExprPtr dh = make_expr(std::move(dp));
    std::vector<LocatedZero> crit = locate_zeros(dh, disk, 1e-12);
    double scale = std::exp(max_modulus(*h, Region{RegionKind::Circle,
                                                   Point{disk.center},
                                                   disk.radius},
                                        1e-9)
                                .log_value);
    for (const LocatedZero& p : crit) {
      Complex cv = u.value(p.location);
      candidates.push_back(-cv);
      for (double mag : {1e-7, 1e-4}) {
        for (int q = 0; q < 4; ++q)
          candidates.push_back(-cv + std::polar(mag * (scale + 1e-30),
                                                q * std::numbers::pi / 2.0));
      }
    }
  } else {
    if (is_constant_probe(*h, disk.radius))
      throw std::domain_error("valency: undefined for constant functions");
    // cover the image of the closed disk: c = -h(z) over an interior sweep,
    // refined near critical values
    for (int k = 0; k < budget; ++k) {
      double t = (k + 0.5) / budget;
      double rr = disk.radius * std::sqrt(t);
      double th = kTwoPi * std::fmod(0.618033988749895 * (k + 1), 1.0);
      candidates.push_back(-u.value(disk.center + std::polar(rr, th)));
    }
    Univariate du{u.deriv,
                  [&u](Complex z) {
                    // derivative of h' by small Cauchy circle around z
                    double rc = 1e-3;
                    Complex acc{0, 0};
                    const int m = 32;
                    for (int k = 0; k < m; ++k) {
                      double th = kTwoPi * k / m;
                      acc += u.deriv(z + std::polar(rc, th)) *
                             std::polar(1.0, -th);
                    }
                    return acc / (static_cast<double>(m) * rc);
                  },
                  [&u](Complex z) {
                    Complex d = u.deriv(z);
                    return d == Complex(0, 0) ? kNegInf : std::log(std::abs(d));
                  }};
    try {
      std::vector<LocatedZero> crit = locate_zeros(du, disk, 1e-9);
      for (const LocatedZero& p : crit) {
        Complex cv = u.value(p.location);
        candidates.push_back(-cv);
        for (double mag : {1e-7, 1e-4})
          for (int q = 0; q < 4; ++q)
            candidates.push_back(-cv +
                                 std::polar(mag, q * std::numbers::pi / 2.0));
      }
    } catch (const std::runtime_error&) {
      // critical-point localization is best effort on the sampled path
    }
  }

  ValencyData out;
  out.budget_used = static_cast<long>(candidates.size());
  int best = -1;
  Complex best_c{0.0, 0.0};
  for (const Complex& c : candidates) {
    int n = count_for_candidate(u, c, disk, ccfg);
    if (n > best || (n == best && std::abs(c) < std::abs(best_c) - 1e-18)) {
      best = n;
      best_c = c;
    }
  }
  if (best < 0)
    throw std::runtime_error("valency: no candidate produced a countable shift");
  out.valency = best;
  out.witness_c = best_c;
  return out;
}

}  // namespace

ValencyData valency(const ExprPtr& h, const Disk& disk, int budget) {
  ValencyData first = valency_with_budget(h, disk, budget);
  ValencyData second = valency_with_budget(h, disk, 2 * budget);
  if (second.valency > first.valency) {
    second.stable = false;
    return second;
  }
  first.stable = true;
  return first;
}

// ---------------------------------------------------------------------------
// Bernstein index

BernsteinIndexData bernstein_index(const Univariate& h, const Disk& disk,
                                   const BernsteinConfig& cfg) {
  if (probe_identically_zero(h, disk))
    return {0.0, disk.center, disk.radius / (2.0 * std::numbers::e)};

  auto circle_max = [&](Complex z, double s) {
    return circle_extremum([&](double th) { return h.log_abs(z + std::polar(s, th)); },
                           z, s, true, cfg.circle)
        .log_value;
  };
  const double rmax = disk.radius * (1.0 - 1e-9);
  auto value_at = [&](Complex z, double s) {
    return circle_max(z, std::numbers::e * s) - circle_max(z, s);
  };

  double best = -std::numeric_limits<double>::infinity();
  Complex best_z = disk.center;
  double best_s = 0.0;
  auto consider = [&](Complex z, double s) {
    if (s <= 0.0) return;
    if (std::abs(z - disk.center) + std::numbers::e * s > rmax) return;
    double v = value_at(z, s);
    bool better = v > best + 1e-12;
    bool tie = std::abs(v - best) <= 1e-12;
    if (better ||
        (tie && (std::abs(z) < std::abs(best_z) - 1e-15 ||
                 (std::abs(std::abs(z) - std::abs(best_z)) <= 1e-15 && s < best_s)))) {
      best = v;
      best_z = z;
      best_s = s;
    }
  };

  // polar grid of centers, log-spaced radii per center
  std::vector<Complex> centers{disk.center};
  for (int i = 0; i < cfg.center_grid; ++i) {
    double rho = disk.radius * (i + 0.7) / (cfg.center_grid + 0.7);
    for (int j = 0; j < cfg.center_grid; ++j)
      centers.push_back(disk.center +
                        std::polar(rho, kTwoPi * j / cfg.center_grid));
  }
  for (const Complex& z : centers) {
    double smax = (rmax - std::abs(z - disk.center)) / std::numbers::e;
    if (smax <= 0.0) continue;
    for (int k = 0; k < cfg.s_grid; ++k) {
      double s = smax * std::pow(1e-3, static_cast<double>(k) / cfg.s_grid);
      consider(z, s);
    }
  }

  // local pattern refinement around the best cell
  double step_z = disk.radius / (cfg.center_grid + 1.0);
  double step_ls = std::log(1e3) / cfg.s_grid;
  for (int it = 0; it < cfg.refine_iters; ++it) {
    Complex z0 = best_z;
    double s0 = best_s;
    bool improved = false;
    for (int q = 0; q < 4; ++q) {
      Complex z = z0 + std::polar(step_z, q * std::numbers::pi / 2.0);
      double old = best;
      consider(z, s0);
      if (best > old) improved = true;
    }
    for (double ds : {step_ls, -step_ls}) {
      double old = best;
      consider(z0, s0 * std::exp(ds));
      if (best > old) improved = true;
    }
    if (!improved) {
      step_z *= 0.5;
      step_ls *= 0.5;
      if (step_z < 1e-9 * disk.radius && step_ls < 1e-9) break;
    }
  }
  return {best, best_z, best_s};
}

BernsteinIndexData bernstein_index(const ExprPtr& h, const Disk& disk,
                                   const BernsteinConfig& cfg) {
  if (is_identically_zero(*h, disk.radius))
    return {0.0, disk.center, disk.radius / (2.0 * std::numbers::e)};
  return bernstein_index(make_univariate(h), disk, cfg);
}

// ---------------------------------------------------------------------------
// VP and JO bounds

double vp_zero_bound(const ExprPtr& h, double R, double beta,
                     const SearchConfig& cfg) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::domain_error("vp_zero_bound: requires beta in (0,1)");
  Workspace ws(cfg);
  ExprPtr alias = h;
  double num = ws.log_max(alias, R) - ws.log_max(alias, beta * R);
  return num / std::log((1.0 + beta * beta) / (2.0 * beta));
}

double valency_lower_bound(const ExprPtr& h, double R, double t, double s,
                           const SearchConfig& cfg) {
  if (!(t > 1.0)) throw std::domain_error("valency_lower_bound: requires t>1");
  if (!(s >= t)) throw std::domain_error("valency_lower_bound: requires s>=t");
  Workspace ws(cfg);
  ExprPtr alias = h;
  double num = ws.log_max(alias, R / t) - ws.log_max(alias, R / s);
  return std::max(num / k_ts(t, s), 1.0);
}

}  // namespace holocert
