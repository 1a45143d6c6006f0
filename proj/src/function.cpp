#include "holocert/function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <nlohmann/json.hpp>

namespace holocert {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& c : v) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Arity checking

FuncExpr::FuncExpr(Node node) : node_(std::move(node)), arity_(0) {
  arity_ = std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PolyNode>) {
          require(n.nvars >= 1, "poly: nvars must be >= 1");
          for (const PolyTerm& t : n.terms) {
            require(static_cast<int>(t.exps.size()) == n.nvars,
                    "poly: exponent index length must equal nvars");
            require(finite(t.coef), "poly: coefficient must be finite");
            for (int e : t.exps) require(e >= 0, "poly: exponents must be >= 0");
          }
          return n.nvars;
        } else if constexpr (std::is_same_v<T, ExpPolyNode>) {
          require(n.nvars >= 1, "exppoly: nvars must be >= 1");
          for (const ExpPolyTerm& t : n.terms) {
            require(static_cast<int>(t.lin.size()) == n.nvars,
                    "exppoly: linear functional length must equal nvars");
            for (const Complex& c : t.lin)
              require(finite(c), "exppoly: functional coefficients must be finite");
            for (const PolyTerm& pt : t.poly) {
              require(static_cast<int>(pt.exps.size()) == n.nvars,
                      "exppoly: exponent index length must equal nvars");
              require(finite(pt.coef), "exppoly: coefficient must be finite");
              for (int e : pt.exps) require(e >= 0, "exppoly: exponents must be >= 0");
            }
          }
          return n.nvars;
        } else if constexpr (std::is_same_v<T, ExpOfNode>) {
          require(n.inner != nullptr, "expof: missing inner expression");
          return n.inner->arity();
        } else if constexpr (std::is_same_v<T, SumNode> ||
                             std::is_same_v<T, ProductNode>) {
          require(!n.parts.empty(), "sum/product: needs at least one part");
          int a = n.parts.front()->arity();
          for (const ExprPtr& p : n.parts)
            require(p && p->arity() == a, "sum/product: arity mismatch");
          return a;
        } else if constexpr (std::is_same_v<T, LineRestrictNode>) {
          require(n.base != nullptr, "line: missing base expression");
          require(static_cast<int>(n.dir.size()) == n.base->arity(),
                  "line: direction dimension must equal base arity");
          require(std::abs(norm2(n.dir) - 1.0) <= 1e-12,
                  "line: direction must have unit l2 norm");
          return 1;
        } else if constexpr (std::is_same_v<T, GraphRestrictNode>) {
          require(n.outer && n.inner, "graph: missing expression");
          require(n.outer->arity() == n.inner->arity() + 1,
                  "graph: outer arity must equal inner arity + 1");
          return n.inner->arity();
        } else if constexpr (std::is_same_v<T, ShiftNode>) {
          require(n.inner != nullptr, "shift: missing inner expression");
          require(static_cast<int>(n.arg_offset.size()) == n.inner->arity(),
                  "shift: offset dimension must equal arity");
          require(finite(n.val_offset), "shift: value offset must be finite");
          return n.inner->arity();
        } else {
          static_assert(std::is_same_v<T, ScaleNode>);
          require(n.inner != nullptr, "scale: missing inner expression");
          require(finite(n.arg_factor) && finite(n.val_factor),
                  "scale: factors must be finite");
          return n.inner->arity();
        }
      },
      node_);
}

// ---------------------------------------------------------------------------
// LogComplex

bool LogComplex::is_zero() const { return log_mag == kNegInf || phase == Complex(0.0, 0.0); }

Complex LogComplex::value() const {
  if (is_zero()) return {0.0, 0.0};
  return std::exp(log_mag) * phase;
}

LogComplex log_complex_of(Complex v) {
  double m = std::abs(v);
  if (m == 0.0) return {kNegInf, {0.0, 0.0}};
  return {std::log(m), v / m};
}

LogComplex log_sum(std::span<const LogComplex> items) {
  double lmax = kNegInf;
  for (const LogComplex& it : items)
    if (!it.is_zero()) lmax = std::max(lmax, it.log_mag);
  if (lmax == kNegInf) return {kNegInf, {0.0, 0.0}};
  Complex acc{0.0, 0.0};
  for (const LogComplex& it : items) {
    if (it.is_zero()) continue;
    acc += std::exp(it.log_mag - lmax) * it.phase;
  }
  double m = std::abs(acc);
  if (m == 0.0) return {kNegInf, {0.0, 0.0}};
  return {lmax + std::log(m), acc / m};
}

// ---------------------------------------------------------------------------
// Builders

ExprPtr make_expr(FuncExpr::Node node) {
  return std::make_shared<const FuncExpr>(std::move(node));
}

ExprPtr make_poly(int nvars, std::vector<PolyTerm> terms) {
  PolyNode p{nvars, std::move(terms)};
  poly_normalize(p);
  return make_expr(std::move(p));
}

ExprPtr poly_constant(int nvars, Complex c) {
  return make_poly(nvars, {PolyTerm{c, std::vector<int>(nvars, 0)}});
}

ExprPtr poly_monomial(int nvars, Complex c, std::vector<int> exps) {
  return make_poly(nvars, {PolyTerm{c, std::move(exps)}});
}

ExprPtr make_exppoly(int nvars, std::vector<ExpPolyTerm> terms) {
  return make_expr(ExpPolyNode{nvars, std::move(terms)});
}

ExprPtr exp_of(ExprPtr inner) { return make_expr(ExpOfNode{std::move(inner)}); }

ExprPtr sum_of(std::vector<ExprPtr> parts) {
  if (parts.size() > 1 &&
      std::all_of(parts.begin(), parts.end(),
                  [](const ExprPtr& p) { return p->get_if<PolyNode>(); })) {
    PolyNode acc = *parts.front()->get_if<PolyNode>();
    for (size_t i = 1; i < parts.size(); ++i)
      acc = poly_add(acc, *parts[i]->get_if<PolyNode>());
    return make_expr(std::move(acc));
  }
  if (parts.size() == 1) return parts.front();
  return make_expr(SumNode{std::move(parts)});
}

ExprPtr product_of(std::vector<ExprPtr> parts) {
  if (parts.size() > 1 &&
      std::all_of(parts.begin(), parts.end(),
                  [](const ExprPtr& p) { return p->get_if<PolyNode>(); })) {
    PolyNode acc = *parts.front()->get_if<PolyNode>();
    for (size_t i = 1; i < parts.size(); ++i)
      acc = poly_mul(acc, *parts[i]->get_if<PolyNode>());
    return make_expr(std::move(acc));
  }
  if (parts.size() == 1) return parts.front();
  return make_expr(ProductNode{std::move(parts)});
}

ExprPtr restrict_to_line(ExprPtr base, std::vector<Complex> dir) {
  require(base != nullptr, "line: missing base expression");
  require(static_cast<int>(dir.size()) == base->arity(),
          "line: direction dimension must equal base arity");
  require(std::abs(norm2(dir) - 1.0) <= 1e-12,
          "line: direction must have unit l2 norm");
  if (base->arity() == 1) {
    // The line through a single variable is the variable itself up to the
    // unit factor dir[0]; fold it into a Scale for non-poly bases.
    if (const auto* p = base->get_if<PolyNode>()) {
      PolyNode out{1, {}};
      for (const PolyTerm& t : p->terms)
        out.terms.push_back(
            PolyTerm{t.coef * std::pow(dir[0], t.exps[0]), t.exps});
      poly_normalize(out);
      return make_expr(std::move(out));
    }
    if (dir[0] == Complex(1.0, 0.0)) return base;
    return scaled(base, dir[0], {1.0, 0.0});
  }
  if (const auto* p = base->get_if<PolyNode>()) {
    // f(zeta*dir): the coefficient of zeta^k collects all terms with |alpha|=k.
    std::map<int, Complex> coef;
    for (const PolyTerm& t : p->terms) {
      Complex c = t.coef;
      int total = 0;
      for (int i = 0; i < p->nvars; ++i) {
        if (t.exps[i] > 0) c *= std::pow(dir[i], t.exps[i]);
        total += t.exps[i];
      }
      coef[total] += c;
    }
    PolyNode out{1, {}};
    for (const auto& [k, c] : coef) out.terms.push_back(PolyTerm{c, {k}});
    poly_normalize(out);
    return make_expr(std::move(out));
  }
  return make_expr(LineRestrictNode{std::move(base), std::move(dir)});
}

ExprPtr graph_restriction(ExprPtr outer, ExprPtr inner) {
  require(outer && inner, "graph: missing expression");
  require(outer->arity() == inner->arity() + 1,
          "graph: outer arity must equal inner arity + 1");
  const auto* g = outer->get_if<PolyNode>();
  const auto* f = inner->get_if<PolyNode>();
  if (g && f) {
    int n = f->nvars;
    int maxw = 0;
    for (const PolyTerm& t : g->terms) maxw = std::max(maxw, t.exps[n]);
    // precompute f^j
    std::vector<PolyNode> fpow(static_cast<size_t>(maxw) + 1);
    fpow[0] = PolyNode{n, {PolyTerm{{1.0, 0.0}, std::vector<int>(n, 0)}}};
    for (int j = 1; j <= maxw; ++j) fpow[j] = poly_mul(fpow[j - 1], *f);
    PolyNode out{n, {}};
    for (const PolyTerm& t : g->terms) {
      PolyNode mono{n, {PolyTerm{t.coef, std::vector<int>(t.exps.begin(),
                                                          t.exps.end() - 1)}}};
      PolyNode prod = poly_mul(mono, fpow[t.exps[n]]);
      out = poly_add(out, prod);
    }
    poly_normalize(out);
    return make_expr(std::move(out));
  }
  return make_expr(GraphRestrictNode{std::move(outer), std::move(inner)});
}

ExprPtr shifted(ExprPtr inner, std::vector<Complex> arg_offset,
                Complex val_offset) {
  return make_expr(
      ShiftNode{std::move(inner), std::move(arg_offset), val_offset});
}

ExprPtr scaled(ExprPtr inner, Complex arg_factor, Complex val_factor,
               double val_log_factor) {
  return make_expr(
      ScaleNode{std::move(inner), arg_factor, val_factor, val_log_factor});
}

// ---------------------------------------------------------------------------
// Polynomial algebra

void poly_normalize(PolyNode& p) {
  std::map<std::vector<int>, Complex> acc;
  for (const PolyTerm& t : p.terms) acc[t.exps] += t.coef;
  p.terms.clear();
  for (const auto& [e, c] : acc)
    if (c != Complex(0.0, 0.0)) p.terms.push_back(PolyTerm{c, e});
}

PolyNode poly_add(const PolyNode& a, const PolyNode& b) {
  require(a.nvars == b.nvars, "poly_add: arity mismatch");
  PolyNode out{a.nvars, a.terms};
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  poly_normalize(out);
  return out;
}

PolyNode poly_mul(const PolyNode& a, const PolyNode& b) {
  require(a.nvars == b.nvars, "poly_mul: arity mismatch");
  PolyNode out{a.nvars, {}};
  out.terms.reserve(a.terms.size() * b.terms.size());
  for (const PolyTerm& ta : a.terms)
    for (const PolyTerm& tb : b.terms) {
      PolyTerm t{ta.coef * tb.coef, ta.exps};
      for (int i = 0; i < a.nvars; ++i) t.exps[i] += tb.exps[i];
      out.terms.push_back(std::move(t));
    }
  poly_normalize(out);
  return out;
}

PolyNode poly_pow(const PolyNode& a, int k) {
  require(k >= 0, "poly_pow: negative exponent");
  PolyNode out{a.nvars, {PolyTerm{{1.0, 0.0}, std::vector<int>(a.nvars, 0)}}};
  PolyNode base = a;
  while (k > 0) {
    if (k & 1) out = poly_mul(out, base);
    k >>= 1;
    if (k) base = poly_mul(base, base);
  }
  return out;
}

PolyNode poly_partial(const PolyNode& p, int var) {
  require(var >= 0 && var < p.nvars, "poly_partial: bad variable index");
  PolyNode out{p.nvars, {}};
  for (const PolyTerm& t : p.terms) {
    if (t.exps[var] == 0) continue;
    PolyTerm d{t.coef * static_cast<double>(t.exps[var]), t.exps};
    d.exps[var] -= 1;
    out.terms.push_back(std::move(d));
  }
  poly_normalize(out);
  return out;
}

int poly_total_degree(const PolyNode& p) {
  int d = -1;
  for (const PolyTerm& t : p.terms) {
    int s = 0;
    for (int e : t.exps) s += e;
    d = std::max(d, s);
  }
  return d;
}

bool poly_is_zero(const PolyNode& p) { return p.terms.empty(); }

int poly_homogeneous_degree(const PolyNode& p) {
  if (p.terms.empty()) return -1;
  int d = -1;
  for (const PolyTerm& t : p.terms) {
    int s = 0;
    for (int e : t.exps) s += e;
    if (d < 0) d = s;
    if (s != d) return -1;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Plain evaluation (templated over scalar type)

namespace {

template <class T>
std::complex<T> eval_rec(const FuncExpr& f,
                         std::span<const std::complex<T>> z) {
  using C = std::complex<T>;
  require(static_cast<int>(z.size()) == f.arity(),
          "eval: point dimension must equal expression arity");
  return std::visit(
      [&](const auto& n) -> C {
        using Kind = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<Kind, PolyNode>) {
          C acc{0, 0};
          for (const PolyTerm& t : n.terms) {
            C v{static_cast<T>(t.coef.real()), static_cast<T>(t.coef.imag())};
            for (int i = 0; i < n.nvars; ++i)
              for (int e = 0; e < t.exps[i]; ++e) v *= z[i];
            acc += v;
          }
          return acc;
        } else if constexpr (std::is_same_v<Kind, ExpPolyNode>) {
          C acc{0, 0};
          for (const ExpPolyTerm& t : n.terms) {
            C pv{0, 0};
            for (const PolyTerm& pt : t.poly) {
              C v{static_cast<T>(pt.coef.real()),
                  static_cast<T>(pt.coef.imag())};
              for (int i = 0; i < n.nvars; ++i)
                for (int e = 0; e < pt.exps[i]; ++e) v *= z[i];
              pv += v;
            }
            C lin{0, 0};
            for (int i = 0; i < n.nvars; ++i)
              lin += C{static_cast<T>(t.lin[i].real()),
                       static_cast<T>(t.lin[i].imag())} *
                     z[i];
            acc += pv * std::exp(lin);
          }
          return acc;
        } else if constexpr (std::is_same_v<Kind, ExpOfNode>) {
          return std::exp(eval_rec<T>(*n.inner, z));
        } else if constexpr (std::is_same_v<Kind, SumNode>) {
          C acc{0, 0};
          for (const ExprPtr& p : n.parts) acc += eval_rec<T>(*p, z);
          return acc;
        } else if constexpr (std::is_same_v<Kind, ProductNode>) {
          C acc{1, 0};
          for (const ExprPtr& p : n.parts) acc *= eval_rec<T>(*p, z);
          return acc;
        } else if constexpr (std::is_same_v<Kind, LineRestrictNode>) {
          std::vector<C> w(n.dir.size());
          for (size_t i = 0; i < n.dir.size(); ++i)
            w[i] = z[0] * C{static_cast<T>(n.dir[i].real()),
                            static_cast<T>(n.dir[i].imag())};
          return eval_rec<T>(*n.base, std::span<const C>(w));
        } else if constexpr (std::is_same_v<Kind, GraphRestrictNode>) {
          C w = eval_rec<T>(*n.inner, z);
          std::vector<C> zz(z.begin(), z.end());
          zz.push_back(w);
          return eval_rec<T>(*n.outer, std::span<const C>(zz));
        } else if constexpr (std::is_same_v<Kind, ShiftNode>) {
          std::vector<C> zz(z.begin(), z.end());
          for (size_t i = 0; i < zz.size(); ++i)
            zz[i] += C{static_cast<T>(n.arg_offset[i].real()),
                       static_cast<T>(n.arg_offset[i].imag())};
          return eval_rec<T>(*n.inner, std::span<const C>(zz)) +
                 C{static_cast<T>(n.val_offset.real()),
                   static_cast<T>(n.val_offset.imag())};
        } else {
          static_assert(std::is_same_v<Kind, ScaleNode>);
          std::vector<C> zz(z.begin(), z.end());
          for (C& v : zz)
            v *= C{static_cast<T>(n.arg_factor.real()),
                   static_cast<T>(n.arg_factor.imag())};
          C v = eval_rec<T>(*n.inner, std::span<const C>(zz));
          v *= C{static_cast<T>(n.val_factor.real()),
                 static_cast<T>(n.val_factor.imag())};
          if (n.val_log_factor != 0.0) v *= std::exp(static_cast<T>(n.val_log_factor));
          return v;
        }
      },
      f.node());
}

}  // namespace

Complex eval(const FuncExpr& f, std::span<const Complex> z) {
  Complex v = eval_rec<double>(f, z);
  if (!finite(v)) throw EvalOverflow();
  return v;
}

Complex eval(const FuncExpr& f, const Point& z) {
  return eval(f, std::span<const Complex>(z));
}

std::complex<long double> eval_ld(
    const FuncExpr& f, std::span<const std::complex<long double>> z) {
  return eval_rec<long double>(f, z);
}

// ---------------------------------------------------------------------------
// Log-domain evaluation

namespace {

LogComplex eval_log_rec(const FuncExpr& f, std::span<const Complex> z);

LogComplex eval_log_poly_terms(const std::vector<PolyTerm>& terms,
                               std::span<const Complex> z) {
  std::vector<LogComplex> items;
  items.reserve(terms.size());
  for (const PolyTerm& t : terms) {
    if (t.coef == Complex(0.0, 0.0)) continue;
    double lm = std::log(std::abs(t.coef));
    Complex ph = t.coef / std::abs(t.coef);
    bool zero = false;
    for (size_t i = 0; i < t.exps.size(); ++i) {
      int e = t.exps[i];
      if (e == 0) continue;
      double m = std::abs(z[i]);
      if (m == 0.0) {
        zero = true;
        break;
      }
      lm += e * std::log(m);
      ph *= std::polar(1.0, e * std::arg(z[i]));
    }
    if (!zero) items.push_back(LogComplex{lm, ph});
  }
  return log_sum(items);
}

LogComplex eval_log_rec(const FuncExpr& f, std::span<const Complex> z) {
  require(static_cast<int>(z.size()) == f.arity(),
          "eval: point dimension must equal expression arity");
  return std::visit(
      [&](const auto& n) -> LogComplex {
        using Kind = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<Kind, PolyNode>) {
          return eval_log_poly_terms(n.terms, z);
        } else if constexpr (std::is_same_v<Kind, ExpPolyNode>) {
          std::vector<LogComplex> items;
          items.reserve(n.terms.size());
          for (const ExpPolyTerm& t : n.terms) {
            LogComplex pv = eval_log_poly_terms(t.poly, z);
            if (pv.is_zero()) continue;
            Complex lin{0.0, 0.0};
            for (int i = 0; i < n.nvars; ++i) lin += t.lin[i] * z[i];
            pv.log_mag += lin.real();
            pv.phase *= std::polar(1.0, lin.imag());
            items.push_back(pv);
          }
          return log_sum(items);
        } else if constexpr (std::is_same_v<Kind, ExpOfNode>) {
          LogComplex li = eval_log_rec(*n.inner, z);
          Complex v = li.value();  // exp saturates to +-inf honestly
          return {v.real(), std::polar(1.0, std::isfinite(v.imag())
                                                ? v.imag()
                                                : 0.0)};
        } else if constexpr (std::is_same_v<Kind, SumNode>) {
          std::vector<LogComplex> items;
          items.reserve(n.parts.size());
          for (const ExprPtr& p : n.parts) items.push_back(eval_log_rec(*p, z));
          return log_sum(items);
        } else if constexpr (std::is_same_v<Kind, ProductNode>) {
          LogComplex acc{0.0, {1.0, 0.0}};
          for (const ExprPtr& p : n.parts) {
            LogComplex v = eval_log_rec(*p, z);
            if (v.is_zero()) return {kNegInf, {0.0, 0.0}};
            acc.log_mag += v.log_mag;
            acc.phase *= v.phase;
          }
          return acc;
        } else if constexpr (std::is_same_v<Kind, LineRestrictNode>) {
          Point w(n.dir.size());
          for (size_t i = 0; i < n.dir.size(); ++i) w[i] = z[0] * n.dir[i];
          return eval_log_rec(*n.base, w);
        } else if constexpr (std::is_same_v<Kind, GraphRestrictNode>) {
          LogComplex wl = eval_log_rec(*n.inner, z);
          Complex w = wl.value();
          if (!wl.is_zero() && !finite(w)) throw EvalOverflow();
          Point zz(z.begin(), z.end());
          zz.push_back(w);
          return eval_log_rec(*n.outer, zz);
        } else if constexpr (std::is_same_v<Kind, ShiftNode>) {
          Point zz(z.begin(), z.end());
          for (size_t i = 0; i < zz.size(); ++i) zz[i] += n.arg_offset[i];
          LogComplex v = eval_log_rec(*n.inner, zz);
          if (n.val_offset == Complex(0.0, 0.0)) return v;
          LogComplex items[2] = {v, log_complex_of(n.val_offset)};
          return log_sum(items);
        } else {
          static_assert(std::is_same_v<Kind, ScaleNode>);
          Point zz(z.begin(), z.end());
          for (Complex& v : zz) v *= n.arg_factor;
          LogComplex v = eval_log_rec(*n.inner, zz);
          if (v.is_zero()) return v;
          if (n.val_factor == Complex(0.0, 0.0)) return {kNegInf, {0.0, 0.0}};
          double m = std::abs(n.val_factor);
          v.log_mag += std::log(m) + n.val_log_factor;
          v.phase *= n.val_factor / m;
          return v;
        }
      },
      f.node());
}

}  // namespace

LogComplex eval_log(const FuncExpr& f, std::span<const Complex> z) {
  return eval_log_rec(f, z);
}

LogComplex eval_log(const FuncExpr& f, const Point& z) {
  return eval_log_rec(f, std::span<const Complex>(z));
}

double log_abs(const FuncExpr& f, const Point& z) {
  return eval_log(f, z).log_mag;
}

// ---------------------------------------------------------------------------
// Derivatives

bool has_symbolic_derivative(const FuncExpr& f) {
  return f.get_if<PolyNode>() != nullptr || f.get_if<ExpPolyNode>() != nullptr;
}

ExprPtr partial_derivative(const ExprPtr& f, int var) {
  if (const auto* p = f->get_if<PolyNode>())
    return make_expr(poly_partial(*p, var));
  if (const auto* ep = f->get_if<ExpPolyNode>()) {
    // d/dz_i (p e^{<l,z>}) = (dp/dz_i + l_i p) e^{<l,z>}
    ExpPolyNode out{ep->nvars, {}};
    for (const ExpPolyTerm& t : ep->terms) {
      PolyNode p{ep->nvars, t.poly};
      PolyNode dp = poly_partial(p, var);
      PolyNode lp{ep->nvars, {}};
      if (t.lin[var] != Complex(0.0, 0.0)) {
        for (const PolyTerm& pt : p.terms)
          lp.terms.push_back(PolyTerm{pt.coef * t.lin[var], pt.exps});
      }
      PolyNode comb = poly_add(dp, lp);
      if (!comb.terms.empty())
        out.terms.push_back(ExpPolyTerm{comb.terms, t.lin});
    }
    return make_expr(std::move(out));
  }
  throw std::invalid_argument(
      "partial_derivative: symbolic differentiation covers Poly/ExpPoly only");
}

Complex directional_derivative_quadrature(const FuncExpr& f,
                                          std::span<const Complex> z,
                                          std::span<const Complex> v,
                                          double tol) {
  // D_v f(z) = (1/2 pi i) \oint f(z + w v) / w^2 dw on a small circle.
  double zn = 0.0;
  for (const Complex& c : z) zn += std::norm(c);
  double rc = std::min(0.1, 0.01 * (1.0 + std::sqrt(zn)));
  Point zz(z.begin(), z.end());
  Complex prev{0.0, 0.0};
  bool have_prev = false;
  for (int m = 64; m <= 4096; m *= 2) {
    Complex acc{0.0, 0.0};
    for (int k = 0; k < m; ++k) {
      double th = 2.0 * std::numbers::pi * k / m;
      Complex w = std::polar(rc, th);
      for (size_t i = 0; i < zz.size(); ++i) zz[i] = z[i] + w * v[i];
      acc += eval(f, std::span<const Complex>(zz)) * std::polar(1.0, -th);
    }
    Complex est = acc / (static_cast<double>(m) * rc);
    if (have_prev && std::abs(est - prev) <= tol * (1.0 + std::abs(est)))
      return est;
    prev = est;
    have_prev = true;
  }
  return prev;
}

Complex directional_derivative(const FuncExpr& f, std::span<const Complex> z,
                               std::span<const Complex> v) {
  require(z.size() == v.size() && static_cast<int>(z.size()) == f.arity(),
          "directional_derivative: arity mismatch");
  if (has_symbolic_derivative(f)) {
    Complex acc{0.0, 0.0};
    // f is stored behind shared_ptr by all builders; rebuild a cheap alias.
    ExprPtr alias = make_expr(f.node());
    for (int i = 0; i < f.arity(); ++i) {
      if (v[i] == Complex(0.0, 0.0)) continue;
      ExprPtr di = partial_derivative(alias, i);
      acc += v[i] * eval(*di, z);
    }
    return acc;
  }
  return directional_derivative_quadrature(f, z, v);
}

Complex directional_derivative(const FuncExpr& f, const Point& z,
                               const Point& v) {
  return directional_derivative(f, std::span<const Complex>(z),
                                std::span<const Complex>(v));
}

std::vector<Complex> gradient_value(const FuncExpr& f,
                                    std::span<const Complex> z) {
  require(static_cast<int>(z.size()) == f.arity(),
          "gradient_value: arity mismatch");
  using Grad = std::vector<Complex>;
  return std::visit(
      [&](const auto& n) -> Grad {
        using Kind = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<Kind, PolyNode> ||
                      std::is_same_v<Kind, ExpPolyNode>) {
          ExprPtr alias = make_expr(f.node());
          Grad g(f.arity());
          for (int i = 0; i < f.arity(); ++i)
            g[i] = eval(*partial_derivative(alias, i), z);
          return g;
        } else if constexpr (std::is_same_v<Kind, ExpOfNode>) {
          Grad g = gradient_value(*n.inner, z);
          Complex e = std::exp(eval_rec<double>(*n.inner, z));
          for (Complex& c : g) c *= e;
          return g;
        } else if constexpr (std::is_same_v<Kind, SumNode>) {
          Grad g(f.arity(), Complex{0.0, 0.0});
          for (const ExprPtr& p : n.parts) {
            Grad gp = gradient_value(*p, z);
            for (int i = 0; i < f.arity(); ++i) g[i] += gp[i];
          }
          return g;
        } else if constexpr (std::is_same_v<Kind, ProductNode>) {
          // product rule: sum over parts of (d part) * (others)
          std::vector<Complex> vals(n.parts.size());
          for (size_t j = 0; j < n.parts.size(); ++j)
            vals[j] = eval_rec<double>(*n.parts[j], z);
          Grad g(f.arity(), Complex{0.0, 0.0});
          for (size_t j = 0; j < n.parts.size(); ++j) {
            Grad gj = gradient_value(*n.parts[j], z);
            Complex rest{1.0, 0.0};
            for (size_t k2 = 0; k2 < n.parts.size(); ++k2)
              if (k2 != j) rest *= vals[k2];
            for (int i = 0; i < f.arity(); ++i) g[i] += gj[i] * rest;
          }
          return g;
        } else if constexpr (std::is_same_v<Kind, LineRestrictNode>) {
          Point w(n.dir.size());
          for (size_t i = 0; i < n.dir.size(); ++i) w[i] = z[0] * n.dir[i];
          Grad gb = gradient_value(*n.base, w);
          Complex acc{0.0, 0.0};
          for (size_t i = 0; i < n.dir.size(); ++i) acc += gb[i] * n.dir[i];
          return {acc};
        } else if constexpr (std::is_same_v<Kind, GraphRestrictNode>) {
          Complex w = eval_rec<double>(*n.inner, z);
          Point zz(z.begin(), z.end());
          zz.push_back(w);
          Grad gout = gradient_value(*n.outer, zz);
          Grad gin = gradient_value(*n.inner, z);
          Grad g(f.arity());
          for (int i = 0; i < f.arity(); ++i)
            g[i] = gout[i] + gout[f.arity()] * gin[i];
          return g;
        } else if constexpr (std::is_same_v<Kind, ShiftNode>) {
          Point zz(z.begin(), z.end());
          for (size_t i = 0; i < zz.size(); ++i) zz[i] += n.arg_offset[i];
          return gradient_value(*n.inner, zz);
        } else {
          static_assert(std::is_same_v<Kind, ScaleNode>);
          Point zz(z.begin(), z.end());
          for (Complex& c : zz) c *= n.arg_factor;
          Grad g = gradient_value(*n.inner, zz);
          Complex fac = n.arg_factor * n.val_factor;
          double extra = n.val_log_factor != 0.0 ? std::exp(n.val_log_factor) : 1.0;
          for (Complex& c : g) c *= fac * extra;
          return g;
        }
      },
      f.node());
}

ExprPtr derivative_expr(const ExprPtr& f, int var) {
  require(var >= 0 && var < f->arity(), "derivative_expr: bad variable index");
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using Kind = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<Kind, PolyNode> ||
                      std::is_same_v<Kind, ExpPolyNode>) {
          return partial_derivative(f, var);
        } else if constexpr (std::is_same_v<Kind, ExpOfNode>) {
          return product_of({f, derivative_expr(n.inner, var)});
        } else if constexpr (std::is_same_v<Kind, SumNode>) {
          std::vector<ExprPtr> parts;
          for (const ExprPtr& p : n.parts) parts.push_back(derivative_expr(p, var));
          return sum_of(std::move(parts));
        } else if constexpr (std::is_same_v<Kind, ProductNode>) {
          std::vector<ExprPtr> terms;
          for (size_t j = 0; j < n.parts.size(); ++j) {
            std::vector<ExprPtr> factors;
            for (size_t k = 0; k < n.parts.size(); ++k)
              factors.push_back(k == j ? derivative_expr(n.parts[j], var)
                                       : n.parts[k]);
            terms.push_back(product_of(std::move(factors)));
          }
          return sum_of(std::move(terms));
        } else if constexpr (std::is_same_v<Kind, LineRestrictNode>) {
          // d/dzeta base(zeta v) = sum_i v_i (d_i base)(zeta v)
          std::vector<ExprPtr> terms;
          for (size_t i = 0; i < n.dir.size(); ++i) {
            if (n.dir[i] == Complex(0.0, 0.0)) continue;
            ExprPtr di = derivative_expr(n.base, static_cast<int>(i));
            ExprPtr restricted =
                make_expr(LineRestrictNode{std::move(di), n.dir});
            terms.push_back(scaled(restricted, {1.0, 0.0}, n.dir[i]));
          }
          if (terms.empty()) return make_poly(1, {});
          return sum_of(std::move(terms));
        } else if constexpr (std::is_same_v<Kind, GraphRestrictNode>) {
          int m = n.inner->arity();
          ExprPtr dz = graph_restriction(derivative_expr(n.outer, var), n.inner);
          ExprPtr dw = graph_restriction(derivative_expr(n.outer, m), n.inner);
          ExprPtr df = derivative_expr(n.inner, var);
          return sum_of({dz, product_of({dw, df})});
        } else if constexpr (std::is_same_v<Kind, ShiftNode>) {
          return make_expr(
              ShiftNode{derivative_expr(n.inner, var), n.arg_offset, {0.0, 0.0}});
        } else {
          static_assert(std::is_same_v<Kind, ScaleNode>);
          ExprPtr di = derivative_expr(n.inner, var);
          return make_expr(ScaleNode{std::move(di), n.arg_factor,
                                     n.val_factor * n.arg_factor,
                                     n.val_log_factor});
        }
      },
      f->node());
}

// ---------------------------------------------------------------------------
// Structure queries

bool is_structurally_zero(const FuncExpr& f) {
  return std::visit(
      [](const auto& n) -> bool {
        using Kind = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<Kind, PolyNode>) {
          for (const PolyTerm& t : n.terms)
            if (t.coef != Complex(0.0, 0.0)) return false;
          return true;
        } else if constexpr (std::is_same_v<Kind, ExpPolyNode>) {
          for (const ExpPolyTerm& t : n.terms)
            for (const PolyTerm& pt : t.poly)
              if (pt.coef != Complex(0.0, 0.0)) return false;
          return true;
        } else if constexpr (std::is_same_v<Kind, ExpOfNode>) {
          return false;
        } else if constexpr (std::is_same_v<Kind, SumNode>) {
          for (const ExprPtr& p : n.parts)
            if (!is_structurally_zero(*p)) return false;
          return true;
        } else if constexpr (std::is_same_v<Kind, ProductNode>) {
          for (const ExprPtr& p : n.parts)
            if (is_structurally_zero(*p)) return true;
          return false;
        } else if constexpr (std::is_same_v<Kind, LineRestrictNode>) {
          return is_structurally_zero(*n.base);
        } else if constexpr (std::is_same_v<Kind, GraphRestrictNode>) {
          return is_structurally_zero(*n.outer);
        } else if constexpr (std::is_same_v<Kind, ShiftNode>) {
          return n.val_offset == Complex(0.0, 0.0) &&
                 is_structurally_zero(*n.inner);
        } else {
          static_assert(std::is_same_v<Kind, ScaleNode>);
          return n.val_factor == Complex(0.0, 0.0) ||
                 is_structurally_zero(*n.inner);
        }
      },
      f.node());
}

namespace {

// Fixed deterministic probe directions (angles chosen once, not tuned).
Point probe_point(int arity, int index, double radius) {
  Point z(arity);
  for (int i = 0; i < arity; ++i) {
    double a = 2.399963229728653 * (index + 1) * (i + 1);  // golden angle
    double r = radius * (0.35 + 0.6 * std::fmod(0.618033988749895 * (index + 1 + i), 1.0));
    z[i] = std::polar(r, a);
  }
  return z;
}

}  // namespace

bool is_identically_zero(const FuncExpr& f, double probe_radius) {
  if (is_structurally_zero(f)) return true;
  for (int k = 0; k < 16; ++k) {
    LogComplex v = eval_log(f, probe_point(f.arity(), k, probe_radius));
    if (!v.is_zero() && v.log_mag > -600.0) return false;
  }
  return true;
}

bool is_constant_probe(const FuncExpr& f, double probe_radius) {
  if (const auto* p = f.get_if<PolyNode>()) return poly_total_degree(*p) <= 0;
  Point origin(f.arity(), Complex{0.0, 0.0});
  Complex v0;
  try {
    v0 = eval(f, origin);
  } catch (const EvalOverflow&) {
    return false;
  }
  for (int k = 0; k < 16; ++k) {
    try {
      Complex v = eval(f, probe_point(f.arity(), k, probe_radius));
      if (std::abs(v - v0) > 1e-12 * (1.0 + std::abs(v0))) return false;
    } catch (const EvalOverflow&) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

using nlohmann::json;

json complex_to_json(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

Complex complex_from_json(const json& j) {
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

json terms_to_json(const std::vector<PolyTerm>& terms) {
  json arr = json::array();
  for (const PolyTerm& t : terms) {
    json jt{{"re", t.coef.real()}, {"im", t.coef.imag()}, {"exps", t.exps}};
    arr.push_back(std::move(jt));
  }
  return arr;
}

std::vector<PolyTerm> terms_from_json(const json& arr) {
  std::vector<PolyTerm> terms;
  for (const json& jt : arr) {
    PolyTerm t;
    t.coef = {jt.at("re").get<double>(), jt.at("im").get<double>()};
    t.exps = jt.at("exps").get<std::vector<int>>();
    terms.push_back(std::move(t));
  }
  return terms;
}

json complex_list_to_json(const std::vector<Complex>& v) {
  json arr = json::array();
  for (const Complex& c : v) arr.push_back(complex_to_json(c));
  return arr;
}

std::vector<Complex> complex_list_from_json(const json& arr) {
  std::vector<Complex> v;
  for (const json& jc : arr) v.push_back(complex_from_json(jc));
  return v;
}

}  // namespace

nlohmann::json expr_to_json(const FuncExpr& f) {
  return std::visit(
      [&](const auto& n) -> json {
        using Kind = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<Kind, PolyNode>) {
          return json{{"type", "poly"},
                      {"nvars", n.nvars},
                      {"terms", terms_to_json(n.terms)}};
        } else if constexpr (std::is_same_v<Kind, ExpPolyNode>) {
          json terms = json::array();
          for (const ExpPolyTerm& t : n.terms)
            terms.push_back(json{{"poly", terms_to_json(t.poly)},
                                 {"lin", complex_list_to_json(t.lin)}});
          return json{{"type", "exppoly"}, {"nvars", n.nvars}, {"terms", terms}};
        } else if constexpr (std::is_same_v<Kind, ExpOfNode>) {
          return json{{"type", "expof"}, {"inner", expr_to_json(*n.inner)}};
        } else if constexpr (std::is_same_v<Kind, SumNode>) {
          json parts = json::array();
          for (const ExprPtr& p : n.parts) parts.push_back(expr_to_json(*p));
          return json{{"type", "sum"}, {"parts", parts}};
        } else if constexpr (std::is_same_v<Kind, ProductNode>) {
          json parts = json::array();
          for (const ExprPtr& p : n.parts) parts.push_back(expr_to_json(*p));
          return json{{"type", "product"}, {"parts", parts}};
        } else if constexpr (std::is_same_v<Kind, LineRestrictNode>) {
          return json{{"type", "line"},
                      {"base", expr_to_json(*n.base)},
                      {"dir", complex_list_to_json(n.dir)}};
        } else if constexpr (std::is_same_v<Kind, GraphRestrictNode>) {
          return json{{"type", "graph"},
                      {"g", expr_to_json(*n.outer)},
                      {"f", expr_to_json(*n.inner)}};
        } else if constexpr (std::is_same_v<Kind, ShiftNode>) {
          return json{{"type", "shift"},
                      {"inner", expr_to_json(*n.inner)},
                      {"arg", complex_list_to_json(n.arg_offset)},
                      {"val", complex_to_json(n.val_offset)}};
        } else {
          static_assert(std::is_same_v<Kind, ScaleNode>);
          return json{{"type", "scale"},
                      {"inner", expr_to_json(*n.inner)},
                      {"arg", complex_to_json(n.arg_factor)},
                      {"val", complex_to_json(n.val_factor)},
                      {"val_log", n.val_log_factor}};
        }
      },
      f.node());
}

ExprPtr expr_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "poly") {
    return make_expr(
        PolyNode{j.at("nvars").get<int>(), terms_from_json(j.at("terms"))});
  }
  if (type == "exppoly") {
    ExpPolyNode n{j.at("nvars").get<int>(), {}};
    for (const json& jt : j.at("terms"))
      n.terms.push_back(ExpPolyTerm{terms_from_json(jt.at("poly")),
                                    complex_list_from_json(jt.at("lin"))});
    return make_expr(std::move(n));
  }
  if (type == "expof") return exp_of(expr_from_json(j.at("inner")));
  if (type == "sum" || type == "product") {
    std::vector<ExprPtr> parts;
    for (const json& jp : j.at("parts")) parts.push_back(expr_from_json(jp));
    return make_expr(type == "sum" ? FuncExpr::Node{SumNode{std::move(parts)}}
                                   : FuncExpr::Node{ProductNode{std::move(parts)}});
  }
  if (type == "line")
    return make_expr(LineRestrictNode{expr_from_json(j.at("base")),
                                      complex_list_from_json(j.at("dir"))});
  if (type == "graph")
    return make_expr(GraphRestrictNode{expr_from_json(j.at("g")),
                                       expr_from_json(j.at("f"))});
  if (type == "shift")
    return make_expr(ShiftNode{expr_from_json(j.at("inner")),
                               complex_list_from_json(j.at("arg")),
                               complex_from_json(j.at("val"))});
  if (type == "scale")
    return make_expr(ScaleNode{expr_from_json(j.at("inner")),
                               complex_from_json(j.at("arg")),
                               complex_from_json(j.at("val")),
                               j.value("val_log", 0.0)});
  throw std::invalid_argument("unknown function type: " + type);
}

ExprPtr expr_from_json_string(const std::string& text) {
  return expr_from_json(nlohmann::json::parse(text));
}

std::string expr_to_json_string(const FuncExpr& f) {
  return expr_to_json(f).dump();
}

}  // namespace holocert
