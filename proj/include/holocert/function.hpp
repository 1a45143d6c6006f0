#pragma once

// Symbolic model of entire functions on C^n: a closed expression tree built
// from polynomials, exponential polynomials, exp-compositions, sums, products,
// line restrictions, graph restrictions and affine changes of variable/value.
// Every other component of the library consumes this representation.
//
// Evaluation comes in two flavors:
//   * eval()      - plain complex arithmetic, throws EvalOverflow when an
//                   intermediate leaves double range;
//   * eval_log()  - overflow-guarded log-magnitude/phase arithmetic, the
//                   path all modulus computations use.

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace holocert {

using Complex = std::complex<double>;
using Point = std::vector<Complex>;

class FuncExpr;
using ExprPtr = std::shared_ptr<const FuncExpr>;

// ---------------------------------------------------------------------------
// Node payloads

struct PolyTerm {
  Complex coef;
  std::vector<int> exps;  // one exponent per variable, all >= 0
};

struct PolyNode {
  int nvars = 1;
  std::vector<PolyTerm> terms;
};

// sum_j p_j(z) * exp(<lin_j, z>)
struct ExpPolyTerm {
  std::vector<PolyTerm> poly;
  std::vector<Complex> lin;
};

struct ExpPolyNode {
  int nvars = 1;
  std::vector<ExpPolyTerm> terms;
};

struct ExpOfNode {
  ExprPtr inner;
};

struct SumNode {
  std::vector<ExprPtr> parts;
};

struct ProductNode {
  std::vector<ExprPtr> parts;
};

// zeta |-> base(zeta * dir), univariate; dir has unit l2 norm
struct LineRestrictNode {
  ExprPtr base;
  std::vector<Complex> dir;
};

// z |-> outer(z, inner(z)); arity(outer) == arity(inner) + 1
struct GraphRestrictNode {
  ExprPtr outer;
  ExprPtr inner;
};

// z |-> inner(z + arg_offset) + val_offset
struct ShiftNode {
  ExprPtr inner;
  std::vector<Complex> arg_offset;
  Complex val_offset{0.0, 0.0};
};

// z |-> val_factor * exp(val_log_factor) * inner(arg_factor * z)
struct ScaleNode {
  ExprPtr inner;
  Complex arg_factor{1.0, 0.0};
  Complex val_factor{1.0, 0.0};
  double val_log_factor = 0.0;
};

// ---------------------------------------------------------------------------

class EvalOverflow : public std::runtime_error {
public:
  EvalOverflow()
      : std::runtime_error(
            "non-finite intermediate value; use the log-evaluation path") {}
};

class FuncExpr {
public:
  using Node = std::variant<PolyNode, ExpPolyNode, ExpOfNode, SumNode,
                            ProductNode, LineRestrictNode, GraphRestrictNode,
                            ShiftNode, ScaleNode>;

  explicit FuncExpr(Node node);

  int arity() const { return arity_; }
  const Node& node() const { return node_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&node_);
  }

private:
  Node node_;
  int arity_;
};

// Value carried as exp(log_mag) * phase with |phase| == 1 (phase == 0 for the
// zero value). Keeps quantities like 9^(d^2) finite for any desk-scale d.
struct LogComplex {
  double log_mag;
  Complex phase;

  bool is_zero() const;
  Complex value() const;  // may be non-finite when log_mag is large
};

LogComplex log_complex_of(Complex v);
LogComplex log_sum(std::span<const LogComplex> items);

// ---------------------------------------------------------------------------
// Builders (validate invariants, collapse polynomial fast paths)

ExprPtr make_expr(FuncExpr::Node node);
ExprPtr make_poly(int nvars, std::vector<PolyTerm> terms);
ExprPtr poly_constant(int nvars, Complex c);
ExprPtr poly_monomial(int nvars, Complex c, std::vector<int> exps);
ExprPtr make_exppoly(int nvars, std::vector<ExpPolyTerm> terms);
ExprPtr exp_of(ExprPtr inner);
ExprPtr sum_of(std::vector<ExprPtr> parts);
ExprPtr product_of(std::vector<ExprPtr> parts);
ExprPtr restrict_to_line(ExprPtr base, std::vector<Complex> dir);
ExprPtr graph_restriction(ExprPtr outer, ExprPtr inner);
ExprPtr shifted(ExprPtr inner, std::vector<Complex> arg_offset,
                Complex val_offset);
ExprPtr scaled(ExprPtr inner, Complex arg_factor, Complex val_factor,
               double val_log_factor = 0.0);

// ---------------------------------------------------------------------------
// Polynomial algebra on PolyNode

void poly_normalize(PolyNode& p);
PolyNode poly_add(const PolyNode& a, const PolyNode& b);
PolyNode poly_mul(const PolyNode& a, const PolyNode& b);
PolyNode poly_pow(const PolyNode& a, int k);
PolyNode poly_partial(const PolyNode& p, int var);
int poly_total_degree(const PolyNode& p);
bool poly_is_zero(const PolyNode& p);
// degree d with all terms of total degree exactly d; -1 otherwise
int poly_homogeneous_degree(const PolyNode& p);

// ---------------------------------------------------------------------------
// Evaluation

Complex eval(const FuncExpr& f, std::span<const Complex> z);
Complex eval(const FuncExpr& f, const Point& z);
std::complex<long double> eval_ld(const FuncExpr& f,
                                  std::span<const std::complex<long double>> z);
LogComplex eval_log(const FuncExpr& f, std::span<const Complex> z);
LogComplex eval_log(const FuncExpr& f, const Point& z);
double log_abs(const FuncExpr& f, const Point& z);

// ---------------------------------------------------------------------------
// Derivatives

bool has_symbolic_derivative(const FuncExpr& f);
// Exact partial derivative; available for Poly and ExpPoly nodes.
ExprPtr partial_derivative(const ExprPtr& f, int var);

// D_v f(z). Poly/ExpPoly go through the exact symbolic path; the remaining
// variants use Cauchy-integral quadrature on a small circle whose radius and
// node count adapt until two successive estimates agree to 1e-10.
Complex directional_derivative(const FuncExpr& f, std::span<const Complex> z,
                               std::span<const Complex> v);
Complex directional_derivative(const FuncExpr& f, const Point& z,
                               const Point& v);
// Quadrature route, exposed for cross-checks against the symbolic path.
Complex directional_derivative_quadrature(const FuncExpr& f,
                                          std::span<const Complex> z,
                                          std::span<const Complex> v,
                                          double tol = 1e-10);

// Pointwise gradient by recursive chain rule; exact for every variant.
// Internal machinery for the contour integrals (h'/h along circles).
std::vector<Complex> gradient_value(const FuncExpr& f,
                                    std::span<const Complex> z);

// Expression-level partial derivative, total over the closed variant set
// (products expand by the product rule, compositions by the chain rule).
ExprPtr derivative_expr(const ExprPtr& f, int var);

// ---------------------------------------------------------------------------
// Structure queries

bool is_structurally_zero(const FuncExpr& f);
// Structural check plus a 16-point probe on the polydisk of the given radius.
bool is_identically_zero(const FuncExpr& f, double probe_radius = 1.0);
bool is_constant_probe(const FuncExpr& f, double probe_radius = 1.0);

// ---------------------------------------------------------------------------
// Serialization; coefficients round-trip bit-exactly.

nlohmann::json expr_to_json(const FuncExpr& f);
ExprPtr expr_from_json(const nlohmann::json& j);
ExprPtr expr_from_json_string(const std::string& text);
std::string expr_to_json_string(const FuncExpr& f);

}  // namespace holocert
