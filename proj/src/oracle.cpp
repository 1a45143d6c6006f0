#include "holocert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "holocert/sampling.hpp"

namespace holocert {
namespace oracle {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double grid_max(const FuncExpr& f, const Point& center, double radius,
                long density) {
  if (density < 1) throw std::invalid_argument("grid_max: density >= 1");
  const int n = f.arity();
  double best = -std::numeric_limits<double>::infinity();
  if (n == 1) {
    for (long k = 0; k < density; ++k) {
      Point z{circle_point(center[0], radius, kTwoPi * k / density)};
      best = std::max(best, eval_log(f, z).log_mag);
    }
    return best;
  }
  for (long k = 0; k < density; ++k) {
    std::vector<Complex> u = sphere_point(n, static_cast<std::uint64_t>(k), 99);
    Point z(n);
    for (int i = 0; i < n; ++i) z[i] = center[i] + radius * u[i];
    best = std::max(best, eval_log(f, z).log_mag);
  }
  return best;
}

double grid_circle_min(const FuncExpr& f, Complex center, double radius,
                       long density) {
  double best = std::numeric_limits<double>::infinity();
  for (long k = 0; k < density; ++k) {
    Point z{circle_point(center, radius, kTwoPi * k / density)};
    best = std::min(best, eval_log(f, z).log_mag);
  }
  return best;
}

std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs) {
  // strip leading zeros
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && coeffs[deg] == Complex(0.0, 0.0)) --deg;
  if (deg < 1) throw std::invalid_argument("poly_roots: degree must be >= 1");
  Complex lead = coeffs[deg];

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / lead;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("poly_roots: eigenvalue iteration failed");

  auto p = [&](Complex z) {
    Complex v{0.0, 0.0};
    for (int k = deg; k >= 0; --k) v = v * z + coeffs[k];
    return v;
  };
  auto dp = [&](Complex z) {
    Complex v{0.0, 0.0};
    for (int k = deg; k >= 1; --k) v = v * z + coeffs[k] * static_cast<double>(k);
    return v;
  };

  double cnorm = 0.0;
  for (const Complex& c : coeffs) cnorm += std::norm(c);
  cnorm = std::sqrt(cnorm);

  std::vector<Complex> roots;
  roots.reserve(deg);
  for (int i = 0; i < deg; ++i) {
    Complex z = solver.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      Complex d = dp(z);
      if (d == Complex(0.0, 0.0)) break;
      Complex step = p(z) / d;
      if (!(std::isfinite(step.real()) && std::isfinite(step.imag()))) break;
      if (std::abs(step) > 0.5 * (1.0 + std::abs(z))) break;
      z -= step;
    }
    double scale = cnorm * std::max(1.0, std::pow(std::abs(z), deg));
    if (std::abs(p(z)) > 1e-8 * scale)
      throw std::runtime_error("poly_roots: residual above tolerance");
    roots.push_back(z);
  }
  std::stable_sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

int roots_inside(const std::vector<Complex>& roots, Complex center,
                 double radius) {
  int n = 0;
  for (const Complex& r : roots)
    if (std::abs(r - center) < radius) ++n;
  return n;
}

int winding_count(const FuncExpr& h, Complex center, double radius,
                  int initial_segments) {
  for (int segments = initial_segments; segments <= (1 << 22); segments *= 2) {
    double total = 0.0;
    bool ok = true;
    double prev_arg =
        std::arg(eval(h, Point{circle_point(center, radius, 0.0)}));
    for (int k = 1; k <= segments && ok; ++k) {
      double th = kTwoPi * k / segments;
      Complex v = eval(h, Point{circle_point(center, radius, th)});
      if (v == Complex(0.0, 0.0)) {
        ok = false;
        break;
      }
      double a = std::arg(v);
      double step = a - prev_arg;
      while (step > std::numbers::pi) step -= kTwoPi;
      while (step < -std::numbers::pi) step += kTwoPi;
      if (std::abs(step) >= std::numbers::pi / 2) {
        ok = false;
        break;
      }
      total += step;
      prev_arg = a;
    }
    if (ok) return static_cast<int>(std::lround(total / kTwoPi));
  }
  throw std::runtime_error(
      "winding_count: phase steps never fell below pi/2 (zero on contour?)");
}

}  // namespace oracle
}  // namespace holocert
