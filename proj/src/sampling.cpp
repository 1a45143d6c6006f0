#include "holocert/sampling.hpp"

#include <algorithm>

namespace holocert {

double normal_quantile(double p) {
  // Acklam's algorithm.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  p = std::clamp(p, 1e-15, 1.0 - 1e-15);
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    double q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

std::vector<Complex> sphere_point(int n, std::uint64_t index,
                                  std::uint64_t seed) {
  // Halton -> Gaussian per real coordinate, then normalize.
  std::uint64_t idx = index + 1 + 7919 * seed;
  std::vector<Complex> v(n);
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = normal_quantile(halton(idx, nth_prime(2 * i)));
    double y = normal_quantile(halton(idx, nth_prime(2 * i + 1)));
    v[i] = {x, y};
    norm += std::norm(v[i]);
  }
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    v.assign(n, Complex{0.0, 0.0});
    v[0] = {1.0, 0.0};
    return v;
  }
  for (Complex& c : v) c /= norm;
  // Exactly renormalize so downstream unit-norm checks at 1e-12 hold.
  double n2 = 0.0;
  for (const Complex& c : v) n2 += std::norm(c);
  double corr = std::sqrt(n2);
  for (Complex& c : v) c /= corr;
  return v;
}

std::vector<Complex> ball_point(int n, double radius, std::uint64_t index,
                                std::uint64_t seed) {
  std::vector<Complex> u = sphere_point(n, index, seed + 17);
  // Bias toward the boundary: radius factor u^{1/(4n)} keeps most samples
  // near the sphere where the maximum principle puts extrema.
  double t = halton(index + 1 + 7919 * seed, 13);
  double r = radius * std::pow(0.02 + 0.98 * t, 1.0 / (4.0 * n));
  for (Complex& c : u) c *= r;
  return u;
}

}  // namespace holocert
