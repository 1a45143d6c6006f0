#pragma once

// Deterministic low-discrepancy point generators used by boundary searches
// and budgeted parameter sweeps. Everything is a pure function of
// (index, seed), so sweeps are reproducible and order-independent.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "holocert/function.hpp"

namespace holocert {

inline double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

inline std::uint64_t nth_prime(int k) {
  static constexpr std::uint64_t primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                             23, 29, 31, 37, 41, 43, 47, 53};
  return primes[k % 16];
}

// Inverse-CDF map from (0,1) to a standard normal (Acklam's rational fit;
// relative error ~1e-9, ample for sampling).
double normal_quantile(double p);

// Unit vector on the complex sphere in C^n, deterministic in (index, seed).
std::vector<Complex> sphere_point(int n, std::uint64_t index,
                                  std::uint64_t seed = 0);

// Point in the closed polydisk/ball-ish box used for interior sweeps.
std::vector<Complex> ball_point(int n, double radius, std::uint64_t index,
                                std::uint64_t seed = 0);

inline Complex circle_point(Complex center, double radius, double theta) {
  return center + std::polar(radius, theta);
}

}  // namespace holocert
