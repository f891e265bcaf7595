#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "znd/params.hpp"

namespace znd {

/// Seeded sampler of admissible parameter sets and half-plane frequencies.
/// Uniform deviates are built directly from the top 53 bits of the engine
/// output, so streams are identical across platforms and library versions.
class ParamSampler {
 public:
  explicit ParamSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) {
    const double x =
        static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
    return a + (b - a) * x;
  }

  DetonationParams draw() {
    const double u_plus = uniform(0.0, 1.5);
    const double u_star = u_plus + uniform(0.5, 2.5);
    const double q = uniform(0.05, 0.95) * q_max(u_plus, u_star);
    const double k = std::pow(10.0, uniform(-1.0, 1.0));
    const double s = 0.5 * (u_plus + u_star);
    const double u_minus =
        s + std::sqrt((s - u_plus) * (s - u_plus) - 2.0 * q * s);
    const double u_i = u_plus + uniform(0.1, 0.9) * (u_minus - u_plus);
    return build_params(u_plus, u_star, q, k, u_i);
  }

  /// Random frequency with Re >= 0, |lambda| <= radius.
  std::complex<double> draw_lambda(double radius) {
    while (true) {
      const double re = uniform(0.0, radius);
      const double im = uniform(-radius, radius);
      if (re * re + im * im <= radius * radius)
        return {re, im};
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace znd
