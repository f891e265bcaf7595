#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "znd/errors.hpp"
#include "znd/lopatinski.hpp"
#include "znd/ode.hpp"
#include "znd/params.hpp"
#include "znd/profile.hpp"

namespace znd {

using Mat2 = std::array<std::array<Complex, 2>, 2>;

/// Coefficient matrix of Z' = G Z on the reaction zone,
/// G = [[-lambda/(u_bar - s), -qk/s], [0, (k+lambda)/s]].
inline Mat2 g_matrix(const DetonationParams& p, Complex lambda, double xi) {
  if (xi > 0.0) throw DomainError("g_matrix: xi must be <= 0");
  const double u = profile_smooth(p, xi).u_bar;
  return {{{-lambda / (u - p.s()), Complex(-p.q() * p.k() / p.s())},
           {Complex(0.0), (p.k() + lambda) / p.s()}}};
}

struct AsymptoticMode {
  Complex mu;                 // growth rate of the decaying solution
  std::array<Complex, 2> v;   // eigenvector of G at u_bar = u_-
};

/// Decaying-direction data at xi -> -infinity: mu = (k+lambda)/s and the
/// eigenvector of G_- with second component 1.
inline AsymptoticMode unstable_mode_at_minus_infinity(
    const DetonationParams& p, Complex lambda) {
  if (!(lambda.real() > -p.k()))
    throw DomainError(
        "unstable_mode_at_minus_infinity: requires Re(lambda) > -k");
  const Complex mu = (p.k() + lambda) / p.s();
  const Complex denom = mu + lambda / p.c_minus();
  if (std::abs(denom) < 1e-14 * (std::abs(mu) + std::abs(lambda) + 1.0))
    throw DegenerateError(
        "unstable_mode_at_minus_infinity: resonant asymptotic modes");
  return {mu, {-(p.q() * p.k() / p.s()) / denom, Complex(1.0)}};
}

struct EigenSystemEval {
  Complex lambda;
  double L = 0.0;
  std::array<Complex, 2> z_at_zero;
  Complex det_value;
  Complex normalization;
};

inline double default_shoot_length(const DetonationParams& p) {
  return 40.0 * p.s() / p.k();
}

/// Lopatinski determinant by shooting: integrate the polar-stripped system
/// Y' = (G - mu I) Y for Y = Z e^{-mu xi} from -L (seeded on the asymptotic
/// eigenvector), normalize Z2(0) = 1, and take det(Z(0), jump).  The strip
/// keeps |Y| O(1), so no overflow for any lambda in the domain.
inline EigenSystemEval det_ode_eval(const DetonationParams& p, Complex lambda,
                                    double L = 0.0, double rel_tol = 1e-10,
                                    Complex seed_scale = Complex(1.0)) {
  const AsymptoticMode mode = unstable_mode_at_minus_infinity(p, lambda);
  if (std::abs(seed_scale) == 0.0)
    throw DomainError("det_ode_eval: seed scale must be nonzero");
  if (L <= 0.0) L = default_shoot_length(p);

  // Seeding error decays like e^{-c_eff L}; extend L when Re(lambda) < 0
  // (small-circle indentation) thins the margin.
  const double c_eff =
      p.k() / p.s() +
      std::min(0.0, lambda.real()) * (1.0 / p.c_minus() + 1.0 / p.s());
  const double need = std::log(1.0 / rel_tol) + 5.0;
  if (c_eff * L < need) L = need / c_eff;

  auto rhs = [&](double xi, const std::vector<Complex>& y) {
    const Mat2 g = g_matrix(p, lambda, xi);
    return std::vector<Complex>{(g[0][0] - mode.mu) * y[0] + g[0][1] * y[1],
                                Complex(0.0)};
  };
  OdeOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-2 * rel_tol + 1e-14;
  auto res = integrate_ode(
      rhs,
      std::vector<Complex>{seed_scale * mode.v[0], seed_scale * mode.v[1]},
      -L, 0.0, opt);

  const Complex norm = res.final_state[1];  // Z2(0) before rescaling
  if (std::abs(norm) == 0.0)
    throw DegenerateError("det_ode_eval: vanishing normalization");
  const std::array<Complex, 2> z0 = {res.final_state[0] / norm,
                                     Complex(1.0)};
  const std::array<Complex, 2> j = jump_vector(p, lambda);
  const Complex det = z0[0] * j[1] - z0[1] * j[0];
  return {lambda, L, z0, det, norm};
}

inline Complex det_ode(const DetonationParams& p, Complex lambda,
                       double L = 0.0, double rel_tol = 1e-10) {
  return det_ode_eval(p, lambda, L, rel_tol).det_value;
}

struct DiscrepancyEntry {
  Complex lambda;
  Complex d_closed;
  Complex d_ode;
  double abs_err = 0.0;
  double rel_err = 0.0;
  bool failed = false;
  std::string what;
};

struct DiscrepancyTable {
  std::vector<DiscrepancyEntry> entries;
  double max_rel = 0.0;
  double median_rel = 0.0;
};

/// Per-lambda relative discrepancy |D_ode - D_closed| / max(|D_closed|,
/// floor); individual failures are recorded, not propagated.
inline DiscrepancyTable compare_methods(const DetonationParams& p,
                                        const std::vector<Complex>& grid,
                                        double L = 0.0,
                                        double rel_tol = 1e-10,
                                        double floor = 0.0) {
  // The floor keeps points where D nearly vanishes (the origin) from
  // reporting huge relative errors that are really absolute-scale noise.
  if (floor <= 0.0) floor = 0.01 * p.k() * (p.delta_u() + p.q());
  DiscrepancyTable table;
  table.entries.reserve(grid.size());
  std::vector<double> rels;
  for (const Complex lambda : grid) {
    DiscrepancyEntry e;
    e.lambda = lambda;
    try {
      e.d_closed = det_closed_form(p, lambda, rel_tol);
      e.d_ode = det_ode(p, lambda, L, rel_tol);
      e.abs_err = std::abs(e.d_ode - e.d_closed);
      e.rel_err = e.abs_err / std::max(std::abs(e.d_closed), floor);
      rels.push_back(e.rel_err);
    } catch (const Error& err) {
      e.failed = true;
      e.what = err.what();
    }
    table.entries.push_back(std::move(e));
  }
  if (!rels.empty()) {
    table.max_rel = *std::max_element(rels.begin(), rels.end());
    std::sort(rels.begin(), rels.end());
    const std::size_t n = rels.size();
    table.median_rel =
        n % 2 ? rels[n / 2] : 0.5 * (rels[n / 2 - 1] + rels[n / 2]);
  }
  return table;
}

}  // namespace znd
