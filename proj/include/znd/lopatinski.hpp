#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "znd/errors.hpp"
#include "znd/ode.hpp"
#include "znd/params.hpp"
#include "znd/profile.hpp"
#include "znd/quadrature.hpp"

namespace znd {

using Complex = std::complex<double>;

/// P(xi) = lambda / (u_bar(xi) - s), the integrating-factor coefficient of
/// the Z1 equation on the reaction zone.
inline Complex p_coeff(const DetonationParams& p, Complex lambda, double xi) {
  if (xi > 0.0) throw DomainError("p_coeff: xi must be <= 0");
  const double z = std::exp((p.k() / p.s()) * xi);
  return lambda / std::sqrt(profile_radicand(p, z));
}

/// Closed-form antiderivative F of P in xi:
///   F(xi) = -(2 lambda s/(k c_-)) ln[(m(xi)+c_-)/sqrt(2qs e^{(k/s)xi})],
/// with m = sqrt of the profile radicand and c_- = u_- - s.
inline Complex p_antiderivative(const DetonationParams& p, Complex lambda,
                                double xi) {
  if (xi > 0.0) throw DomainError("p_antiderivative: xi must be <= 0");
  const double cm = p.c_minus();
  const double z = std::exp((p.k() / p.s()) * xi);
  const double m = std::sqrt(profile_radicand(p, z));
  const double arg = (m + cm) / std::sqrt(2.0 * p.q() * p.s() * z);
  return -(2.0 * p.s() / (p.k() * cm)) * lambda * std::log(arg);
}

namespace lop_detail {

// Shape function h with Psi = (s/k) * int_0^1 exp(lambda h(t)) / m(t) dt in
// the substituted variable t = e^{(k/s)y}.  Folding t^{lambda/k} and the
// integrating factor into one exponent keeps the integrand single-valued;
// h <= 0 on (0,1], which bounds the integrand for Re lambda >= 0.
inline double psi_shape(const DetonationParams& p, double t) {
  const double s = p.s(), k = p.k(), cm = p.c_minus();
  const double m = std::sqrt(cm * cm + 2.0 * p.q() * s * t);
  const double m0 = s - p.u_plus();
  return ((s + cm) / (k * cm)) * std::log(t) -
         (2.0 * s / (k * cm)) * std::log((m + cm) / (m0 + cm));
}

}  // namespace lop_detail

struct PsiResult {
  Complex value;
  double error_estimate = 0.0;
};

/// Psi via the variation-of-constants ODE for W = Z1 e^{-mu xi}:
///   W' = -(mu + P) W - qk/s,  W(-L) = v1,
/// used when the quadrature would oscillate (|Im lambda| large).
inline PsiResult psi_via_ode(const DetonationParams& p, Complex lambda,
                             double rel_tol) {
  const double s = p.s(), k = p.k(), q = p.q();
  const Complex mu = (k + lambda) / s;
  const Complex denom = mu + lambda / p.c_minus();
  if (std::abs(denom) < 1e-14 * (std::abs(mu) + std::abs(lambda)))
    throw DegenerateError("psi_via_ode: resonant modes at minus infinity");
  const Complex v1 = -(q * k / s) / denom;
  const double L =
      (s / k) * std::log(1.0 / std::numeric_limits<double>::epsilon());

  auto rhs = [&](double xi, const std::vector<Complex>& w) {
    return std::vector<Complex>{-(mu + p_coeff(p, lambda, xi)) * w[0] -
                                q * k / s};
  };
  OdeOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-2 * rel_tol * std::abs(v1) + 1e-14;
  auto res = integrate_ode(rhs, std::vector<Complex>{v1}, -L, 0.0, opt);
  const Complex z1 = res.final_state[0];
  const Complex psi = (1.0 + z1 * (k + lambda) / (q * k)) / lambda;
  return {psi, rel_tol * (1.0 + std::abs(psi))};
}

/// Psi(lambda) = int_{-infty}^0 e^{-int_y^0 P} e^{((k+lambda)/s)y} /
/// sqrt(radicand(y)) dy, computed on (0,1] after t = e^{(k/s)y}.
inline PsiResult psi(const DetonationParams& p, Complex lambda,
                     double rel_tol = 1e-10) {
  if (!(lambda.real() > -p.k()))
    throw DomainError("psi: requires Re(lambda) > -k");
  if (!(rel_tol > 0.0)) throw DomainError("psi: rel_tol must be positive");

  if (std::abs(lambda.imag()) > 50.0 * p.k())
    return psi_via_ode(p, lambda, rel_tol);

  const double s = p.s(), k = p.k(), cm = p.c_minus();
  // near t = 0 the integrand behaves like t^{lambda (s+c_-)/(k c_-)}; on the
  // indentation circle Re lambda dips below zero and that power is singular
  // (the indent cap keeps its exponent above -1/2, so t = tau^2 lifts it to
  // a plain continuous function the cells at the width floor can certify)
  auto f = [&](double tau) {
    const double t = tau * tau;
    const double m = std::sqrt(cm * cm + 2.0 * p.q() * s * t);
    return 2.0 * tau * std::exp(lambda * lop_detail::psi_shape(p, t)) / m;
  };
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-12;
  const QuadResult quad = adaptive_quad(f, 0.0, 1.0, opt);
  return {(s / k) * quad.value, (s / k) * quad.error_estimate};
}

/// The boundary term lambda [W] - [A W'] of the jump conditions:
/// (lambda (u_+ - u_*) + qk, -k).
inline std::array<Complex, 2> jump_vector(const DetonationParams& p,
                                          Complex lambda) {
  return {lambda * (p.u_plus() - p.u_star()) + p.q() * p.k(),
          Complex(-p.k())};
}

/// Z1(lambda, 0) = -(qk/(k+lambda)) (1 - lambda Psi) in the normalization
/// Z2(lambda, 0) = 1.
inline Complex z1_from_psi(const DetonationParams& p, Complex lambda,
                           Complex psi_value) {
  const Complex kp = p.k() + lambda;
  if (std::abs(kp) == 0.0) throw DomainError("z1_from_psi: lambda = -k");
  return -(p.q() * p.k() / kp) * (1.0 - lambda * psi_value);
}

inline Complex z1_at_zero(const DetonationParams& p, Complex lambda,
                          double rel_tol = 1e-10) {
  return z1_from_psi(p, lambda, psi(p, lambda, rel_tol).value);
}

struct LopatinskiEval {
  Complex lambda;
  Complex psi;
  Complex z1_at_zero;
  std::array<Complex, 2> jump;
  Complex d_value;
  double quad_error = 0.0;
};

/// Closed-form Lopatinski determinant
///   D(lambda) = ((u_*-u_+) lambda + (u_*-u_+-q-qk Psi) k) lambda/(k+lambda),
/// cross-checked against the equivalent -k Z1 + lambda(u_*-u_+) - qk.
inline LopatinskiEval evaluate_lopatinski(const DetonationParams& p,
                                          Complex lambda,
                                          double rel_tol = 1e-10) {
  const double k = p.k(), q = p.q();
  const double du = p.delta_u();
  const PsiResult ps = psi(p, lambda, rel_tol);
  const Complex z1 = z1_from_psi(p, lambda, ps.value);
  const Complex d_psi_form =
      (du * lambda + (du - q - q * k * ps.value) * k) * lambda / (k + lambda);
  const Complex d_z1_form = -k * z1 + lambda * du - q * k;

  // Both forms are algebraic rearrangements of the same Psi value, so they
  // agree to rounding regardless of quadrature accuracy.
  const double scale = std::abs(lambda) * du + q * k + k * std::abs(z1) +
                       std::abs(d_psi_form) + 1e-300;
  if (std::abs(d_psi_form - d_z1_form) > 1e-12 * scale)
    throw ConsistencyError(
        "evaluate_lopatinski: Psi-form and Z1-form determinants disagree");

  return {lambda, ps.value, z1, jump_vector(p, lambda), d_psi_form,
          ps.error_estimate};
}

inline Complex det_closed_form(const DetonationParams& p, Complex lambda,
                               double rel_tol = 1e-10) {
  return evaluate_lopatinski(p, lambda, rel_tol).d_value;
}

}  // namespace znd
