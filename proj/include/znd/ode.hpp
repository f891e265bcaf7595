#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "znd/errors.hpp"

namespace znd {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 = choose automatically
  double max_step = 0.0;      // 0 = |t1 - t0|
  long max_steps = 2000000;
};

template <class Scalar>
struct OdeResult {
  std::vector<Scalar> final_state;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

namespace ode_detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// y5 - y4 error weights (stage 2 weight is zero).
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

template <class Scalar>
bool all_finite(const std::vector<Scalar>& v) {
  for (const Scalar& x : v)
    if (!std::isfinite(std::abs(x))) return false;
  return true;
}

}  // namespace ode_detail

/// Adaptive explicit integration of y' = rhs(t, y) from t0 to t1 with the
/// Dormand-Prince 5(4) embedded pair and PI step-size control.  Scalar may
/// be double or std::complex<double>; rhs returns the derivative vector.
template <class Scalar, class Rhs>
OdeResult<Scalar> integrate_ode(Rhs&& rhs, std::vector<Scalar> y0, double t0,
                                double t1, OdeOptions opt = {}) {
  namespace od = ode_detail;
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
    throw DomainError("integrate_ode: tolerances must be positive");
  if (!od::all_finite(y0))
    throw NonFiniteState("integrate_ode: non-finite initial state");

  OdeResult<Scalar> res;
  if (t0 == t1) {
    res.final_state = std::move(y0);
    return res;
  }

  const std::size_t n = y0.size();
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double h_max = opt.max_step > 0.0 ? opt.max_step : span;

  std::vector<Scalar> y = std::move(y0);
  std::vector<Scalar> k1 = rhs(t0, y);
  std::vector<Scalar> k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n),
      ynew(n);

  auto err_norm = [&](const std::vector<Scalar>& e,
                      const std::vector<Scalar>& ya,
                      const std::vector<Scalar>& yb) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc =
          opt.abs_tol +
          opt.rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      const double r = std::abs(e[i]) / sc;
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(n));
  };

  // Starting step: compare the state scale with the derivative scale, then
  // refine with one Euler probe of the second derivative.
  double h;
  if (opt.initial_step > 0.0) {
    h = std::min(opt.initial_step, h_max);
  } else {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      d0 += std::pow(std::abs(y[i]) / sc, 2);
      d1 += std::pow(std::abs(k1[i]) / sc, 2);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1 = std::sqrt(d1 / static_cast<double>(n));
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + (dir * h0) * k1[i];
    std::vector<Scalar> f1 = rhs(t0 + dir * h0, ytmp);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      d2 += std::pow(std::abs(f1[i] - k1[i]) / sc, 2);
    }
    d2 = std::sqrt(d2 / static_cast<double>(n)) / h0;
    const double dm = std::max(d1, d2);
    const double h1 =
        dm <= 1e-15 ? std::max(1e-6 * span, h0 * 1e-3)
                    : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, h_max});
  }
  h = std::max(h, 1e3 * std::numeric_limits<double>::min());

  double t = t0;
  double err_prev = 1.0;
  bool last_rejected = false;

  while (dir * (t1 - t) > 0.0) {
    if (res.steps_accepted + res.steps_rejected >= opt.max_steps)
      throw ConvergenceError("integrate_ode: step budget exhausted");
    const double h_left = std::abs(t1 - t);
    h = std::min(h, h_left);
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() *
                 std::max(std::abs(t), span)) {
      std::ostringstream os;
      os << "integrate_ode: step size underflow at t=" << t << " (h=" << h
         << ")";
      throw StepSizeUnderflow(os.str());
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (od::a21 * k1[i]);
    k2 = rhs(t + od::c2 * hs, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (od::a31 * k1[i] + od::a32 * k2[i]);
    k3 = rhs(t + od::c3 * hs, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] =
          y[i] + hs * (od::a41 * k1[i] + od::a42 * k2[i] + od::a43 * k3[i]);
    k4 = rhs(t + od::c4 * hs, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (od::a51 * k1[i] + od::a52 * k2[i] +
                             od::a53 * k3[i] + od::a54 * k4[i]);
    k5 = rhs(t + od::c5 * hs, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (od::a61 * k1[i] + od::a62 * k2[i] +
                             od::a63 * k3[i] + od::a64 * k4[i] +
                             od::a65 * k5[i]);
    k6 = rhs(t + hs, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (od::b1 * k1[i] + od::b3 * k3[i] +
                             od::b4 * k4[i] + od::b5 * k5[i] +
                             od::b6 * k6[i]);
    k7 = rhs(t + hs, ynew);

    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = hs * (od::e1 * k1[i] + od::e3 * k3[i] + od::e4 * k4[i] +
                      od::e5 * k5[i] + od::e6 * k6[i] + od::e7 * k7[i]);

    if (!od::all_finite(ynew) || !od::all_finite(ytmp)) {
      std::ostringstream os;
      os << "integrate_ode: non-finite state at t=" << t;
      throw NonFiniteState(os.str());
    }

    const double err = err_norm(ytmp, y, ynew);
    if (err <= 1.0) {
      t += hs;
      y.swap(ynew);
      k1.swap(k7);  // first-same-as-last
      ++res.steps_accepted;
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                   std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      h = std::min(h * fac, h_max);
      err_prev = std::max(err, 1e-10);
      last_rejected = false;
    } else {
      ++res.steps_rejected;
      const double fac =
          std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      h *= fac;
      last_rejected = true;
    }
  }

  res.final_state = std::move(y);
  return res;
}

}  // namespace znd
