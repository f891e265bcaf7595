#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <sstream>
#include <vector>

#include "znd/errors.hpp"

namespace znd {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_intervals = 8192;
  // Intervals narrower than this are accepted as-is instead of being split
  // further.  0 selects 1e-14 * (b - a).
  double min_width = 0.0;
};

struct QuadResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  long evaluations = 0;
};

namespace quad_detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1,1].
// Nonnegative abscissae; even indices are the Kronrod-only nodes.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a = 0, b = 0;
  std::complex<double> integral{0.0, 0.0};
  double err = 0;
};

// Worst error first; ties broken by position for determinism.
struct WorseError {
  bool operator()(const Interval& x, const Interval& y) const {
    if (x.err != y.err) return x.err < y.err;
    return x.a > y.a;
  }
};

template <class F>
Interval gk15(F& f, double a, double b, long& evaluations) {
  const double mid = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::complex<double> k15{0.0, 0.0};
  std::complex<double> g7{0.0, 0.0};
  for (int j = 0; j < 8; ++j) {
    const double xj = h * kXgk[j];
    std::complex<double> fsum = f(mid + xj);
    ++evaluations;
    if (j < 7) {
      fsum += f(mid - xj);
      ++evaluations;
    }
    k15 += kWgk[j] * fsum;
    if (j % 2 == 1) g7 += kWg[j / 2] * fsum;
  }
  if (!(std::isfinite(k15.real()) && std::isfinite(k15.imag()))) {
    std::ostringstream os;
    os << "adaptive_quad: non-finite integrand on [" << a << ", " << b << "]";
    throw NonFiniteState(os.str());
  }
  Interval r;
  r.a = a;
  r.b = b;
  r.integral = h * k15;
  r.err = h * std::abs(k15 - g7);
  return r;
}

}  // namespace quad_detail

/// Adaptive complex-valued quadrature of f over [a, b] with a nested 7/15
/// Gauss-Kronrod rule and bisection of the worst subinterval.  Real and
/// imaginary parts share one subdivision tree.  The returned value is the
/// sum of subinterval contributions in left-to-right order, so results are
/// reproducible for identical inputs.
template <class F>
QuadResult adaptive_quad(F&& f, double a, double b, QuadOptions opt = {}) {
  using quad_detail::Interval;
  if (!(std::isfinite(a) && std::isfinite(b)) || a > b)
    throw DomainError("adaptive_quad: requires finite a <= b");
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
    throw DomainError("adaptive_quad: tolerances must be positive");

  QuadResult res;
  if (a == b) return res;

  const double min_width =
      opt.min_width > 0.0 ? opt.min_width : 1e-14 * (b - a);

  std::priority_queue<Interval, std::vector<Interval>,
                      quad_detail::WorseError>
      active;
  std::vector<Interval> settled;  // too narrow to split further

  std::complex<double> total{0.0, 0.0};
  double total_err = 0.0;

  Interval first = quad_detail::gk15(f, a, b, res.evaluations);
  total = first.integral;
  total_err = first.err;
  active.push(first);
  int n_intervals = 1;

  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (active.empty()) break;  // everything left is below the width floor
    if (n_intervals >= opt.max_intervals) {
      const Interval& worst = active.top();
      std::ostringstream os;
      os << "adaptive_quad: budget of " << opt.max_intervals
         << " intervals exhausted; worst subinterval [" << worst.a << ", "
         << worst.b << "] err=" << worst.err << " total_err=" << total_err;
      throw ConvergenceError(os.str());
    }
    Interval worst = active.top();
    active.pop();
    if (worst.b - worst.a <= min_width) {
      settled.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Interval left = quad_detail::gk15(f, worst.a, mid, res.evaluations);
    Interval right = quad_detail::gk15(f, mid, worst.b, res.evaluations);
    total += left.integral + right.integral - worst.integral;
    total_err += left.err + right.err - worst.err;
    active.push(left);
    active.push(right);
    ++n_intervals;
  }

  // Deterministic final summation in interval order.
  while (!active.empty()) {
    settled.push_back(active.top());
    active.pop();
  }
  std::sort(settled.begin(), settled.end(),
            [](const Interval& x, const Interval& y) { return x.a < y.a; });
  std::complex<double> value{0.0, 0.0};
  double err = 0.0;
  for (const Interval& iv : settled) {
    value += iv.integral;
    err += iv.err;
  }
  res.value = value;
  res.error_estimate = err;
  return res;
}

template <class F>
QuadResult adaptive_quad(F&& f, double a, double b, double rel_tol,
                         double abs_tol) {
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  return adaptive_quad(std::forward<F>(f), a, b, opt);
}

}  // namespace znd
