#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "znd/contour.hpp"
#include "znd/errors.hpp"
#include "znd/lopatinski.hpp"
#include "znd/params.hpp"

namespace znd {

/// Analytic bound |Psi(lambda)| <= ((s-u_+) - (u_- - s))/(qk) on
/// Re lambda >= 0; attained at lambda = 0.
inline double psi_max(const DetonationParams& p) {
  return ((p.s() - p.u_plus()) - p.c_minus()) / (p.q() * p.k());
}

/// Lower bound for Re(u_* - u_+ - q - qk Psi) on Re lambda >= 0, equal to
/// D'(0); positive for every admissible parameter set.
inline double coeff_floor(const DetonationParams& p) {
  return p.s() - p.u_plus() - p.q() + p.c_minus();
}

/// Any zero of D with Re lambda >= 0 satisfies
/// (u_*-u_+)|lambda| <= k(u_*-u_+ + q + qk psi_max), from the closed form
/// |D| >= |lambda| (|lambda|(u_*-u_+) - k|u_*-u_+-q-qk Psi|)/|k+lambda|.
inline double radius_bound_base(const DetonationParams& p) {
  const double du = p.delta_u();
  return p.k() * (du + p.q() + p.q() * p.k() * psi_max(p)) / du;
}

/// Contour radius: the zero-free bound doubled for safety margin.
inline double radius_bound(const DetonationParams& p) {
  return 2.0 * radius_bound_base(p);
}

/// Largest indentation radius keeping the quadrature representation of Psi
/// convergent on the whole small circle (its integrand scales like
/// t^{lambda(s+c_-)/(k c_-)} near t = 0).
inline double indent_radius_cap(const DetonationParams& p) {
  return 0.45 * p.k() * p.c_minus() / (p.s() + p.c_minus());
}

inline double default_indent_radius(const DetonationParams& p, double R) {
  return std::min({0.05 * p.k(), 0.05 * R, indent_radius_cap(p)});
}

enum class Verdict { StableConditionD, Violated, Inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::StableConditionD: return "StableConditionD";
    case Verdict::Violated: return "Violated";
    default: return "Inconclusive";
  }
}

struct StabilityReport {
  explicit StabilityReport(const DetonationParams& p) : params(p) {}

  DetonationParams params;
  int winding_open_half_plane = 0;
  int winding_small_circle = 0;
  double radius_R = 0.0;
  double indent_r = 0.0;
  double psi_max = 0.0;
  double coeff_floor = 0.0;
  double min_abs_D = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> diagnostics;
  std::string radius_derivation;
};

struct VerifyOptions {
  double rel_tol = 1e-10;
  int n0 = 64;
  int max_depth = 48;
  double indent_r = 0.0;  // 0 = default_indent_radius
  double radius_R = 0.0;  // 0 = radius_bound
};

namespace stab_detail {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace stab_detail

/// Certify condition (D): winding number 0 on the indented half-plane
/// boundary, 1 on the small circle (the zero at the origin), plus the
/// pointwise positivity of Re(u_* - u_+ - q - qk Psi) over the region.
/// Sub-errors downgrade the verdict to Inconclusive, never silently.
inline StabilityReport verify_condition_D(const DetonationParams& p,
                                          const VerifyOptions& opt = {}) {
  StabilityReport rep(p);
  rep.psi_max = psi_max(p);
  rep.coeff_floor = coeff_floor(p);
  const double base = radius_bound_base(p);
  rep.radius_R = opt.radius_R > 0.0 ? opt.radius_R : radius_bound(p);
  rep.indent_r = opt.indent_r > 0.0 ? opt.indent_r
                                    : default_indent_radius(p, rep.radius_R);
  rep.radius_derivation =
      "zeros with Re lambda >= 0 satisfy (u_*-u_+)|lambda| <= "
      "k(u_*-u_+ + q + qk psi_max): base " +
      stab_detail::fmt(base) + ", doubled " + stab_detail::fmt(rep.radius_R);

  try {
    auto [half, circle] = build_contours(p, rep.indent_r, rep.radius_R,
                                         opt.n0);
    auto d = [&](Complex lam) { return det_closed_form(p, lam, opt.rel_tol); };
    const WindingResult wh = winding_number(d, half, opt.max_depth);
    const WindingResult wc = winding_number(d, circle, opt.max_depth);
    rep.winding_open_half_plane = wh.w;
    rep.winding_small_circle = wc.w;
    rep.min_abs_D = std::min(wh.diag.min_abs, wc.diag.min_abs);
    rep.diagnostics.push_back(
        "half-plane contour: " + std::to_string(wh.diag.evaluations) +
        " evaluations, depth " + std::to_string(wh.diag.depth_used) +
        ", min |D| " + stab_detail::fmt(wh.diag.min_abs));
    rep.diagnostics.push_back(
        "small circle: " + std::to_string(wc.diag.evaluations) +
        " evaluations, depth " + std::to_string(wc.diag.depth_used) +
        ", min |D| " + stab_detail::fmt(wc.diag.min_abs));

    bool coeff_positive = true;
    for (int i = 0; i < 9 && coeff_positive; ++i)
      for (int j = 0; j < 9; ++j) {
        const Complex lam(rep.radius_R * i / 8.0,
                          rep.radius_R * (j - 4) / 4.0);
        const Complex b =
            p.delta_u() - p.q() -
            p.q() * p.k() * psi(p, lam, opt.rel_tol).value;
        if (!(b.real() > 0.0)) {
          coeff_positive = false;
          rep.diagnostics.push_back(
              "coefficient positivity fails at lambda = (" +
              stab_detail::fmt(lam.real()) + ", " +
              stab_detail::fmt(lam.imag()) + ")");
          break;
        }
      }

    const bool stable = wh.w == 0 && wc.w == 1 && rep.coeff_floor > 0.0 &&
                        coeff_positive;
    rep.verdict = stable ? Verdict::StableConditionD : Verdict::Violated;
    if (!stable)
      rep.diagnostics.push_back(
          "expected winding pair (0,1), found (" + std::to_string(wh.w) +
          "," + std::to_string(wc.w) + ")");
  } catch (const Error& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.diagnostics.push_back(e.what());
  }
  return rep;
}

struct SweepSpec {
  std::vector<double> u_plus;
  std::vector<double> u_star;
  std::vector<double> q_fraction;  // of q_max(u_plus, u_star)
  std::vector<double> k;
  double u_i_fraction = 0.5;  // placement of u_i inside (u_+, u_-)
  // sweeps favor volume over digits; single-point analysis keeps 1e-10
  VerifyOptions verify{.rel_tol = 1e-6};
};

struct SweepRow {
  std::size_t index = 0;
  double u_plus = 0.0, u_star = 0.0, q = 0.0, k = 0.0, u_i = 0.0;
  bool ok = false;
  std::string error;
  std::optional<StabilityReport> report;
};

/// One verify_condition_D per grid point, iterated in grid order
/// (u_plus, then u_star, then q_fraction, then k).  Inadmissible points are
/// recorded per row and do not stop the sweep.  Rows are written to disjoint
/// slots, so worker threads need no synchronization.
inline std::vector<SweepRow> parameter_sweep(const SweepSpec& spec,
                                             int threads = 1) {
  struct Point {
    double up, us, qf, kk;
  };
  std::vector<Point> pts;
  for (double up : spec.u_plus)
    for (double us : spec.u_star)
      for (double qf : spec.q_fraction)
        for (double kk : spec.k) pts.push_back({up, us, qf, kk});

  std::vector<SweepRow> rows(pts.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < pts.size(); i += stride) {
      SweepRow& row = rows[i];
      row.index = i;
      row.u_plus = pts[i].up;
      row.u_star = pts[i].us;
      row.k = pts[i].kk;
      try {
        const double qm = q_max(pts[i].up, pts[i].us);
        row.q = pts[i].qf * qm;
        const double s = 0.5 * (pts[i].up + pts[i].us);
        const double um =
            s + std::sqrt((s - pts[i].up) * (s - pts[i].up) -
                          2.0 * row.q * s);
        row.u_i = pts[i].up + spec.u_i_fraction * (um - pts[i].up);
        const DetonationParams p =
            build_params(pts[i].up, pts[i].us, row.q, pts[i].kk, row.u_i);
        row.report = verify_condition_D(p, spec.verify);
        row.ok = true;
      } catch (const Error& e) {
        row.error = e.what();
      }
    }
  };

  if (threads <= 1 || pts.size() <= 1) {
    work(0, 1);
  } else {
    const int nt = std::min<int>(threads, static_cast<int>(pts.size()));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t)
      pool.emplace_back(work, static_cast<std::size_t>(t),
                        static_cast<std::size_t>(nt));
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace znd
