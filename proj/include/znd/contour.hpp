#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "znd/errors.hpp"
#include "znd/params.hpp"

namespace znd {

struct Contour {
  std::vector<std::complex<double>> points;  // closed: front() == back()
  int refinement_depth = 0;                  // filled by winding_number
  double min_abs_on_contour = 0.0;           // filled by winding_number
};

inline double contour_signed_area(const Contour& c) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    const auto& p = c.points[i];
    const auto& q = c.points[i + 1];
    a += p.real() * q.imag() - q.real() * p.imag();
  }
  return 0.5 * a;
}

/// Boundary of {Re lambda >= 0, r <= |lambda| <= R}, positively oriented:
/// outer semicircle -iR -> R -> iR, axis down to ir, indentation arc through
/// +r into Re lambda > 0, axis down to -iR.  Second contour: full circle
/// |lambda| = r.  The circle must satisfy r < k to stay inside the
/// analyticity domain Re lambda > -k.
inline std::pair<Contour, Contour> build_contours(const DetonationParams& p,
                                                  double r, double R,
                                                  int n0) {
  if (!(r > 0.0) || r >= R)
    throw GeometryError("build_contours: need 0 < r < R");
  if (r >= p.k())
    throw GeometryError("build_contours: indentation radius must be < k");
  if (n0 < 16) throw DomainError("build_contours: n0 must be >= 16");

  using C = std::complex<double>;
  Contour half;
  const int n_arc = n0;
  const int n_axis = std::max(8, n0 / 2);
  const int n_ind = std::max(16, n0 / 4);
  half.points.reserve(static_cast<std::size_t>(n_arc + 2 * n_axis + n_ind) +
                      1);

  half.points.emplace_back(0.0, -R);
  for (int j = 1; j < n_arc; ++j) {
    const double th = -0.5 * M_PI + M_PI * j / n_arc;
    half.points.emplace_back(R * std::cos(th), R * std::sin(th));
  }
  half.points.emplace_back(0.0, R);
  for (int j = 1; j < n_axis; ++j)
    half.points.emplace_back(0.0, R - (R - r) * j / n_axis);
  half.points.emplace_back(0.0, r);
  for (int j = 1; j < n_ind; ++j) {
    const double th = 0.5 * M_PI - M_PI * j / n_ind;
    half.points.emplace_back(r * std::cos(th), r * std::sin(th));
  }
  half.points.emplace_back(0.0, -r);
  for (int j = 1; j < n_axis; ++j)
    half.points.emplace_back(0.0, -(r + (R - r) * j / n_axis));
  half.points.emplace_back(C(0.0, -R));

  Contour circle;
  circle.points.reserve(static_cast<std::size_t>(n0) + 1);
  circle.points.emplace_back(r, 0.0);
  for (int j = 1; j < n0; ++j) {
    const double th = 2.0 * M_PI * j / n0;
    circle.points.emplace_back(r * std::cos(th), r * std::sin(th));
  }
  circle.points.emplace_back(r, 0.0);

  return {std::move(half), std::move(circle)};
}

struct WindingDiagnostics {
  long evaluations = 0;
  std::size_t segments = 0;
  double min_abs = 0.0;
  double max_abs = 0.0;
  double residual = 0.0;
  int depth_used = 0;
};

struct WindingResult {
  int w = 0;
  WindingDiagnostics diag;
};

/// Winding number of evaluator along the closed contour by accumulated
/// principal-value phase increments.  A segment is refined when its phase
/// step reaches pi/2 (aliasing guard) or an endpoint modulus drops under the
/// dynamic floor 1e-10 x (contour max |f|); |f| under 1e-13 x that max is a
/// zero on the contour.  Updates the contour's diagnostic fields.
template <class F>
WindingResult winding_number(F&& evaluator, Contour& contour,
                             int max_depth = 48) {
  using C = std::complex<double>;
  const std::size_t n = contour.points.size();
  if (n < 4 || contour.points.front() != contour.points.back())
    throw GeometryError("winding_number: contour must be closed");

  WindingDiagnostics diag;
  std::vector<C> values(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    values[i] = evaluator(contour.points[i]);
    ++diag.evaluations;
  }
  values[n - 1] = values[0];  // exact closure of the phase telescope

  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    scale = std::max(scale, std::abs(values[i]));
  if (scale == 0.0) throw ZeroOnContour("winding_number: f vanishes");
  const double hard = 1e-13 * scale;
  const double soft = 1e-10 * scale;

  diag.min_abs = scale;
  diag.max_abs = scale;
  auto note = [&](const C& v) {
    const double a = std::abs(v);
    if (a < hard)
      throw ZeroOnContour("winding_number: |f| under absolute floor");
    diag.min_abs = std::min(diag.min_abs, a);
    diag.max_abs = std::max(diag.max_abs, a);
  };
  for (std::size_t i = 0; i + 1 < n; ++i) note(values[i]);

  struct Seg {
    C a, b, fa, fb;
    int depth;
  };
  std::vector<Seg> stack;
  for (std::size_t i = n - 1; i-- > 0;)
    stack.push_back({contour.points[i], contour.points[i + 1], values[i],
                     values[i + 1], 0});

  double total = 0.0;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    const double d = std::arg(s.fb / s.fa);
    const bool aliasing = std::abs(d) >= 0.5 * M_PI;
    const bool near_zero =
        std::min(std::abs(s.fa), std::abs(s.fb)) < soft && std::abs(d) > 1e-3;
    if (!aliasing && !near_zero) {
      total += d;
      ++diag.segments;
      continue;
    }
    if (s.depth >= max_depth) {
      if (aliasing)
        throw RefinementExhausted(
            "winding_number: phase step still >= pi/2 at max depth");
      total += d;
      ++diag.segments;
      continue;
    }
    const C m = 0.5 * (s.a + s.b);
    const C fm = evaluator(m);
    ++diag.evaluations;
    note(fm);
    diag.depth_used = std::max(diag.depth_used, s.depth + 1);
    stack.push_back({m, s.b, fm, s.fb, s.depth + 1});
    stack.push_back({s.a, m, s.fa, fm, s.depth + 1});
  }

  const double turns = total / (2.0 * M_PI);
  const long w = std::lround(turns);
  diag.residual = std::abs(total - 2.0 * M_PI * static_cast<double>(w));
  if (diag.residual > 1e-6)
    throw RefinementExhausted(
        "winding_number: accumulated phase is not a multiple of 2 pi");

  contour.refinement_depth = diag.depth_used;
  contour.min_abs_on_contour = diag.min_abs;
  return {static_cast<int>(w), diag};
}

}  // namespace znd
