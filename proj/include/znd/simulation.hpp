#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "znd/errors.hpp"
#include "znd/params.hpp"
#include "znd/profile.hpp"

namespace znd {

struct GridSpec {
  double xi_left = -15.0;
  double xi_right = 2.5;
  std::size_t n_cells = 2000;
};

struct PerturbationSpec {
  double amplitude = 0.0;
  double width = 1.0;
  double center = -3.0;
};

/// Finite-volume state in the co-moving frame, where the profile is
/// stationary.  Cell-centered u and z on a uniform grid.
struct SimState {
  std::vector<double> xi;
  std::vector<double> u;
  std::vector<double> z;
  double t = 0.0;
  double dx = 0.0;
  double cfl = 0.4;
  double mass_residual_last = 0.0;
  double mass_residual_accum = 0.0;
};

/// Sample the profile onto the grid and add a Gaussian bump a e^{-((xi-c)/w)^2}
/// to u inside the reaction zone; z starts unperturbed.
inline SimState init_state(const DetonationParams& p, const GridSpec& grid,
                           const PerturbationSpec& pert, double cfl = 0.4) {
  if (!(grid.xi_left < grid.xi_right) || grid.n_cells < 4)
    throw GridError("init_state: malformed grid");
  if (!(cfl > 0.0 && cfl < 1.0))
    throw CflViolation("init_state: cfl must lie in (0,1)");
  SimState st;
  st.dx = (grid.xi_right - grid.xi_left) / static_cast<double>(grid.n_cells);
  const double reaction_length = p.s() / p.k();
  if (st.dx > reaction_length / 20.0)
    throw GridError(
        "init_state: grid must resolve the reaction length s/k with >= 20 "
        "cells");
  st.cfl = cfl;
  st.xi.resize(grid.n_cells);
  st.u.resize(grid.n_cells);
  st.z.resize(grid.n_cells);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double x = grid.xi_left + (static_cast<double>(i) + 0.5) * st.dx;
    const ProfilePoint pp = profile_at(p, x);
    const double r = (x - pert.center) / pert.width;
    st.xi[i] = x;
    st.u[i] = pp.u_bar + pert.amplitude * std::exp(-r * r);
    st.z[i] = pp.z_bar;
  }
  return st;
}

/// One split step: conservative local Lax-Friedrichs update of w = u + qz
/// with flux u^2/2 - sw, upwind advection of z at speed -s (inflow (u_+, 1)
/// on the right, outflow extrapolation on the left), then exact exponential
/// reaction decay.  w is untouched by the last two substeps; u is recovered
/// as w - qz.
inline SimState& step(SimState& st, const DetonationParams& p) {
  const std::size_t n = st.u.size();
  const double s = p.s(), q = p.q(), k = p.k();

  double a_max = s;
  for (std::size_t i = 0; i < n; ++i)
    a_max = std::max(a_max, std::abs(st.u[i] - s));
  if (!std::isfinite(a_max) || !(a_max > 0.0))
    throw NonFiniteState("step: invalid wave speeds");
  const double dt = st.cfl * st.dx / a_max;
  if (!(s * dt / st.dx < 1.0) || !(a_max * dt / st.dx < 1.0))
    throw CflViolation("step: time step violates the CFL bound");

  std::vector<double> w(n + 2), f(n + 2), spd(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    w[i + 1] = st.u[i] + q * st.z[i];
    f[i + 1] = 0.5 * st.u[i] * st.u[i] - s * w[i + 1];
    spd[i + 1] = std::abs(st.u[i] - s);
  }
  // left ghost: outflow extrapolation; right ghost: quiescent inflow
  w[0] = w[1];
  f[0] = f[1];
  spd[0] = spd[1];
  const double u_ghost = p.u_plus();
  w[n + 1] = u_ghost + q * 1.0;
  f[n + 1] = 0.5 * u_ghost * u_ghost - s * w[n + 1];
  spd[n + 1] = std::abs(u_ghost - s);

  double mass_before = 0.0;
  for (std::size_t i = 1; i <= n; ++i) mass_before += w[i];
  mass_before *= st.dx;

  std::vector<double> flux(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double alpha = std::max(spd[i], spd[i + 1]);
    flux[i] = 0.5 * (f[i] + f[i + 1]) - 0.5 * alpha * (w[i + 1] - w[i]);
  }
  std::vector<double> w_new(n);
  for (std::size_t i = 0; i < n; ++i)
    w_new[i] = w[i + 1] - (dt / st.dx) * (flux[i + 1] - flux[i]);

  // advection of z at speed -s pulls from the right neighbor
  const double nu = s * dt / st.dx;
  std::vector<double> z_new(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    z_new[i] = st.z[i] + nu * (st.z[i + 1] - st.z[i]);
  z_new[n - 1] = st.z[n - 1] + nu * (1.0 - st.z[n - 1]);

  for (std::size_t i = 0; i < n; ++i) {
    const double u_mid = w_new[i] - q * z_new[i];
    z_new[i] *= std::exp(-k * ignition(p, u_mid) * dt);
    st.u[i] = w_new[i] - q * z_new[i];
    st.z[i] = z_new[i];
    if (!std::isfinite(st.u[i]) || !std::isfinite(st.z[i]))
      throw NonFiniteState("step: non-finite cell state");
  }

  double mass_after = 0.0;
  for (std::size_t i = 0; i < n; ++i) mass_after += st.u[i] + q * st.z[i];
  mass_after *= st.dx;
  // the advection of z moves u + qz around inside w, so only the
  // conservative fluxes of substep one cross the boundaries
  const double boundary = dt * (flux[n] - flux[0]);
  st.mass_residual_last = std::abs(mass_after - mass_before + boundary);
  st.mass_residual_accum += st.mass_residual_last;

  st.t += dt;
  return st;
}

/// L1 distance from the u field to the nearest profile translate, minimized
/// over the shift by a coarse scan plus golden-section polish.
inline double distance_to_orbit(const SimState& st, const DetonationParams& p,
                                double window = 2.0,
                                double* best_shift = nullptr) {
  const std::size_t n = st.u.size();
  auto dist = [&](double delta) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += std::abs(st.u[i] - profile_at(p, st.xi[i] - delta).u_bar);
    return acc * st.dx;
  };

  const int n_scan = 41;
  double d0 = dist(0.0), s0 = 0.0;
  for (int j = 0; j < n_scan; ++j) {
    const double delta = -window + 2.0 * window * j / (n_scan - 1);
    const double d = dist(delta);
    if (d < d0) {
      d0 = d;
      s0 = delta;
    }
  }

  const double step_width = 2.0 * window / (n_scan - 1);
  double a = s0 - step_width, b = s0 + step_width;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = dist(x1), f2 = dist(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = dist(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = dist(x2);
    }
  }
  const double xm = 0.5 * (a + b), fm = dist(xm);
  if (best_shift) *best_shift = xm;
  return std::min(fm, std::min(f1, f2));
}

struct MetricRow {
  double t = 0.0;
  double distance = 0.0;
  double mass_residual = 0.0;
};

struct ExperimentResult {
  std::vector<MetricRow> series;
  SimState final_state;
};

/// Advance to horizon T, recording (t, distance_to_orbit, accumulated mass
/// residual) every record_every steps and at both ends.
inline ExperimentResult run_experiment(const DetonationParams& p,
                                       const GridSpec& grid,
                                       const PerturbationSpec& pert, double T,
                                       double cfl = 0.4,
                                       long record_every = 50) {
  if (!(T > 0.0)) throw DomainError("run_experiment: horizon must be > 0");
  ExperimentResult out{{}, init_state(p, grid, pert, cfl)};
  SimState& st = out.final_state;
  out.series.push_back(
      {st.t, distance_to_orbit(st, p), st.mass_residual_accum});
  long n_steps = 0;
  while (st.t < T) {
    step(st, p);
    ++n_steps;
    if (n_steps % record_every == 0 && st.t < T)
      out.series.push_back(
          {st.t, distance_to_orbit(st, p), st.mass_residual_accum});
  }
  out.series.push_back(
      {st.t, distance_to_orbit(st, p), st.mass_residual_accum});
  return out;
}

}  // namespace znd
