#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "znd/errors.hpp"
#include "znd/ode.hpp"
#include "znd/params.hpp"

namespace znd {

struct ProfilePoint {
  double xi = 0.0;
  double u_bar = 0.0;
  double z_bar = 0.0;
};

/// Radicand of the profile square root: s^2 - 2qs(1 - z) + u_+^2 - 2s u_+.
/// Ranges over [(u_- - s)^2, (s - u_+)^2] for z in [0,1].
inline double profile_radicand(const DetonationParams& p, double z) {
  const double s = p.s();
  return s * s - 2.0 * p.q() * s * (1.0 - z) + p.u_plus() * p.u_plus() -
         2.0 * s * p.u_plus();
}

/// Smooth (reaction-zone) branch, valid for xi <= 0 including the left
/// limit at the shock.
inline ProfilePoint profile_smooth(const DetonationParams& p, double xi) {
  const double z = std::exp((p.k() / p.s()) * xi);
  const double u = p.s() + std::sqrt(profile_radicand(p, z));
  return {xi, u, z};
}

/// Profile value at xi.  The shock location xi = 0 carries the post-shock
/// state (u_+, 1); use profile_left_limit for the pre-shock side.
inline ProfilePoint profile_at(const DetonationParams& p, double xi) {
  if (xi >= 0.0) return {xi, p.u_plus(), 1.0};
  return profile_smooth(p, xi);
}

/// Pre-shock state (u_*, 1), the xi -> 0^- limit of the smooth branch.
inline ProfilePoint profile_left_limit(const DetonationParams& p) {
  return profile_smooth(p, 0.0);
}

struct ProfileRhs {
  double du = 0.0;
  double dz = 0.0;
};

/// Traveling-wave ODE right-hand side: z' = (k/s) phi(u) z and
/// u' = qk phi(u) z / (u - s).
inline ProfileRhs profile_ode_rhs(const DetonationParams& p,
                                  const ProfilePoint& pt) {
  const double denom = pt.u_bar - p.s();
  if (std::abs(denom) < 1e-12 * p.s())
    throw SingularityError("profile_ode_rhs: u_bar too close to sonic value s");
  const double phi = ignition(p, pt.u_bar);
  const double rate = p.k() * phi * pt.z_bar;
  return {p.q() * rate / denom, rate / p.s()};
}

/// Independent profile oracle: integrate the traveling-wave ODE from
/// xi = -L (seeded on the closed form) up to 0^- and sample along the way.
inline std::vector<ProfilePoint> integrate_profile_oracle(
    const DetonationParams& p, double L, double rel_tol,
    std::size_t n_samples = 61) {
  if (!(L > 0.0)) throw DomainError("integrate_profile_oracle: L must be > 0");
  if (n_samples < 2)
    throw DomainError("integrate_profile_oracle: need at least 2 samples");

  const ProfilePoint seed = profile_smooth(p, -L);
  std::vector<double> y = {seed.u_bar, seed.z_bar};
  auto rhs = [&p](double, const std::vector<double>& state) {
    const ProfileRhs d = profile_ode_rhs(p, {0.0, state[0], state[1]});
    return std::vector<double>{d.du, d.dz};
  };

  OdeOptions opt;
  opt.rel_tol = rel_tol;
  // z grows from e^{-kL/s} through sixty-odd orders of magnitude; an
  // absolute floor above the seed would let early noise ride the growth,
  // so keep the control relative to the smallest state on the trajectory
  opt.abs_tol = std::max(1e-2 * rel_tol * seed.z_bar, 1e-280);

  std::vector<ProfilePoint> out;
  out.reserve(n_samples);
  out.push_back(seed);
  double xi = -L;
  for (std::size_t i = 1; i < n_samples; ++i) {
    const double xi_next =
        -L + (static_cast<double>(i) / static_cast<double>(n_samples - 1)) * L;
    auto res = integrate_ode(rhs, y, xi, xi_next, opt);
    y = res.final_state;
    out.push_back({xi_next, y[0], y[1]});
    xi = xi_next;
  }
  return out;
}

/// Rankine-Hugoniot residual of the shock at xi = 0:
/// |s(u_+ - u_*) - (u_+^2/2 - u_*^2/2)|.  The z component is continuous
/// across the shock by construction (both sides equal 1).
inline double rh_residual(const DetonationParams& p) {
  const double lhs = p.s() * (p.u_plus() - p.u_star());
  const double rhs =
      0.5 * p.u_plus() * p.u_plus() - 0.5 * p.u_star() * p.u_star();
  const double z_gap = std::abs(profile_left_limit(p).z_bar - 1.0) +
                       std::abs(profile_at(p, 0.0).z_bar - 1.0);
  return std::abs(lhs - rhs) + z_gap;
}

}  // namespace znd
