#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "znd/params.hpp"
#include "znd/profile.hpp"
#include "znd/random.hpp"

using znd::DetonationParams;
using znd::ProfilePoint;

namespace {

DetonationParams p0() { return znd::build_params(0.0, 2.0, 0.3, 1.0, 1.2); }
DetonationParams p1() { return znd::build_params(0.5, 1.5, 0.1, 2.0, 1.0); }

}  // namespace

TEST_CASE("closed-form profile hits pinned values") {
  const DetonationParams p = p0();

  const ProfilePoint at_shock = znd::profile_left_limit(p);
  CHECK(at_shock.u_bar == Catch::Approx(2.0).margin(1e-14));
  CHECK(at_shock.z_bar == 1.0);

  // z = 1/2 exactly at xi = -ln 2 for k = s = 1
  const ProfilePoint mid = znd::profile_at(p, -std::log(2.0));
  CHECK(mid.z_bar == Catch::Approx(0.5).margin(1e-15));
  CHECK(mid.u_bar == Catch::Approx(1.0 + std::sqrt(0.7)).margin(1e-12));

  const ProfilePoint ahead = znd::profile_at(p, 5.0);
  CHECK(ahead.u_bar == 0.0);
  CHECK(ahead.z_bar == 1.0);

  // the shock position itself carries the post-shock state
  const ProfilePoint post = znd::profile_at(p, 0.0);
  CHECK(post.u_bar == 0.0);
  CHECK(post.z_bar == 1.0);
}

TEST_CASE("profile tends to the burned state on the left") {
  const DetonationParams p = p0();
  const ProfilePoint far = znd::profile_at(p, -40.0);
  CHECK(std::abs(far.u_bar - p.u_minus()) < 1e-12);
  CHECK(std::abs(far.z_bar) < 1e-12);
}

TEST_CASE("profile is monotone and bounded on the reaction zone") {
  const DetonationParams p = p1();
  // deep in the burned tail u saturates at u_- in double precision, so u is
  // only non-decreasing sample to sample; strict growth is checked across
  // the visible reaction zone below
  double prev_u = -1e300, prev_z = -1e300;
  for (int i = 0; i <= 400; ++i) {
    const double xi = -40.0 + 40.0 * i / 400.0 - 1e-9;
    const ProfilePoint pt = znd::profile_at(p, xi);
    CHECK(pt.u_bar >= prev_u);
    CHECK(pt.z_bar > prev_z);
    CHECK(pt.z_bar <= 1.0);
    CHECK(pt.u_bar >= p.u_minus() - 1e-12);
    CHECK(pt.u_bar <= p.u_star() + 1e-12);
    const double rad = znd::profile_radicand(p, pt.z_bar);
    CHECK(rad >= p.c_minus() * p.c_minus() - 1e-12);
    CHECK(rad <= (p.s() - p.u_plus()) * (p.s() - p.u_plus()) + 1e-12);
    prev_u = pt.u_bar;
    prev_z = pt.z_bar;
  }
  CHECK(znd::profile_at(p, -2.0).u_bar > znd::profile_at(p, -4.0).u_bar);
  CHECK(znd::profile_at(p, -1e-9).u_bar > znd::profile_at(p, -2.0).u_bar);
}

TEST_CASE("conserved combination is constant along the profile") {
  const DetonationParams p = p0();
  auto invariant = [&](double xi) {
    const ProfilePoint pt = znd::profile_at(p, xi);
    return p.s() * (pt.u_bar + p.q() * pt.z_bar) -
           0.5 * pt.u_bar * pt.u_bar;
  };
  const double ref = invariant(-1e-9);
  for (int i = 1; i <= 60; ++i) {
    CHECK(invariant(-30.0 * i / 60.0) == Catch::Approx(ref).margin(1e-10));
  }
}

TEST_CASE("traveling-wave right-hand side values") {
  const DetonationParams p = p0();

  // burned end: z = 0 kills the reaction terms
  const znd::ProfileRhs end = znd::profile_ode_rhs(p, {0.0, p.u_minus(), 0.0});
  CHECK(end.du == 0.0);
  CHECK(end.dz == 0.0);

  // pre-shock state
  const znd::ProfileRhs top = znd::profile_ode_rhs(p, {0.0, 2.0, 1.0});
  CHECK(top.du == Catch::Approx(0.3).epsilon(1e-14));
  CHECK(top.dz == Catch::Approx(1.0).epsilon(1e-14));

  // interior point z = 1/2
  const znd::ProfileRhs mid = znd::profile_ode_rhs(
      p, {0.0, 1.0 + std::sqrt(0.7), 0.5});
  CHECK(mid.du == Catch::Approx(0.15 / std::sqrt(0.7)).epsilon(1e-12));
  CHECK(mid.dz == Catch::Approx(0.5).epsilon(1e-14));

  // below the ignition threshold nothing burns
  const znd::ProfileRhs cold = znd::profile_ode_rhs(p, {0.0, 0.5, 0.7});
  CHECK(cold.du == 0.0);
  CHECK(cold.dz == 0.0);
}

TEST_CASE("sonic states are rejected by the rhs") {
  const DetonationParams p = p0();
  CHECK_THROWS_AS(znd::profile_ode_rhs(p, {0.0, p.s(), 0.5}),
                  znd::SingularityError);
}

TEST_CASE("ODE oracle reproduces the closed form") {
  for (const DetonationParams& p : {p0(), p1()}) {
    const auto pts = znd::integrate_profile_oracle(p, 30.0, 1e-10);
    double max_err = 0.0;
    for (const ProfilePoint& pt : pts) {
      const ProfilePoint cf = znd::profile_smooth(p, pt.xi);
      max_err = std::max(max_err, std::abs(pt.u_bar - cf.u_bar));
      max_err = std::max(max_err, std::abs(pt.z_bar - cf.z_bar));
    }
    CHECK(max_err < 1e-8);
    CHECK(std::abs(pts.back().u_bar - p.u_star()) < 1e-8);
    CHECK(std::abs(pts.back().z_bar - 1.0) < 1e-8);
  }
}

TEST_CASE("ODE oracle input validation") {
  CHECK_THROWS_AS(znd::integrate_profile_oracle(p0(), -5.0, 1e-10),
                  znd::DomainError);
  CHECK_THROWS_AS(znd::integrate_profile_oracle(p0(), 30.0, 1e-10, 1),
                  znd::DomainError);
}

TEST_CASE("shock residual vanishes for admissible parameters") {
  CHECK(znd::rh_residual(p0()) < 1e-14);
  CHECK(znd::rh_residual(p1()) < 1e-14);
  znd::ParamSampler sampler(99u);
  for (int i = 0; i < 50; ++i) {
    CHECK(znd::rh_residual(sampler.draw()) < 1e-12);
  }
}

TEST_CASE("shock residual detects corrupted wave speed") {
  const DetonationParams good = p0();
  const DetonationParams bad = DetonationParams::unchecked(
      good.u_plus(), good.u_star(), good.q(), good.k(), good.u_i(),
      good.s() * 1.01, good.u_minus());
  CHECK(znd::rh_residual(bad) > 1e-3);
}
