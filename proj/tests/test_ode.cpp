#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "znd/ode.hpp"

using znd::integrate_ode;
using znd::OdeOptions;

TEST_CASE("exponential growth to machine-level accuracy") {
  auto rhs = [](double, const std::vector<double>& y) {
    return std::vector<double>{y[0]};
  };
  OdeOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-14;
  auto r = integrate_ode(rhs, std::vector<double>{1.0}, 0.0, 1.0, opt);
  CHECK(std::abs(r.final_state[0] - std::exp(1.0)) < 1e-10);
  CHECK(r.steps_accepted > 0);
}

TEST_CASE("integration backwards in time") {
  auto rhs = [](double, const std::vector<double>& y) {
    return std::vector<double>{y[0]};
  };
  auto r = integrate_ode(rhs, std::vector<double>{1.0}, 0.0, -1.0);
  CHECK(std::abs(r.final_state[0] - std::exp(-1.0)) < 1e-10);
}

TEST_CASE("harmonic oscillator returns to its initial state") {
  auto rhs = [](double, const std::vector<double>& y) {
    return std::vector<double>{y[1], -y[0]};
  };
  OdeOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-13;
  auto r = integrate_ode(rhs, std::vector<double>{1.0, 0.0}, 0.0, 2.0 * M_PI, opt);
  CHECK(std::abs(r.final_state[0] - 1.0) < 1e-8);
  CHECK(std::abs(r.final_state[1]) < 1e-8);
}

TEST_CASE("complex state vectors integrate along the unit circle") {
  using C = std::complex<double>;
  auto rhs = [](double, const std::vector<C>& y) {
    return std::vector<C>{C(0.0, 1.0) * y[0]};
  };
  auto r = integrate_ode(rhs, std::vector<C>{C(1.0, 0.0)}, 0.0, 1.0);
  CHECK(std::abs(r.final_state[0] - std::exp(C(0.0, 1.0))) < 1e-9);
}

TEST_CASE("tolerance controls the achieved error") {
  auto rhs = [](double t, const std::vector<double>& y) {
    return std::vector<double>{std::cos(t) * y[0]};
  };
  const double truth = std::exp(std::sin(3.0));
  OdeOptions loose;
  loose.rel_tol = 1e-5;
  loose.abs_tol = 1e-7;
  OdeOptions tight;
  tight.rel_tol = 1e-12;
  tight.abs_tol = 1e-14;
  auto rl = integrate_ode(rhs, std::vector<double>{1.0}, 0.0, 3.0, loose);
  auto rt = integrate_ode(rhs, std::vector<double>{1.0}, 0.0, 3.0, tight);
  CHECK(std::abs(rl.final_state[0] - truth) < 1e-4);
  CHECK(std::abs(rt.final_state[0] - truth) < 1e-10);
  CHECK(std::abs(rt.final_state[0] - truth) <=
        std::abs(rl.final_state[0] - truth) + 1e-14);
}

TEST_CASE("step budget exhaustion raises") {
  auto rhs = [](double t, const std::vector<double>& y) {
    return std::vector<double>{1e6 * std::cos(1e6 * t) + 0.0 * y[0]};
  };
  OdeOptions opt;
  opt.max_steps = 10;
  CHECK_THROWS_AS(integrate_ode(rhs, std::vector<double>{0.0}, 0.0, 1.0, opt),
                  znd::ConvergenceError);
}

TEST_CASE("finite-time blowup is caught, not looped on") {
  auto rhs = [](double, const std::vector<double>& y) {
    return std::vector<double>{y[0] * y[0]};
  };
  // solution 1/(1-t) blows up at t = 1
  CHECK_THROWS_AS(integrate_ode(rhs, std::vector<double>{1.0}, 0.0, 1.5), znd::Error);
}

TEST_CASE("zero-length integration is the identity") {
  auto rhs = [](double, const std::vector<double>& y) {
    return std::vector<double>{y[0]};
  };
  auto r = integrate_ode(rhs, std::vector<double>{3.25}, 2.0, 2.0);
  CHECK(r.final_state[0] == 3.25);
  CHECK(r.steps_accepted == 0);
}

TEST_CASE("non-finite initial state is rejected") {
  auto rhs = [](double, const std::vector<double>& y) {
    return std::vector<double>{y[0]};
  };
  CHECK_THROWS_AS(integrate_ode(rhs, std::vector<double>{std::nan("")}, 0.0, 1.0),
                  znd::NonFiniteState);
}

TEST_CASE("stiff linear decay stays stable through step control") {
  auto rhs = [](double, const std::vector<double>& y) {
    return std::vector<double>{-50.0 * y[0]};
  };
  auto r = integrate_ode(rhs, std::vector<double>{1.0}, 0.0, 2.0);
  CHECK(std::abs(r.final_state[0] - std::exp(-100.0)) < 1e-12);
  CHECK(r.steps_rejected < r.steps_accepted + 100);
}
