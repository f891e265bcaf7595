// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Runs against the two reference waves
//   P0: u+=0,   u*=2,   q=0.3, k=1, u_i=1.2
//   P1: u+=0.5, u*=1.5, q=0.1, k=2, u_i=1.0
// plus randomized draws and the CLI reproduce bundle.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "znd/evans.hpp"
#include "znd/lopatinski.hpp"
#include "znd/params.hpp"
#include "znd/profile.hpp"
#include "znd/random.hpp"
#include "znd/simulation.hpp"
#include "znd/stability.hpp"

namespace fs = std::filesystem;
using znd::Complex;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int g_failures = 0;

template <class Fn>
void criterion(int idx, const char* name, double budget_s, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (budget_s > 0.0 && dt >= budget_s) {
    out.ok = false;
    out.detail += " [over time budget]";
  }
  std::printf("%s  %2d  %-38s  %7.2f s  %s\n", out.ok ? "PASS" : "FAIL", idx,
              name, dt, out.detail.c_str());
  std::fflush(stdout);
  if (!out.ok) ++g_failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

znd::DetonationParams wave_p0() {
  return znd::build_params(0.0, 2.0, 0.3, 1.0, 1.2);
}

znd::DetonationParams wave_p1() {
  return znd::build_params(0.5, 1.5, 0.1, 2.0, 1.0);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) return "<read error>";
  return ss.str();
}

// 1. Closed-form profile vs independent ODE integration on [-30, 0]:
//    max abs error <= 1e-8, endpoint (u*, 1) to 1e-10, RH residual <= 1e-12.
Outcome check_profile() {
  double worst_abs = 0.0, worst_end = 0.0, worst_rh = 0.0;
  for (const auto& p : {wave_p0(), wave_p1()}) {
    const auto samples = znd::integrate_profile_oracle(p, 30.0, 1e-10);
    for (const auto& pt : samples) {
      const auto ref = znd::profile_smooth(p, pt.xi);
      worst_abs = std::max(worst_abs, std::abs(pt.u_bar - ref.u_bar));
      worst_abs = std::max(worst_abs, std::abs(pt.z_bar - ref.z_bar));
    }
    // endpoint from a tighter run: the 1e-10 integration keeps ~1e-10
    // relative error, right at the endpoint tolerance
    const auto tight = znd::integrate_profile_oracle(p, 30.0, 1e-12, 2);
    worst_end = std::max(worst_end, std::abs(tight.back().u_bar - p.u_star()));
    worst_end = std::max(worst_end, std::abs(tight.back().z_bar - 1.0));
    worst_rh = std::max(worst_rh, znd::rh_residual(p));
  }
  const bool ok = worst_abs <= 1e-8 && worst_end <= 1e-10 && worst_rh <= 1e-12;
  return {ok, "max_abs=" + fmt(worst_abs) + " endpoint=" + fmt(worst_end) +
                  " rh=" + fmt(worst_rh)};
}

// 2. Quadrature Psi(0) against ((s-u+)-(u_- -s))/(qk), 1e-10 relative,
//    under 0.1 s per wave.
Outcome check_psi_zero() {
  double worst_rel = 0.0, worst_time = 0.0;
  for (const auto& p : {wave_p0(), wave_p1()}) {
    const double exact =
        ((p.s() - p.u_plus()) - (p.u_minus() - p.s())) / (p.q() * p.k());
    const auto t0 = std::chrono::steady_clock::now();
    const Complex got = znd::psi(p, Complex(0.0, 0.0)).value;
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    worst_rel = std::max(worst_rel, std::abs(got - exact) / exact);
    worst_time = std::max(worst_time, dt);
  }
  const bool ok = worst_rel <= 1e-10 && worst_time < 0.1;
  return {ok,
          "rel=" + fmt(worst_rel) + " slowest=" + fmt(worst_time) + " s"};
}

// 3. Closed form vs ODE shooting oracle on the 9x9 grid Re in [0,5],
//    Im in [-5,5], L=40: relative <= 1e-4 off zero, absolute <= 1e-8 at 0.
Outcome check_two_methods() {
  double worst_rel = 0.0, abs_at_zero = 0.0;
  for (const auto& p : {wave_p0(), wave_p1()}) {
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        const Complex lam(5.0 * i / 8.0, -5.0 + 10.0 * j / 8.0);
        const Complex dc = znd::det_closed_form(p, lam);
        const Complex dd = znd::det_ode(p, lam, 40.0);
        const double err = std::abs(dd - dc);
        if (lam == Complex(0.0, 0.0))
          abs_at_zero = std::max(abs_at_zero, err);
        else
          worst_rel = std::max(worst_rel, err / std::abs(dc));
      }
    }
  }
  const bool ok = worst_rel <= 1e-4 && abs_at_zero <= 1e-8;
  return {ok, "max_rel=" + fmt(worst_rel) + " abs_at_0=" + fmt(abs_at_zero)};
}

// 4. Condition (D) for P0, P1 and the 27-point sweep: windings (0, 1) and
//    verdict StableConditionD in all 29 cases.
Outcome check_condition_d() {
  int stable = 0, total = 0;
  auto tally = [&](const znd::StabilityReport& rep) {
    ++total;
    if (rep.winding_open_half_plane == 0 && rep.winding_small_circle == 1 &&
        rep.verdict == znd::Verdict::StableConditionD)
      ++stable;
  };
  tally(znd::verify_condition_D(wave_p0()));
  tally(znd::verify_condition_D(wave_p1()));
  znd::SweepSpec spec;
  spec.u_plus = {0.0, 0.2, 0.5};
  spec.u_star = {2.0};
  spec.q_fraction = {0.1, 0.5, 0.9};
  spec.k = {0.1, 1.0, 10.0};
  for (const auto& row : znd::parameter_sweep(spec)) {
    if (row.ok && row.report)
      tally(*row.report);
    else
      ++total;
  }
  const bool ok = stable == total && total == 29;
  return {ok, std::to_string(stable) + "/" + std::to_string(total) +
                  " StableConditionD with windings (0,1)"};
}

// 5. Finite-difference D'(0) equals u_- - u_+ - q to 1e-8 relative.
Outcome check_simple_zero() {
  double worst_rel = 0.0;
  for (const auto& p : {wave_p0(), wave_p1()}) {
    const double h = 1e-5;
    const Complex dp = znd::det_closed_form(p, Complex(h, 0.0));
    const Complex dm = znd::det_closed_form(p, Complex(-h, 0.0));
    const double fd = std::real(dp - dm) / (2.0 * h);
    worst_rel =
        std::max(worst_rel, std::abs(fd - znd::coeff_floor(p)) /
                                znd::coeff_floor(p));
  }
  return {worst_rel <= 1e-8, "rel=" + fmt(worst_rel)};
}

// 6. Bound chain over 1000 admissible draws x 25 frequencies with
//    Re >= 0, |lambda| <= 10k: |Psi| <= Psi(0) + 1e-9 and the real part
//    of the large-|lambda| coefficient stays positive.
Outcome check_bound_chain() {
  znd::ParamSampler sampler(20250819u);
  double min_margin = 1e300, min_coeff = 1e300;
  for (int d = 0; d < 1000; ++d) {
    const auto p = sampler.draw();
    const double cap = znd::psi_max(p);
    for (int j = 0; j < 25; ++j) {
      const Complex lam = sampler.draw_lambda(10.0 * p.k());
      const Complex ps = znd::psi(p, lam).value;
      min_margin = std::min(min_margin, cap + 1e-9 - std::abs(ps));
      const Complex coeff =
          p.delta_u() - p.q() - p.q() * p.k() * ps;
      min_coeff = std::min(min_coeff, coeff.real());
    }
  }
  const bool ok = min_margin >= 0.0 && min_coeff > 0.0;
  return {ok, "min |Psi| margin=" + fmt(min_margin) +
                  " min Re coeff=" + fmt(min_coeff)};
}

// 7. Conjugate symmetry of D on 100 random frequencies.
Outcome check_conjugate_symmetry() {
  znd::ParamSampler sampler(7u);
  const auto p = wave_p0();
  double worst = 0.0;
  for (int j = 0; j < 100; ++j) {
    const Complex lam = sampler.draw_lambda(10.0 * p.k());
    const Complex d = znd::det_closed_form(p, lam);
    const Complex dconj = znd::det_closed_form(p, std::conj(lam));
    worst = std::max(worst,
                     std::abs(dconj - std::conj(d)) / (1.0 + std::abs(d)));
  }
  return {worst <= 1e-12, "max scaled defect=" + fmt(worst)};
}

// 8. Windings for P0 survive doubling the contour sampling and halving
//    the indentation radius.
Outcome check_winding_robustness() {
  const auto p = wave_p0();
  znd::VerifyOptions dense;
  dense.n0 = 128;
  znd::VerifyOptions narrow;
  narrow.indent_r =
      0.5 * znd::default_indent_radius(p, znd::radius_bound(p));
  int half[3], circ[3], i = 0;
  for (const auto& opt :
       {znd::VerifyOptions{}, dense, narrow}) {
    const auto rep = znd::verify_condition_D(p, opt);
    half[i] = rep.winding_open_half_plane;
    circ[i] = rep.winding_small_circle;
    ++i;
  }
  const bool ok = half[0] == 0 && circ[0] == 1 && half[1] == half[0] &&
                  circ[1] == circ[0] && half[2] == half[0] &&
                  circ[2] == circ[0];
  std::ostringstream ss;
  ss << "windings (" << half[0] << "," << circ[0] << ") (" << half[1] << ","
     << circ[1] << ") (" << half[2] << "," << circ[2] << ")";
  return {ok, ss.str()};
}

// 9. Time-domain sanity: perturbed P0 (amplitude 0.05) on 2000 cells
//    decays to half its initial distance by T=30, while the unperturbed
//    control drifts less than 20% of that initial distance.
Outcome check_time_domain() {
  const auto p = wave_p0();
  const znd::GridSpec grid;
  znd::PerturbationSpec bump;
  bump.amplitude = 0.05;
  const auto perturbed = znd::run_experiment(p, grid, bump, 30.0);
  const double d0 = perturbed.series.front().distance;
  const double dT = perturbed.series.back().distance;
  const auto control =
      znd::run_experiment(p, grid, znd::PerturbationSpec{}, 30.0);
  const double drift = control.series.back().distance;
  const bool ok = dT <= 0.5 * d0 && drift < 0.2 * d0;
  return {ok, "d0=" + fmt(d0) + " dT=" + fmt(dT) + " drift=" + fmt(drift)};
}

// 10. Two CLI reproduce runs in fresh directories emit byte-identical
//     manifests (and identical CSV/JSON outputs).
Outcome check_determinism() {
  const fs::path base =
      fs::temp_directory_path() /
      ("znd_accept_" + std::to_string(::getpid()));
  const fs::path dir_a = base / "a";
  const fs::path dir_b = base / "b";
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);
  auto run = [&](const fs::path& dir) {
    const std::string cmd = std::string("\"") + ZND_CLI_PATH +
                            "\" reproduce --out \"" + dir.string() +
                            "\" > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  const int rc_a = run(dir_a);
  const int rc_b = run(dir_b);
  if (rc_a != 0 || rc_b != 0) {
    fs::remove_all(base);
    return {false, "reproduce exited " + std::to_string(rc_a) + " and " +
                       std::to_string(rc_b)};
  }
  std::string mismatch;
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const auto name = entry.path().filename();
    ++compared;
    if (slurp(entry.path()) != slurp(dir_b / name)) {
      mismatch += " ";
      mismatch += name.string();
    }
  }
  fs::remove_all(base);
  if (!mismatch.empty()) return {false, "differ:" + mismatch};
  if (compared < 7)
    return {false, "only " + std::to_string(compared) + " outputs found"};
  return {true, std::to_string(compared) + " files byte-identical"};
}

}  // namespace

int main() {
  std::printf("acceptance: ZND detonation stability artifact\n");
  criterion(1, "profile closed form vs ODE oracle", 1.0, check_profile);
  criterion(2, "Psi(0) quadrature vs exact value", 0.0, check_psi_zero);
  criterion(3, "determinant two-method agreement", 10.0, check_two_methods);
  criterion(4, "condition (D) on P0, P1, 27-pt sweep", 60.0,
            check_condition_d);
  criterion(5, "simple zero: FD D'(0) vs u_- - u_+ - q", 0.0,
            check_simple_zero);
  criterion(6, "Psi bound chain, 1000 draws x 25", 60.0, check_bound_chain);
  criterion(7, "conjugate symmetry of D", 0.0, check_conjugate_symmetry);
  criterion(8, "winding robustness to contour params", 0.0,
            check_winding_robustness);
  criterion(9, "time-domain decay and control drift", 60.0,
            check_time_domain);
  criterion(10, "reproduce determinism (byte-identical)", 0.0,
            check_determinism);
  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
