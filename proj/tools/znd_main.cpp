#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "znd/znd.hpp"

namespace fs = std::filesystem;
using njson = nlohmann::json;
using znd::Complex;

namespace {

// Configuration and usage problems exit with code 2; IO failures with 1;
// numerical inconclusiveness (quadrature/refinement/integration giving up)
// with 3.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Ctx {
  njson config;
  fs::path out = ".";
  double tol = 0.0;  // 0 = per-command default
  int threads = 1;
  std::uint64_t seed = 12345;
  bool plot = false;
  bool trace = false;
};

double tol_or(const Ctx& ctx, double dflt) {
  return ctx.tol > 0.0 ? ctx.tol : dflt;
}

njson load_config(const std::string& path) {
  if (path.empty())
    throw UsageError("this subcommand requires --config <file.json>");
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  try {
    return njson::parse(in);
  } catch (const njson::parse_error& e) {
    throw UsageError(std::string("malformed config JSON: ") + e.what());
  }
}

void check_keys(const njson& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    throw UsageError("config section '" + ctx + "' must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!ok.count(item.key()))
      throw UsageError("unknown config field '" + ctx + "." + item.key() +
                       "'");
}

const njson& need_section(const njson& root, const char* key) {
  if (!root.contains(key))
    throw UsageError(std::string("config is missing the '") + key +
                     "' section");
  return root.at(key);
}

double need_num(const njson& obj, const std::string& ctx, const char* key) {
  if (!obj.contains(key))
    throw UsageError("config is missing '" + ctx + "." + key + "'");
  const njson& v = obj.at(key);
  if (!v.is_number())
    throw UsageError("config field '" + ctx + "." + key +
                     "' must be a number");
  return v.get<double>();
}

double opt_num(const njson& obj, const std::string& ctx, const char* key,
               double dflt) {
  return obj.contains(key) ? need_num(obj, ctx, key) : dflt;
}

long opt_int(const njson& obj, const std::string& ctx, const char* key,
             long dflt) {
  if (!obj.contains(key)) return dflt;
  const njson& v = obj.at(key);
  if (!v.is_number_integer())
    throw UsageError("config field '" + ctx + "." + key +
                     "' must be an integer");
  return v.get<long>();
}

std::vector<double> need_num_array(const njson& obj, const std::string& ctx,
                                   const char* key) {
  if (!obj.contains(key))
    throw UsageError("config is missing '" + ctx + "." + key + "'");
  const njson& v = obj.at(key);
  if (!v.is_array())
    throw UsageError("config field '" + ctx + "." + key +
                     "' must be an array of numbers");
  std::vector<double> out;
  for (const njson& x : v) {
    if (!x.is_number())
      throw UsageError("config field '" + ctx + "." + key +
                       "' must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

znd::DetonationParams params_from_config(const njson& root) {
  const njson& p = need_section(root, "params");
  check_keys(p, "params", {"u_plus", "u_star", "q", "k", "u_i"});
  return znd::build_params(
      need_num(p, "params", "u_plus"), need_num(p, "params", "u_star"),
      need_num(p, "params", "q"), need_num(p, "params", "k"),
      need_num(p, "params", "u_i"));
}

struct LambdaGrid {
  double re_min = 0.0, re_max = 5.0;
  long n_re = 9;
  double im_min = -5.0, im_max = 5.0;
  long n_im = 9;

  std::vector<Complex> points() const {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n_re * n_im));
    for (long i = 0; i < n_re; ++i) {
      const double re =
          n_re > 1 ? re_min + (re_max - re_min) * i / (n_re - 1) : re_min;
      for (long j = 0; j < n_im; ++j) {
        const double im =
            n_im > 1 ? im_min + (im_max - im_min) * j / (n_im - 1) : im_min;
        out.emplace_back(re, im);
      }
    }
    return out;
  }
};

LambdaGrid grid_from_config(const njson& root) {
  const njson& g = need_section(root, "lambda_grid");
  check_keys(g, "lambda_grid",
             {"re_min", "re_max", "n_re", "im_min", "im_max", "n_im"});
  LambdaGrid lg;
  lg.re_min = need_num(g, "lambda_grid", "re_min");
  lg.re_max = need_num(g, "lambda_grid", "re_max");
  lg.n_re = opt_int(g, "lambda_grid", "n_re", 9);
  lg.im_min = need_num(g, "lambda_grid", "im_min");
  lg.im_max = need_num(g, "lambda_grid", "im_max");
  lg.n_im = opt_int(g, "lambda_grid", "n_im", 9);
  if (lg.n_re < 1 || lg.n_im < 1)
    throw UsageError("lambda_grid sizes must be >= 1");
  return lg;
}

znd::VerifyOptions verify_opts_from_config(const njson& root, double tol) {
  znd::VerifyOptions opt;
  opt.rel_tol = tol;
  if (root.contains("verify")) {
    const njson& v = root.at("verify");
    check_keys(v, "verify", {"n0", "max_depth", "indent_r", "radius_R"});
    opt.n0 = static_cast<int>(opt_int(v, "verify", "n0", 64));
    opt.max_depth = static_cast<int>(opt_int(v, "verify", "max_depth", 48));
    opt.indent_r = opt_num(v, "verify", "indent_r", 0.0);
    opt.radius_R = opt_num(v, "verify", "radius_R", 0.0);
  }
  return opt;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void emit_plot_script(const Ctx& ctx, const std::string& name,
                      const std::string& body) {
  if (!ctx.plot) return;
  const std::string script =
      "set datafile separator \",\"\nset key autotitle columnhead\n" + body;
  znd::write_file_atomic(ctx.out / ("plot_" + name + ".gp"), script);
}

// ---------------------------------------------------------------------------

int cmd_params(const Ctx& ctx) {
  const znd::DetonationParams p = params_from_config(ctx.config);
  check_keys(ctx.config, "config", {"params"});
  znd::Json j = znd::params_to_json(p);
  j.set("c_minus", znd::Json::number(p.c_minus()));
  j.set("q_max", znd::Json::number(znd::q_max(p.u_plus(), p.u_star())));
  j.set("psi_max", znd::Json::number(znd::psi_max(p)));
  j.set("coeff_floor", znd::Json::number(znd::coeff_floor(p)));
  j.set("radius_R_base", znd::Json::number(znd::radius_bound_base(p)));
  j.set("radius_R", znd::Json::number(znd::radius_bound(p)));
  const std::string text = j.dump();
  znd::write_file_atomic(ctx.out / "params.json", text);
  std::cout << text;
  return 0;
}

int cmd_profile(const Ctx& ctx) {
  check_keys(ctx.config, "config", {"params", "grid"});
  const znd::DetonationParams p = params_from_config(ctx.config);
  const njson& g = need_section(ctx.config, "grid");
  check_keys(g, "grid", {"xi_min", "xi_max", "n"});
  const double xi_min = opt_num(g, "grid", "xi_min", -10.0);
  const double xi_max = opt_num(g, "grid", "xi_max", 2.0);
  const long n = opt_int(g, "grid", "n", 241);
  if (!(xi_min < xi_max) || n < 2)
    throw UsageError("grid requires xi_min < xi_max and n >= 2");

  znd::CsvBuilder csv({"xi", "u_bar", "z_bar"});
  for (long i = 0; i < n; ++i) {
    const double xi = xi_min + (xi_max - xi_min) * i / (n - 1);
    const znd::ProfilePoint pt = znd::profile_at(p, xi);
    csv.row({znd::fmt_g17(xi), znd::fmt_g17(pt.u_bar),
             znd::fmt_g17(pt.z_bar)});
  }
  znd::write_file_atomic(ctx.out / "profile.csv", csv.dump());
  emit_plot_script(ctx, "profile",
                   "plot 'profile.csv' using 1:2 with lines, "
                   "'profile.csv' using 1:3 with lines\n");
  std::cout << "wrote profile.csv (" << n << " rows)\n";
  return 0;
}

int cmd_det(const Ctx& ctx) {
  check_keys(ctx.config, "config", {"params", "lambda_grid"});
  const znd::DetonationParams p = params_from_config(ctx.config);
  const LambdaGrid grid = grid_from_config(ctx.config);
  const double tol = tol_or(ctx, 1e-10);

  znd::CsvBuilder csv({"lambda_re", "lambda_im", "D_re", "D_im", "abs_D"});
  for (const Complex lam : grid.points()) {
    const Complex d = znd::det_closed_form(p, lam, tol);
    csv.row({znd::fmt_g17(lam.real()), znd::fmt_g17(lam.imag()),
             znd::fmt_g17(d.real()), znd::fmt_g17(d.imag()),
             znd::fmt_g17(std::abs(d))});
  }
  znd::write_file_atomic(ctx.out / "det.csv", csv.dump());
  emit_plot_script(ctx, "det",
                   "set dgrid3d\nsplot 'det.csv' using 1:2:5 with lines\n");
  std::cout << "wrote det.csv (" << grid.n_re * grid.n_im << " rows)\n";
  return 0;
}

int cmd_psi(const Ctx& ctx) {
  check_keys(ctx.config, "config", {"params", "lambda_grid"});
  const znd::DetonationParams p = params_from_config(ctx.config);
  const LambdaGrid grid = grid_from_config(ctx.config);
  const double tol = tol_or(ctx, 1e-10);

  znd::CsvBuilder csv(
      {"lambda_re", "lambda_im", "psi_re", "psi_im", "abs_psi"});
  for (const Complex lam : grid.points()) {
    const Complex v = znd::psi(p, lam, tol).value;
    csv.row({znd::fmt_g17(lam.real()), znd::fmt_g17(lam.imag()),
             znd::fmt_g17(v.real()), znd::fmt_g17(v.imag()),
             znd::fmt_g17(std::abs(v))});
  }
  znd::write_file_atomic(ctx.out / "psi.csv", csv.dump());
  emit_plot_script(ctx, "psi",
                   "set dgrid3d\nsplot 'psi.csv' using 1:2:5 with lines\n");
  std::cout << "wrote psi.csv (" << grid.n_re * grid.n_im << " rows)\n";
  return 0;
}

int cmd_oracle(const Ctx& ctx) {
  check_keys(ctx.config, "config", {"params", "lambda_grid", "L"});
  const znd::DetonationParams p = params_from_config(ctx.config);
  const LambdaGrid grid = grid_from_config(ctx.config);
  const double L = opt_num(ctx.config, "config", "L", 0.0);
  const double tol = tol_or(ctx, 1e-10);

  const znd::DiscrepancyTable table =
      znd::compare_methods(p, grid.points(), L, tol);
  znd::CsvBuilder csv({"lambda_re", "lambda_im", "D_closed_re", "D_closed_im",
                       "D_ode_re", "D_ode_im", "rel_err"});
  const double nan = std::nan("");
  for (const znd::DiscrepancyEntry& e : table.entries) {
    csv.row({znd::fmt_g17(e.lambda.real()), znd::fmt_g17(e.lambda.imag()),
             znd::fmt_g17(e.failed ? nan : e.d_closed.real()),
             znd::fmt_g17(e.failed ? nan : e.d_closed.imag()),
             znd::fmt_g17(e.failed ? nan : e.d_ode.real()),
             znd::fmt_g17(e.failed ? nan : e.d_ode.imag()),
             znd::fmt_g17(e.failed ? nan : e.rel_err)});
  }
  znd::write_file_atomic(ctx.out / "oracle.csv", csv.dump());
  emit_plot_script(ctx, "oracle",
                   "set dgrid3d\nset logscale z\n"
                   "splot 'oracle.csv' using 1:2:7 with lines\n");
  std::cout << "wrote oracle.csv: max rel discrepancy "
            << znd::fmt_g17(table.max_rel) << ", median "
            << znd::fmt_g17(table.median_rel) << "\n";
  return 0;
}

void write_trace(const Ctx& ctx, const znd::DetonationParams& p,
                 const znd::Contour& c, double tol, const std::string& name) {
  znd::CsvBuilder csv({"lambda_re", "lambda_im", "D_re", "D_im", "cum_arg"});
  double cum = 0.0;
  Complex prev;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const Complex lam = c.points[i];
    const Complex d = znd::det_closed_form(p, lam, tol);
    if (i > 0) cum += std::arg(d / prev);
    prev = d;
    csv.row({znd::fmt_g17(lam.real()), znd::fmt_g17(lam.imag()),
             znd::fmt_g17(d.real()), znd::fmt_g17(d.imag()),
             znd::fmt_g17(cum)});
  }
  znd::write_file_atomic(ctx.out / ("trace_" + name + ".csv"), csv.dump());
}

int cmd_verify(const Ctx& ctx) {
  check_keys(ctx.config, "config", {"params", "verify"});
  const znd::DetonationParams p = params_from_config(ctx.config);
  const double tol = tol_or(ctx, 1e-10);
  const znd::VerifyOptions opt = verify_opts_from_config(ctx.config, tol);

  const znd::StabilityReport rep = znd::verify_condition_D(p, opt);
  znd::emit_report(rep, ctx.out / "report.json");
  if (ctx.trace) {
    auto [half, circle] =
        znd::build_contours(p, rep.indent_r, rep.radius_R, opt.n0);
    write_trace(ctx, p, half, tol, "half_plane");
    write_trace(ctx, p, circle, tol, "small_circle");
    emit_plot_script(ctx, "trace",
                     "plot 'trace_half_plane.csv' using 3:4 with lines, "
                     "'trace_small_circle.csv' using 3:4 with lines\n");
  }
  std::cout << "verdict " << znd::verdict_name(rep.verdict) << ", windings ("
            << rep.winding_open_half_plane << "," << rep.winding_small_circle
            << ")\n";
  switch (rep.verdict) {
    case znd::Verdict::StableConditionD: return 0;
    case znd::Verdict::Violated: return 1;
    default: return 3;
  }
}

struct SweepOutcome {
  std::string csv;
  std::size_t n = 0, stable = 0, inconclusive = 0, failed = 0;
};

SweepOutcome run_sweep_rows(const std::vector<znd::SweepRow>& rows) {
  SweepOutcome out;
  znd::CsvBuilder csv({"index", "u_plus", "u_star", "q", "k", "u_i",
                       "verdict", "winding_half_plane",
                       "winding_small_circle", "coeff_floor", "psi_max",
                       "min_abs_D", "error"});
  for (const znd::SweepRow& row : rows) {
    ++out.n;
    std::string verdict = "Error", wh = "", wc = "", cf = "", pm = "",
                ma = "";
    if (row.ok && row.report) {
      const znd::StabilityReport& r = *row.report;
      verdict = znd::verdict_name(r.verdict);
      wh = std::to_string(r.winding_open_half_plane);
      wc = std::to_string(r.winding_small_circle);
      cf = znd::fmt_g17(r.coeff_floor);
      pm = znd::fmt_g17(r.psi_max);
      ma = znd::fmt_g17(r.min_abs_D);
      if (r.verdict == znd::Verdict::StableConditionD) ++out.stable;
      else if (r.verdict == znd::Verdict::Inconclusive) ++out.inconclusive;
    } else {
      ++out.failed;
    }
    csv.row({std::to_string(row.index), znd::fmt_g17(row.u_plus),
             znd::fmt_g17(row.u_star), znd::fmt_g17(row.q),
             znd::fmt_g17(row.k), znd::fmt_g17(row.u_i), verdict, wh, wc, cf,
             pm, ma, csv_quote(row.error)});
  }
  out.csv = csv.dump();
  return out;
}

int cmd_sweep(const Ctx& ctx) {
  check_keys(ctx.config, "config", {"sweep", "verify"});
  const njson& sj = need_section(ctx.config, "sweep");
  check_keys(sj, "sweep",
             {"u_plus", "u_star", "q_fraction", "k", "u_i_fraction",
              "random_draws"});
  const double tol = tol_or(ctx, 1e-6);

  znd::SweepSpec spec;
  spec.u_plus = need_num_array(sj, "sweep", "u_plus");
  spec.u_star = need_num_array(sj, "sweep", "u_star");
  spec.q_fraction = need_num_array(sj, "sweep", "q_fraction");
  spec.k = need_num_array(sj, "sweep", "k");
  spec.u_i_fraction = opt_num(sj, "sweep", "u_i_fraction", 0.5);
  spec.verify = verify_opts_from_config(ctx.config, tol);

  std::vector<znd::SweepRow> rows = znd::parameter_sweep(spec, ctx.threads);

  const long draws = opt_int(sj, "sweep", "random_draws", 0);
  znd::ParamSampler sampler(ctx.seed);
  for (long i = 0; i < draws; ++i) {
    znd::SweepRow row;
    row.index = rows.size();
    try {
      const znd::DetonationParams p = sampler.draw();
      row.u_plus = p.u_plus();
      row.u_star = p.u_star();
      row.q = p.q();
      row.k = p.k();
      row.u_i = p.u_i();
      row.report = znd::verify_condition_D(p, spec.verify);
      row.ok = true;
    } catch (const znd::Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  const SweepOutcome out = run_sweep_rows(rows);
  znd::write_file_atomic(ctx.out / "sweep.csv", out.csv);
  std::cout << "sweep: " << out.stable << "/" << out.n
            << " StableConditionD\n";
  if (out.stable == out.n) return 0;
  return out.inconclusive > 0 && out.failed == 0 &&
                 out.stable + out.inconclusive == out.n
             ? 3
             : 1;
}

int cmd_simulate(const Ctx& ctx) {
  check_keys(ctx.config, "config", {"params", "sim"});
  const znd::DetonationParams p = params_from_config(ctx.config);
  njson sim = ctx.config.contains("sim") ? ctx.config.at("sim")
                                         : njson::object();
  check_keys(sim, "sim",
             {"xi_left", "xi_right", "n_cells", "cfl", "horizon", "amplitude",
              "width", "center", "record_every", "snapshot_every"});
  znd::GridSpec grid;
  grid.xi_left = opt_num(sim, "sim", "xi_left", -15.0);
  grid.xi_right = opt_num(sim, "sim", "xi_right", 2.5);
  grid.n_cells =
      static_cast<std::size_t>(opt_int(sim, "sim", "n_cells", 2000));
  znd::PerturbationSpec pert;
  pert.amplitude = opt_num(sim, "sim", "amplitude", 0.05);
  pert.width = opt_num(sim, "sim", "width", 1.0);
  pert.center = opt_num(sim, "sim", "center", -3.0);
  const double cfl = opt_num(sim, "sim", "cfl", 0.4);
  const double horizon = opt_num(sim, "sim", "horizon", 30.0);
  const long record_every = opt_int(sim, "sim", "record_every", 50);
  const long snapshot_every = opt_int(sim, "sim", "snapshot_every", 0);
  if (record_every < 1) throw UsageError("sim.record_every must be >= 1");

  znd::SimState st = znd::init_state(p, grid, pert, cfl);
  znd::CsvBuilder metrics({"t", "distance_to_orbit", "mass_residual"});
  znd::CsvBuilder snaps({"t", "xi", "u", "z"});
  auto record = [&]() {
    metrics.row({znd::fmt_g17(st.t),
                 znd::fmt_g17(znd::distance_to_orbit(st, p)),
                 znd::fmt_g17(st.mass_residual_accum)});
  };
  auto snapshot = [&]() {
    for (std::size_t i = 0; i < st.xi.size(); ++i)
      snaps.row({znd::fmt_g17(st.t), znd::fmt_g17(st.xi[i]),
                 znd::fmt_g17(st.u[i]), znd::fmt_g17(st.z[i])});
  };
  record();
  if (snapshot_every > 0) snapshot();
  long n = 0;
  while (st.t < horizon) {
    znd::step(st, p);
    ++n;
    if (n % record_every == 0 && st.t < horizon) record();
    if (snapshot_every > 0 && n % snapshot_every == 0 && st.t < horizon)
      snapshot();
  }
  record();
  if (snapshot_every > 0) snapshot();

  znd::write_file_atomic(ctx.out / "metrics.csv", metrics.dump());
  if (snapshot_every > 0)
    znd::write_file_atomic(ctx.out / "snapshots.csv", snaps.dump());
  emit_plot_script(ctx, "simulate",
                   "plot 'metrics.csv' using 1:2 with lines\n");
  std::cout << "simulated " << n << " steps to t=" << znd::fmt_g17(st.t)
            << "\n";
  return 0;
}

int cmd_reproduce(const Ctx& ctx) {
  const double tol = tol_or(ctx, 1e-10);
  const znd::DetonationParams p0 = znd::build_params(0.0, 2.0, 0.3, 1.0, 1.2);
  const znd::DetonationParams p1 = znd::build_params(0.5, 1.5, 0.1, 2.0, 1.0);
  znd::Json manifest = znd::Json::object();
  znd::Json outputs = znd::Json::array();
  bool all_stable = true;

  // profile two-method agreement
  znd::Json profile_j = znd::Json::object();
  {
    const znd::DetonationParams* ps[] = {&p0, &p1};
    const char* names[] = {"p0", "p1"};
    for (int i = 0; i < 2; ++i) {
      const auto samples = znd::integrate_profile_oracle(*ps[i], 30.0, 1e-10);
      double max_err = 0.0;
      znd::CsvBuilder csv({"xi", "u_closed", "u_ode", "z_closed", "z_ode"});
      for (const znd::ProfilePoint& pt : samples) {
        const znd::ProfilePoint cf = znd::profile_smooth(*ps[i], pt.xi);
        max_err = std::max(max_err, std::abs(pt.u_bar - cf.u_bar));
        max_err = std::max(max_err, std::abs(pt.z_bar - cf.z_bar));
        csv.row({znd::fmt_g17(pt.xi), znd::fmt_g17(cf.u_bar),
                 znd::fmt_g17(pt.u_bar), znd::fmt_g17(cf.z_bar),
                 znd::fmt_g17(pt.z_bar)});
      }
      const std::string file = std::string("profile_") + names[i] + ".csv";
      znd::write_file_atomic(ctx.out / file, csv.dump());
      outputs.push(znd::Json::string(file));
      znd::Json pj = znd::Json::object();
      pj.set("max_abs_err", znd::Json::number(max_err));
      pj.set("rh_residual", znd::Json::number(znd::rh_residual(*ps[i])));
      profile_j.set(names[i], std::move(pj));
    }
  }
  manifest.set("profile", std::move(profile_j));

  // closed form vs shooting oracle on the 5x5 grid
  znd::Json oracle_j = znd::Json::object();
  {
    LambdaGrid grid;
    grid.n_re = 5;
    grid.n_im = 5;
    const znd::DetonationParams* ps[] = {&p0, &p1};
    const char* names[] = {"p0", "p1"};
    for (int i = 0; i < 2; ++i) {
      const auto table = znd::compare_methods(*ps[i], grid.points(), 40.0,
                                              tol);
      double max_off_zero = 0.0, abs_at_zero = 0.0;
      for (const auto& e : table.entries) {
        if (std::abs(e.lambda) == 0.0) abs_at_zero = e.abs_err;
        else max_off_zero = std::max(max_off_zero, e.rel_err);
      }
      znd::Json oj = znd::Json::object();
      oj.set("max_rel_off_zero", znd::Json::number(max_off_zero));
      oj.set("abs_at_zero", znd::Json::number(abs_at_zero));
      oracle_j.set(names[i], std::move(oj));
    }
  }
  manifest.set("oracle", std::move(oracle_j));

  // condition (D) for P0, P1
  {
    znd::VerifyOptions opt;
    opt.rel_tol = tol;
    const znd::DetonationParams* ps[] = {&p0, &p1};
    const char* names[] = {"verify_p0", "verify_p1"};
    for (int i = 0; i < 2; ++i) {
      const znd::StabilityReport rep = znd::verify_condition_D(*ps[i], opt);
      const std::string file = std::string(names[i]) + ".json";
      znd::emit_report(rep, ctx.out / file);
      outputs.push(znd::Json::string(file));
      znd::Json vj = znd::Json::object();
      vj.set("verdict", znd::Json::string(znd::verdict_name(rep.verdict)));
      vj.set("winding_open_half_plane",
             znd::Json::integer(rep.winding_open_half_plane));
      vj.set("winding_small_circle",
             znd::Json::integer(rep.winding_small_circle));
      manifest.set(names[i], std::move(vj));
      all_stable =
          all_stable && rep.verdict == znd::Verdict::StableConditionD;
    }
  }

  // 27-point admissible sweep
  {
    znd::SweepSpec spec;
    spec.u_plus = {0.0, 0.2, 0.5};
    spec.u_star = {2.0};
    spec.q_fraction = {0.1, 0.5, 0.9};
    spec.k = {0.1, 1.0, 10.0};
    spec.verify.rel_tol = ctx.tol > 0.0 ? ctx.tol : 1e-6;
    const auto rows = znd::parameter_sweep(spec, ctx.threads);
    const SweepOutcome out = run_sweep_rows(rows);
    znd::write_file_atomic(ctx.out / "sweep.csv", out.csv);
    outputs.push(znd::Json::string("sweep.csv"));
    znd::Json swj = znd::Json::object();
    swj.set("points", znd::Json::integer(static_cast<long long>(out.n)));
    swj.set("stable", znd::Json::integer(static_cast<long long>(out.stable)));
    manifest.set("sweep", std::move(swj));
    all_stable = all_stable && out.stable == out.n;
  }

  // nonlinear decay run
  {
    znd::GridSpec grid;
    znd::PerturbationSpec pert;
    pert.amplitude = 0.05;
    const znd::ExperimentResult res =
        znd::run_experiment(p0, grid, pert, 30.0);
    znd::CsvBuilder csv({"t", "distance_to_orbit", "mass_residual"});
    for (const znd::MetricRow& row : res.series)
      csv.row({znd::fmt_g17(row.t), znd::fmt_g17(row.distance),
               znd::fmt_g17(row.mass_residual)});
    znd::write_file_atomic(ctx.out / "metrics.csv", csv.dump());
    outputs.push(znd::Json::string("metrics.csv"));
    znd::Json sj = znd::Json::object();
    sj.set("initial_distance", znd::Json::number(res.series.front().distance));
    sj.set("final_distance", znd::Json::number(res.series.back().distance));
    sj.set("decay_ratio",
           znd::Json::number(res.series.back().distance /
                             res.series.front().distance));
    manifest.set("simulate", std::move(sj));
  }

  manifest.set("outputs", std::move(outputs));
  manifest.set("seed",
               znd::Json::integer(static_cast<long long>(ctx.seed)));
  manifest.set("tol", znd::Json::number(tol));
  znd::write_file_atomic(ctx.out / "manifest.json", manifest.dump());
  std::cout << "wrote manifest.json; all verdicts stable: "
            << (all_stable ? "yes" : "no") << "\n";
  return all_stable ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ZND detonation profiles, Lopatinski determinant and "
               "spectral stability certification for Majda's model"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  Ctx ctx;
  app.add_option("--config", config_path, "JSON config file")
      ->envname("ZND_CONFIG");
  app.add_option("--out", out_dir, "output directory (default .)")
      ->envname("ZND_OUT");
  app.add_option("--tol", ctx.tol,
                 "relative tolerance; 0 picks the per-command default")
      ->envname("ZND_TOL");
  app.add_option("--threads", ctx.threads, "worker threads for sweeps")
      ->envname("ZND_THREADS");
  app.add_option("--seed", ctx.seed, "seed for randomized sweep draws")
      ->envname("ZND_SEED");
  app.add_flag("--plot-script", ctx.plot,
               "emit gnuplot scripts next to CSV outputs");

  auto* c_params = app.add_subcommand(
      "params", "validate a parameter set and print derived quantities");
  auto* c_profile =
      app.add_subcommand("profile", "sample the ZND profile to CSV");
  auto* c_det = app.add_subcommand(
      "det", "evaluate the Lopatinski determinant on a lambda grid");
  auto* c_psi = app.add_subcommand("psi", "evaluate Psi on a lambda grid");
  auto* c_oracle = app.add_subcommand(
      "oracle", "compare the closed form against the shooting oracle");
  auto* c_verify = app.add_subcommand(
      "verify", "certify spectral stability condition (D) by winding numbers");
  c_verify->add_flag("--trace", ctx.trace, "emit contour-trace CSVs");
  auto* c_sweep =
      app.add_subcommand("sweep", "verify condition (D) over a parameter grid");
  auto* c_simulate = app.add_subcommand(
      "simulate", "run the finite-volume perturbation experiment");
  auto* c_reproduce = app.add_subcommand(
      "reproduce", "run the full verification pipeline and write a manifest");
  for (auto* sub : {c_params, c_profile, c_det, c_psi, c_oracle, c_verify,
                    c_sweep, c_simulate, c_reproduce})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ctx.out = out_dir;
    if (ctx.threads < 1) throw UsageError("--threads must be >= 1");
    if (ctx.tol < 0.0 || ctx.tol >= 1.0)
      throw UsageError("--tol must lie in [0, 1)");
    // reproduce is self-contained; every other subcommand takes its input
    // from the config file
    ctx.config =
        c_reproduce->parsed() ? njson::object() : load_config(config_path);

    if (c_params->parsed()) return cmd_params(ctx);
    if (c_profile->parsed()) return cmd_profile(ctx);
    if (c_det->parsed()) return cmd_det(ctx);
    if (c_psi->parsed()) return cmd_psi(ctx);
    if (c_oracle->parsed()) return cmd_oracle(ctx);
    if (c_verify->parsed()) return cmd_verify(ctx);
    if (c_sweep->parsed()) return cmd_sweep(ctx);
    if (c_simulate->parsed()) return cmd_simulate(ctx);
    if (c_reproduce->parsed()) return cmd_reproduce(ctx);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const znd::AdmissibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const znd::GridError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const znd::CflViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const znd::GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const znd::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const znd::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const znd::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
