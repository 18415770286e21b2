#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "commands.hpp"
#include "options.hpp"
#include "pintconv/errors.hpp"
#include "pintconv/mgrit.hpp"
#include "pintconv/parallel.hpp"
#include "pintconv/registry.hpp"
#include "pintconv/text.hpp"

namespace pintconv::cli {

namespace {

struct SimulateOptions {
  CommonOptions common;
  std::string fine = "bwe";
  std::string coarse = "bwe";
  int k = 2;
  std::string relax = "f";
  int levels = 2;
  std::string ht = "1/1024";
  double t_final = 1.0;
  long n = 0;  // 0 derives N from T
  std::string spectrum = "spd";
  double w_max = 2.0;
  double xi_max = 0.0;  // when set the spectrum is fixed in xi instead of h_t*xi
  int modes = 48;
  double decades = 4.0;
  bool inject_argmax = false;
  int seeds = 1;
  double tol = 1e-13;
  int max_iters = 100;
  std::string theta = "1";
  std::string path = "diagonal";
  std::string sweep;
  std::string values;
};

RelaxationScheme parse_relax(const std::string& s) {
  if (s == "f" || s == "F") return RelaxationScheme::F;
  if (s == "fc" || s == "FC") return RelaxationScheme::FC;
  if (s == "fcf" || s == "FCF") return RelaxationScheme::FCF;
  throw ConfigError("relax must be f, fc or fcf, got '" + s + "'");
}

SpatialPath parse_path(const std::string& s) {
  if (s == "diagonal") return SpatialPath::diagonal;
  if (s == "matrix") return SpatialPath::matrix;
  throw ConfigError("path must be diagonal or matrix, got '" + s + "'");
}

/// One point of a run; the sweep parameter overrides one of these.
struct Point {
  double h_t;
  int k;
  int levels;
};

ModelProblem build_spectrum(const SimulateOptions& o, const Point& p) {
  const double xi_max = o.xi_max > 0.0 ? o.xi_max : o.w_max / p.h_t;
  if (o.spectrum == "spd") {
    auto prob = make_spd_interval(xi_max, o.modes, o.decades);
    if (!o.inject_argmax) return prob;
    // add the bound argmaxima that fall inside the window, so the worst mode is sampled
    std::vector<cplx> extra;
    for (auto r : {Relaxation::F, Relaxation::FCF}) {
      const auto c = sweep(BoundQuery::make(scheme(o.fine), scheme(o.coarse), p.k, r));
      const double xi = c.argmax_w / p.h_t;
      if (std::isfinite(xi) && xi < xi_max) extra.emplace_back(xi, 0.0);
    }
    return extra.empty() ? prob : prob.with_injected(extra);
  }
  if (o.spectrum == "skew") return make_skew_interval(xi_max, o.modes, o.decades);
  if (o.spectrum == "fd") return make_fd_diffusion(o.modes);
  if (o.spectrum == "advection") return make_skew_advection(o.modes, 1.0 / o.modes);
  if (o.spectrum.rfind("file:", 0) == 0) {
    std::ifstream is(o.spectrum.substr(5));
    if (!is) throw ConfigError("cannot open spectrum file '" + o.spectrum.substr(5) + "'");
    return read_spectrum_csv(is);
  }
  throw ConfigError("spectrum must be spd, skew, fd, advection or file:<path>, got '" + o.spectrum + "'");
}

long steps_for(const SimulateOptions& o, const Point& p) {
  if (o.n > 0) return o.n;
  long block = 1;
  for (int l = 1; l < p.levels; ++l) block *= p.k;
  const long n = block * static_cast<long>(std::floor(o.t_final / (p.h_t * block) + 1e-9));
  if (n <= 0) throw ConfigError("T is shorter than one coarsest interval");
  return n;
}

RunResult simulate_point(const SimulateOptions& o, const Point& p) {
  MgritRun run{.hierarchy = TimeHierarchy::make(scheme(o.fine), scheme(o.coarse), steps_for(o, p), p.h_t, p.k,
                                                p.levels),
               .problem = build_spectrum(o, p),
               .relaxation = parse_relax(o.relax)};
  run.theta_schedule = parse_real_list(o.theta, ',');
  run.initial_error.seed = o.common.seed;
  run.tol = o.tol;
  run.max_iters = o.max_iters;
  run.path = parse_path(o.path);
  run.workers = o.common.workers ? o.common.workers : default_workers();
  run.validate();
  return measure_rho(run, o.seeds);
}

std::string status(const RunResult& r) {
  return r.diverged ? "diverged" : r.converged ? "converged" : "not converged";
}

int run(CLI::App& sub, SimulateOptions& o) {
  if (!o.common.config.empty()) apply_config_file(sub, o.common.config);
  if (o.seeds < 1) throw ConfigError("seeds must be positive");
  const Point base{parse_real(o.ht), o.k, o.levels};
  const auto prov = provenance(sub);
  const std::string stem = file_token("simulate_" + o.fine + "_" + o.coarse + "_" + o.relax);

  if (o.sweep.empty()) {
    const auto r = simulate_point(o, base);
    auto os = open_output(o.common.out, stem + "_k" + std::to_string(o.k) + "_L" + std::to_string(o.levels) + ".csv");
    prov.write(os);
    write_run_csv(os, r);
    std::printf("rho=%s iterations=%d %s\n", format_real(r.rho).c_str(), r.iterations, status(r).c_str());
    return kOk;
  }

  if (o.sweep != "ht" && o.sweep != "k" && o.sweep != "levels")
    throw ConfigError("sweep must be ht, k or levels, got '" + o.sweep + "'");
  const auto values = split(o.values, ',');
  if (o.values.empty() || values.empty()) throw ConfigError("sweep needs --values");
  auto os = open_output(o.common.out, stem + "_sweep_" + o.sweep + ".csv");
  prov.write(os);
  os << o.sweep << ",rho,converged,diverged,iters\n";
  std::printf("%-12s %-12s %-6s %s\n", o.sweep.c_str(), "rho", "iters", "status");
  for (const auto& v : values) {
    Point p = base;
    if (o.sweep == "ht") p.h_t = parse_real(v);
    if (o.sweep == "k") p.k = parse_int(v);
    if (o.sweep == "levels") p.levels = parse_int(v);
    const auto r = simulate_point(o, p);
    os << std::string(trim(v)) << ',' << format_real(r.rho) << ',' << (r.converged ? "true" : "false") << ','
       << (r.diverged ? "true" : "false") << ',' << r.iterations << '\n';
    std::printf("%-12s %-12.4g %-6d %s\n", std::string(trim(v)).c_str(), r.rho, r.iterations, status(r).c_str());
  }
  return kOk;
}

}  // namespace

Runner add_simulate(CLI::App& app) {
  auto o = std::make_shared<SimulateOptions>();
  CLI::App* sub = app.add_subcommand("simulate", "run MGRIT on a model problem and measure the convergence factor");
  sub->option_defaults()->always_capture_default();
  add_common(*sub, o->common);
  sub->add_option("--fine", o->fine, "fine scheme");
  sub->add_option("--coarse", o->coarse, "coarse scheme");
  sub->add_option("--k", o->k, "coarsening factor")->check(CLI::Range(2, 1 << 20));
  sub->add_option("--relax", o->relax, "f, fc or fcf");
  sub->add_option("--levels", o->levels, "number of time levels")->check(CLI::Range(2, 64));
  sub->add_option("--ht", o->ht, "fine time step, e.g. 1/1024");
  sub->add_option("--T", o->t_final, "final time; N is the largest admissible count with N h_t <= T");
  sub->add_option("--n", o->n, "fine step count (overrides --T)");
  sub->add_option("--spectrum", o->spectrum, "spd, skew, fd, advection or file:<csv>");
  sub->add_option("--w-max", o->w_max, "largest h_t|xi| of the spd or skew window");
  sub->add_option("--xi-max", o->xi_max, "largest |xi|, fixed across an h_t sweep");
  sub->add_option("--modes", o->modes, "spectrum size, or grid points for fd/advection");
  sub->add_option("--decades", o->decades, "width of the log-spaced window");
  sub->add_flag("--inject-argmax", o->inject_argmax, "add the F and FCF bound argmaxima to an spd window");
  sub->add_option("--seeds", o->seeds, "random initial errors; the largest rho is reported");
  sub->add_option("--tol", o->tol, "residual reduction that counts as converged");
  sub->add_option("--max-iters", o->max_iters, "iteration cap");
  sub->add_option("--theta", o->theta, "per-iteration coarse weights, e.g. 1,0.5");
  sub->add_option("--path", o->path, "diagonal or matrix");
  sub->add_option("--sweep", o->sweep, "ht, k or levels");
  sub->add_option("--values", o->values, "sweep values, e.g. 1/8192,1/4096");
  return [sub, o] { return run(*sub, *o); };
}

}  // namespace pintconv::cli
