#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "commands.hpp"
#include "options.hpp"
#include "pintconv/errors.hpp"
#include "pintconv/registry.hpp"
#include "pintconv/text.hpp"

namespace pintconv::cli {

namespace {

struct BoundsOptions {
  CommonOptions common;
  std::string fine = "bwe";
  std::string coarse = "bwe";
  std::string k = "2";
  std::string relax = "f";
  std::string nc = "inf";
  std::string kind;  // default depends on the axis
  std::string axis = "real";
  double theta = 1.0;
  double omega = 1.0;
  double w_min = 1e-8;
  double w_max = 1e8;
  int points = 512;
};

/// Largest magnitude below which theta |mu| stays at most 1 along the axis; w_max if never exceeded.
double coarse_stability_limit(const ButcherTableau& coarse, int k, Axis axis, double theta, double w_min,
                              double w_max) {
  const auto unstable = [&](double m) {
    return theta * std::abs(coarse_eigenvalue(coarse, k, axis_point(axis, m))) > 1.0 + 1e-12;
  };
  const int n = 4096;
  double lo = w_min;
  for (int i = 1; i <= n; ++i) {
    double hi = w_min * std::pow(w_max / w_min, static_cast<double>(i) / n);
    if (unstable(hi)) {
      while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (unstable(mid) ? hi : lo) = mid;
      }
      return lo;
    }
    lo = hi;
  }
  return w_max;
}

Relaxation parse_relaxation(const std::string& s) {
  if (s == "f" || s == "F") return Relaxation::F;
  if (s == "fcf" || s == "FCF") return Relaxation::FCF;
  throw ConfigError("relax must be f or fcf, got '" + s + "'");
}

Axis parse_axis(const std::string& s) {
  if (s == "real") return Axis::real_positive;
  if (s == "imag") return Axis::imaginary;
  throw ConfigError("axis must be real or imag, got '" + s + "'");
}

BoundKind parse_kind(const std::string& s) {
  if (s == "simple") return BoundKind::simple;
  if (s == "lower") return BoundKind::lower_tight;
  if (s == "upper") return BoundKind::upper_tight;
  throw ConfigError("kind must be simple, lower or upper, got '" + s + "'");
}

int run(CLI::App& sub, BoundsOptions& o) {
  if (!o.common.config.empty()) apply_config_file(sub, o.common.config);
  const Axis axis = parse_axis(o.axis);
  // without N_c the imaginary axis has no usable limit, so default to the tight upper bound
  const BoundKind kind = o.kind.empty() ? (axis == Axis::imaginary ? BoundKind::upper_tight : BoundKind::simple)
                                        : parse_kind(o.kind);
  const Relaxation relax = parse_relaxation(o.relax);
  const auto coarse = scheme(o.coarse);
  const auto ks = parse_int_list(o.k);
  const auto ncs = parse_nc_list(o.nc);

  SweepOptions opt;
  opt.w_min = o.w_min;
  opt.w_max = o.w_max;
  opt.n_base = o.points;
  opt.workers = o.common.workers;
  if (!(opt.w_min > 0.0 && opt.w_max > opt.w_min) || opt.n_base < 2) throw ConfigError("bad sweep range");

  Provenance prov = provenance(sub);
  std::printf("%-28s %-10s %-4s %-6s %-14s %-14s %-14s\n", "fine", "coarse", "k", "N_c", "max_phi", "argmax_w",
              "threshold");
  for (int k : ks) {
    for (const auto& nc : ncs) {
      BoundQuery q{parse_fine(o.fine, k), coarse, k, relax, nc, kind, o.theta, o.omega, axis};
      q.validate();
      SweepOptions curve_opt = opt;
      if (coarse.is_explicit()) {
        // an explicit coarse scheme bounds the usable range; sweep only where it is stable
        const double limit = coarse_stability_limit(coarse, k, axis, o.theta, opt.w_min, opt.w_max);
        if (limit > opt.w_min * 10.0) curve_opt.w_max = std::min(opt.w_max, limit * (1.0 - 1e-9));
      }
      const std::string nc_text = nc ? std::to_string(*nc) : "inf";
      const std::string name = file_token("bounds_" + o.fine + "_" + coarse.name() + "_" +
                                          std::string(to_string(relax)) + "_k" + std::to_string(k) + "_nc" +
                                          nc_text + ".csv");
      auto os = open_output(o.common.out, name);
      Provenance p = prov;
      p.config.emplace_back("curve_k", std::to_string(k));
      p.config.emplace_back("curve_nc", nc_text);
      if (curve_opt.w_max != opt.w_max) p.config.emplace_back("curve_w_max", format_real(curve_opt.w_max));
      p.write(os);
      try {
        const auto curve = sweep(q, curve_opt);
        write_curve_csv(os, curve);
        std::printf("%-28s %-10s %-4d %-6s %-14s %-14s %-14s\n", q.fine.describe().c_str(), coarse.name().c_str(), k,
                    nc_text.c_str(), format_phi(curve.max_phi).c_str(), format_real(curve.argmax_w).c_str(),
                    format_real(curve.threshold).c_str());
      } catch (const StabilityError& e) {
        os << "# error=" << e.what() << '\n';
        std::printf("%-28s %-10s %-4d %-6s error: %s\n", q.fine.describe().c_str(), coarse.name().c_str(), k,
                    nc_text.c_str(), e.what());
      }
    }
  }
  return kOk;
}

}  // namespace

Runner add_bounds(CLI::App& app) {
  auto o = std::make_shared<BoundsOptions>();
  CLI::App* sub = app.add_subcommand("bounds", "sweep convergence bounds over h_t*xi and write one CSV per (k, N_c)");
  sub->option_defaults()->always_capture_default();
  add_common(*sub, o->common);
  sub->add_option("--fine", o->fine, "fine scheme, or a mix such as bwe*2+trapezoid");
  sub->add_option("--coarse", o->coarse, "coarse scheme");
  sub->add_option("--k", o->k, "coarsening factors, e.g. 2,4,8 or 2..16");
  sub->add_option("--relax", o->relax, "f or fcf");
  sub->add_option("--nc", o->nc, "coarse step counts, e.g. 16,64,inf");
  sub->add_option("--kind", o->kind, "simple, lower or upper (default simple; upper on the imaginary axis)");
  sub->add_option("--axis", o->axis, "real or imag");
  sub->add_option("--theta", o->theta, "coarse correction weight in [0, 1]");
  sub->add_option("--omega", o->omega, "relaxation weight in (0, 2)");
  sub->add_option("--w-min", o->w_min, "smallest |h_t xi| sampled");
  sub->add_option("--w-max", o->w_max, "largest |h_t xi| sampled");
  sub->add_option("--points", o->points, "log-spaced base samples");
  return [sub, o] { return run(*sub, *o); };
}

}  // namespace pintconv::cli
