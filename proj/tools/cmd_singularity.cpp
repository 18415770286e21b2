#include <cstdio>
#include <memory>

#include "commands.hpp"
#include "options.hpp"
#include "pintconv/errors.hpp"
#include "pintconv/explicit_analysis.hpp"
#include "pintconv/registry.hpp"
#include "pintconv/text.hpp"

namespace pintconv::cli {

namespace {

struct SingularityOptions {
  CommonOptions common;
  std::string scheme_name = "fwe";
  std::string k = "2";
  double w_max = 10.0;
};

int run(CLI::App& sub, SingularityOptions& o) {
  if (!o.common.config.empty()) apply_config_file(sub, o.common.config);
  const auto tab = scheme(o.scheme_name);
  if (!tab.is_explicit()) throw ConfigError("singularity needs an explicit scheme, '" + o.scheme_name + "' is implicit");
  if (tab.stages() > 4) throw ConfigError("singularity covers explicit schemes with at most 4 stages");
  const auto prov = provenance(sub);
  for (int k : parse_int_list(o.k)) {
    if (k < 2) throw ConfigError("k must be at least 2");
    const auto roots = singularity_roots(tab, k, o.w_max);
    int hits = 0;
    for (const auto& r : roots) hits += r.in_stable_region || r.on_imaginary_stable;
    const std::string verdict =
        hits ? "singular on stable region (" + std::to_string(hits) + " roots)" : "nonsingular on stable region";
    auto os = open_output(o.common.out, file_token("singularity_" + o.scheme_name + "_k" + std::to_string(k) + ".csv"));
    prov.write(os);
    write_roots_csv(os, roots);
    os << "# verdict=" << verdict << '\n';
    std::printf("%s k=%d: %s\n", o.scheme_name.c_str(), k, verdict.c_str());
  }
  return kOk;
}

}  // namespace

Runner add_singularity(CLI::App& app) {
  auto o = std::make_shared<SingularityOptions>();
  CLI::App* sub = app.add_subcommand("singularity", "locate roots of lambda(k w) - lambda(w)^k for an explicit scheme");
  sub->option_defaults()->always_capture_default();
  add_common(*sub, o->common);
  sub->add_option("--scheme", o->scheme_name, "explicit scheme (fwe, erk2, erk3, erk4)");
  sub->add_option("--k", o->k, "coarsening factors, e.g. 2 or 2..16");
  sub->add_option("--w-max", o->w_max, "search radius |w| <= w_max");
  return [sub, o] { return run(*sub, *o); };
}

}  // namespace pintconv::cli
