#include "options.hpp"

#include <algorithm>
#include <sstream>

#include "pintconv/errors.hpp"
#include "pintconv/registry.hpp"
#include "pintconv/text.hpp"

namespace pintconv::cli {

void add_common(CLI::App& sub, CommonOptions& common) {
  sub.add_option("--config", common.config, "key = value file; its entries override flags")
      ->check(CLI::ExistingFile);
  sub.add_option("--out", common.out, "output directory for CSV files");
  sub.add_option("--seed", common.seed, "base seed for random initial errors");
  sub.add_option("--workers", common.workers, "worker threads (0 = hardware concurrency)");
}

void apply_config_file(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream text;
  text << in.rdbuf();
  for (const auto& [key, value] : parse_key_values(text.str())) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    if (name == "config") throw ConfigError("config files cannot name another config file");
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + name);
    } catch (const CLI::OptionNotFound&) {
      throw ConfigError("unknown config key '" + key + "' for " + sub.get_name());
    }
    opt->clear();
    // flags take true/false
    if (opt->get_items_expected_max() == 0 && value != "true" && value != "false")
      throw ConfigError("flag '" + key + "' expects true or false");
    opt->add_result(value);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

Provenance provenance(const CLI::App& sub) {
  Provenance p;
  p.config.emplace_back("command", sub.get_name());
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string& name = opt->get_single_name();
    if (opt->get_lnames().empty() || name == "help" || name == "config" || name == "out") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
      if (opt->get_items_expected_max() == 0 && value.empty()) value = "true";
    } else {
      value = opt->get_default_str();
      if (opt->get_items_expected_max() == 0) value = "false";
    }
    p.config.emplace_back(name, value.empty() ? "-" : value);
  }
  return p;
}

PropagatorSpec parse_fine(const std::string& text, int k) {
  const auto parts = split(text, '+');
  if (parts.size() == 1 && text.find('*') == std::string::npos) return PropagatorSpec::uniform(scheme(text), k);
  std::vector<PropagatorStep> steps;
  int used = 0;
  int open = -1;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string part(trim(parts[i]));
    const auto star = part.find('*');
    if (star == std::string::npos) {
      if (open >= 0) throw ConfigError("fine propagator '" + text + "': at most one part may omit its count");
      open = static_cast<int>(i);
      steps.push_back({scheme(part), 0.0});
      continue;
    }
    const int count = parse_int(part.substr(star + 1));
    if (count < 1) throw ConfigError("fine propagator '" + text + "': counts must be positive");
    for (int c = 0; c < count; ++c) steps.push_back({scheme(part.substr(0, star)), 1.0});
    used += count;
  }
  if (open >= 0) {
    const int rest = k - used;
    if (rest < 1) throw ConfigError("fine propagator '" + text + "' leaves no steps for the open part");
    // expand the placeholder in place
    std::vector<PropagatorStep> expanded;
    for (const auto& s : steps) {
      if (s.step_fraction == 0.0)
        for (int c = 0; c < rest; ++c) expanded.push_back({s.tableau, 1.0});
      else
        expanded.push_back(s);
    }
    steps = std::move(expanded);
    used = k;
  }
  if (used != k)
    throw ConfigError("fine propagator '" + text + "' has " + std::to_string(used) + " steps, k = " + std::to_string(k));
  return PropagatorSpec(std::move(steps));
}

std::vector<std::optional<long>> parse_nc_list(const std::string& text) {
  std::vector<std::optional<long>> out;
  for (const auto& part : split(text, ',')) {
    const std::string t(trim(part));
    if (t == "inf") {
      out.emplace_back();
    } else {
      const int v = parse_int(t);
      if (v < 1) throw ConfigError("N_c must be positive or inf");
      out.emplace_back(v);
    }
  }
  if (out.empty()) throw ConfigError("empty N_c list");
  return out;
}

std::ofstream open_output(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / name;
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

std::string file_token(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')) c = '_';
  return s;
}

}  // namespace pintconv::cli
