#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pintconv/bounds.hpp"
#include "pintconv/csv.hpp"

namespace pintconv::cli {

enum ExitCode { kOk = 0, kMismatch = 1, kConfigError = 2 };

/// Options every subcommand accepts.
struct CommonOptions {
  std::string config;
  std::string out = ".";
  unsigned long long seed = 1;
  unsigned workers = 0;
};

void add_common(CLI::App& sub, CommonOptions& common);

/// Applies `key = value` lines from the --config file on top of parsed flags.
/// Keys name long options (dashes or underscores); unknown keys raise ConfigError.
void apply_config_file(CLI::App& sub, const std::string& path);

/// Every long option of `sub` with its resolved value, for provenance headers.
Provenance provenance(const CLI::App& sub);

/// Fine propagator from "name", or "a*2+b" (a count-less part takes the rest of k).
PropagatorSpec parse_fine(const std::string& text, int k);

/// List of N_c values; "inf" means no N_c.
std::vector<std::optional<long>> parse_nc_list(const std::string& text);

/// Opens `<out>/<name>` for writing, creating the directory.
std::ofstream open_output(const std::string& out_dir, const std::string& name);

/// Replaces characters that are awkward in file names.
std::string file_token(std::string s);

}  // namespace pintconv::cli
