#include <cstdio>
#include <exception>
#include <stdexcept>
#include <utility>
#include <vector>

#include "commands.hpp"
#include "options.hpp"
#include "pintconv/csv.hpp"
#include "pintconv/errors.hpp"

int main(int argc, char** argv) {
  using namespace pintconv::cli;
  CLI::App app{"Convergence bounds and MGRIT simulations for Runge-Kutta time integrators", "pintconv"};
  app.set_version_flag("--version", std::string("pintconv ") + pintconv::kVersion);
  app.require_subcommand(1);

  std::vector<std::pair<std::string, Runner>> runners;
  runners.emplace_back("bounds", add_bounds(app));
  runners.emplace_back("table", add_table(app));
  runners.emplace_back("simulate", add_simulate(app));
  runners.emplace_back("singularity", add_singularity(app));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  try {
    for (auto& [name, runner] : runners)
      if (app.got_subcommand(name)) return runner();
  } catch (const pintconv::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
  return kOk;
}
