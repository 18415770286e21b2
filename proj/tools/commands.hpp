#pragma once

#include <CLI11.hpp>

#include <functional>

namespace pintconv::cli {

/// Registers a subcommand; the returned callable runs it after parsing and yields the exit code.
using Runner = std::function<int()>;

Runner add_bounds(CLI::App& app);
Runner add_table(CLI::App& app);
Runner add_simulate(CLI::App& app);
Runner add_singularity(CLI::App& app);

}  // namespace pintconv::cli
