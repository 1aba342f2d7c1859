#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "slowent/config.hpp"
#include "slowent/report.hpp"

namespace slowent {

inline constexpr const char *kVersion = "0.1.0";

/// Runs the pipeline for one subcommand and builds the report (no I/O).
/// Module errors propagate.
Report build_report(const std::string &subcommand, const RunConfig &cfg);

/// Writes report.json and the CSV/SVG artifacts selected by cfg.
void write_artifacts(const Report &report, const RunConfig &cfg);

/// Full command: load, override, build, write. Returns the exit status
/// (0 ok, 1 validation error, 2 numerical failure); the error name and
/// detail go to err.
int run(const std::string &subcommand, const std::filesystem::path &config_path,
        const Overrides &overrides, std::ostream &out, std::ostream &err);

} // namespace slowent
