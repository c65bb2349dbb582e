#pragma once

#include <filesystem>
#include <string>

#include "hypolab/cli/report.hpp"

namespace hypolab::cli {

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& data);

/// Creates <root>/<experiment>-<UTC timestamp>[-n]/ and writes the CSV
/// tables, SVG plots, report.json and manifest.txt (SHA-256 per file).
/// Fills report.artifacts. Returns the run directory.
std::filesystem::path write_run(Report& report, const std::filesystem::path& root);

/// Output root: the given path, else $HYPOLAB_OUTPUT_DIR, else ./hypolab-out.
std::filesystem::path output_root(const std::string& configured);

}  // namespace hypolab::cli
