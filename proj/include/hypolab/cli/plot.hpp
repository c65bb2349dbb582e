#pragma once

#include <string>

#include "hypolab/cli/report.hpp"

namespace hypolab::cli {

enum class PlotKind { LogLog, Line, Heatmap };

PlotKind plot_kind_from_string(const std::string& s);

/// Self-contained SVG. LogLog and Line plot every column after the first
/// against the first (LogLog adds a fitted-slope label per series). Heatmap
/// takes long-format columns x, y, value on a rectangular lattice.
std::string render_svg(const Table& table, PlotKind kind, const std::string& title = "");

/// render_svg written atomically to path.
void emit_plot(const Table& table, PlotKind kind, const std::string& path, const std::string& title = "");

}  // namespace hypolab::cli
