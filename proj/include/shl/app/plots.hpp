#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace shl::app {

// Standalone SVG line chart; `marks` are x positions drawn as vertical lines.
std::string render_trace_svg(const std::string& title, std::span<const double> x, std::span<const double> y,
                             std::span<const double> marks);

struct PlotReport {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

// Reads the series of a run directory and writes plots/<name>.svg for the
// fused error and each view present; apex times from the clip manifest are
// marked. Missing or empty series are skipped with a warning.
PlotReport emit_plots(const std::filesystem::path& run_dir);

}  // namespace shl::app
