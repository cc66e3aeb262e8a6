#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "quadsim/sim.hpp"

namespace quadsim {

// One polyline on a plot.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool fix_y_range = false;
    double y_min = 0.0;
    double y_max = 1.0;
};

// Minimal deterministic SVG line plot (fixed canvas, fixed formatting).
std::string render_line_svg(const std::vector<PlotSeries>& series,
                            const PlotOptions& options);

// Writes the standard diagnostic set for one run into `dir`:
// attitude.svg, torques.svg, gains.svg, steady_state_error.svg. The gain plot
// y-range always covers the [alpha_m, alpha_M] adaptation band.
// Throws MissingDataError on an empty log.
std::vector<std::filesystem::path> emit_plots(const RunLog& log,
                                              const SlidingConfig& cfg,
                                              const std::filesystem::path& dir);

}  // namespace quadsim
