#ifndef MRSIM_SVG_PLOT_HPP
#define MRSIM_SVG_PLOT_HPP

#include <string>
#include <vector>

#include "mrsim/sim_engine.hpp"

namespace mrsim {

struct PlotPanel {
    std::string title;
    std::string x_column;  // telemetry column name, or "index"
    std::string y_column;
    std::string x_label;
    std::string y_label;
};

struct PlotSpec {
    std::vector<PlotPanel> panels;
    std::vector<std::string> series_labels;  // one per telemetry variant
    int panel_width = 360;
    int panel_height = 220;
    int columns = 2;
};

/// Panel layout mirroring the run plots: path curvature, blood speed, the
/// per-axis gradients and the per-axis dB/dt traces.
PlotSpec default_plot_spec(std::vector<std::string> series_labels);

/// Renders multi-panel line charts; the first variant is drawn in blue
/// (#1f77b4), the second in red (#d62728). Output is byte-deterministic for
/// identical input.
std::string render_plots_svg(const std::vector<std::vector<TelemetryRecord>>& variants, const PlotSpec& spec);

void render_plots(const std::vector<std::vector<TelemetryRecord>>& variants, const PlotSpec& spec,
                  const std::string& path);

}  // namespace mrsim

#endif
