#include "mrsim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "mrsim/error.hpp"

namespace mrsim {

namespace {

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

using ColumnFn = std::function<double(const TelemetryRecord&, std::size_t)>;

ColumnFn column_accessor(const std::string& name) {
    if (name == "index") return [](const TelemetryRecord&, std::size_t i) { return static_cast<double>(i); };
    if (name == "time_s") return [](const TelemetryRecord& r, std::size_t) { return r.time; };
    if (name == "pcx") return [](const TelemetryRecord& r, std::size_t) { return r.position.x; };
    if (name == "pcy") return [](const TelemetryRecord& r, std::size_t) { return r.position.y; };
    if (name == "pcz") return [](const TelemetryRecord& r, std::size_t) { return r.position.z; };
    if (name == "vcx") return [](const TelemetryRecord& r, std::size_t) { return r.velocity.x; };
    if (name == "vcy") return [](const TelemetryRecord& r, std::size_t) { return r.velocity.y; };
    if (name == "vcz") return [](const TelemetryRecord& r, std::size_t) { return r.velocity.z; };
    if (name == "gx_raw") return [](const TelemetryRecord& r, std::size_t) { return r.gradient_raw.x; };
    if (name == "gy_raw") return [](const TelemetryRecord& r, std::size_t) { return r.gradient_raw.y; };
    if (name == "gz_raw") return [](const TelemetryRecord& r, std::size_t) { return r.gradient_raw.z; };
    if (name == "gx") return [](const TelemetryRecord& r, std::size_t) { return r.gradient.x; };
    if (name == "gy") return [](const TelemetryRecord& r, std::size_t) { return r.gradient.y; };
    if (name == "gz") return [](const TelemetryRecord& r, std::size_t) { return r.gradient.z; };
    if (name == "k") return [](const TelemetryRecord& r, std::size_t) { return r.curvature; };
    if (name == "vblood") return [](const TelemetryRecord& r, std::size_t) { return r.blood_speed; };
    if (name == "dbdt_x") return [](const TelemetryRecord& r, std::size_t) { return r.dbdt.x; };
    if (name == "dbdt_y") return [](const TelemetryRecord& r, std::size_t) { return r.dbdt.y; };
    if (name == "dbdt_z") return [](const TelemetryRecord& r, std::size_t) { return r.dbdt.z; };
    throw Error(ErrorKind::PlotError, "unknown telemetry column '" + name + "'");
}

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[40];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    void expand(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

Range column_range(const std::vector<std::vector<TelemetryRecord>>& variants, const ColumnFn& fn) {
    bool first = true;
    Range r;
    for (const auto& records : variants) {
        for (std::size_t i = 0; i < records.size(); ++i) {
            const double v = fn(records[i], i);
            if (first) {
                r.lo = r.hi = v;
                first = false;
            } else {
                r.expand(v);
            }
        }
    }
    if (r.hi == r.lo) {
        const double pad = (r.hi == 0.0) ? 1.0 : std::abs(r.hi) * 0.1;
        r.lo -= pad;
        r.hi += pad;
    } else {
        const double pad = 0.05 * (r.hi - r.lo);
        r.lo -= pad;
        r.hi += pad;
    }
    return r;
}

}  // namespace

PlotSpec default_plot_spec(std::vector<std::string> series_labels) {
    PlotSpec spec;
    spec.series_labels = std::move(series_labels);
    spec.panels = {
        {"Path curvature", "index", "k", "sample index", "K (1/m)"},
        {"Blood speed", "time_s", "vblood", "time (s)", "v (m/s)"},
        {"Gradient X", "time_s", "gx", "time (s)", "Gx (T/m)"},
        {"Gradient Y", "time_s", "gy", "time (s)", "Gy (T/m)"},
        {"Gradient Z", "time_s", "gz", "time (s)", "Gz (T/m)"},
        {"dB/dt X", "time_s", "dbdt_x", "time (s)", "dB/dt (T/s)"},
        {"dB/dt Y", "time_s", "dbdt_y", "time (s)", "dB/dt (T/s)"},
        {"dB/dt Z", "time_s", "dbdt_z", "time (s)", "dB/dt (T/s)"},
    };
    return spec;
}

std::string render_plots_svg(const std::vector<std::vector<TelemetryRecord>>& variants, const PlotSpec& spec) {
    if (variants.empty()) {
        throw Error(ErrorKind::PlotError, "no telemetry variants to plot");
    }
    for (const auto& v : variants) {
        if (v.empty()) throw Error(ErrorKind::PlotError, "empty telemetry variant");
    }
    if (spec.panels.empty()) {
        throw Error(ErrorKind::PlotError, "plot spec has no panels");
    }

    const int cols = std::max(1, spec.columns);
    const int rows = static_cast<int>((spec.panels.size() + cols - 1) / cols);
    const int margin_left = 64, margin_right = 16, margin_top = 34, margin_bottom = 42;
    const int cell_w = spec.panel_width + margin_left + margin_right;
    const int cell_h = spec.panel_height + margin_top + margin_bottom;
    const int legend_h = 24;
    const int width = cols * cell_w;
    const int height = rows * cell_h + legend_h;

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << ' ' << height << "'>\n";
    svg << "<rect x='0' y='0' width='" << width << "' height='" << height << "' fill='white'/>\n";

    // Legend row.
    int lx = 12;
    for (std::size_t s = 0; s < variants.size(); ++s) {
        const char* color = kSeriesColors[s % 4];
        const std::string label = s < spec.series_labels.size() ? spec.series_labels[s]
                                                                : ("series " + std::to_string(s + 1));
        svg << "<line x1='" << lx << "' y1='14' x2='" << lx + 22 << "' y2='14' stroke='" << color
            << "' stroke-width='2'/>\n";
        svg << "<text x='" << lx + 27 << "' y='18' font-family='sans-serif' font-size='12'>" << label
            << "</text>\n";
        lx += 27 + 9 * static_cast<int>(label.size()) + 18;
    }

    for (std::size_t p = 0; p < spec.panels.size(); ++p) {
        const PlotPanel& panel = spec.panels[p];
        const ColumnFn fx = column_accessor(panel.x_column);
        const ColumnFn fy = column_accessor(panel.y_column);
        const Range rx = column_range(variants, fx);
        const Range ry = column_range(variants, fy);

        const int cx = static_cast<int>(p) % cols;
        const int cy = static_cast<int>(p) / cols;
        const double ox = cx * cell_w + margin_left;
        const double oy = cy * cell_h + margin_top + legend_h;
        const double w = spec.panel_width;
        const double h = spec.panel_height;

        auto px = [&](double v) { return ox + (v - rx.lo) / (rx.hi - rx.lo) * w; };
        auto py = [&](double v) { return oy + h - (v - ry.lo) / (ry.hi - ry.lo) * h; };

        svg << "<g>\n";
        svg << "<text x='" << fmt(ox + w / 2) << "' y='" << fmt(oy - 12)
            << "' font-family='sans-serif' font-size='13' text-anchor='middle'>" << panel.title << "</text>\n";
        svg << "<rect x='" << fmt(ox) << "' y='" << fmt(oy) << "' width='" << fmt(w) << "' height='" << fmt(h)
            << "' fill='none' stroke='#444444' stroke-width='1'/>\n";

        for (int tick = 0; tick <= 4; ++tick) {
            const double fxv = rx.lo + (rx.hi - rx.lo) * tick / 4.0;
            const double fyv = ry.lo + (ry.hi - ry.lo) * tick / 4.0;
            const double tx = px(fxv);
            const double ty = py(fyv);
            svg << "<line x1='" << fmt(tx) << "' y1='" << fmt(oy + h) << "' x2='" << fmt(tx) << "' y2='"
                << fmt(oy + h + 4) << "' stroke='#444444' stroke-width='1'/>\n";
            svg << "<text x='" << fmt(tx) << "' y='" << fmt(oy + h + 16)
                << "' font-family='sans-serif' font-size='10' text-anchor='middle'>" << fmt(fxv, "%.4g")
                << "</text>\n";
            svg << "<line x1='" << fmt(ox - 4) << "' y1='" << fmt(ty) << "' x2='" << fmt(ox) << "' y2='" << fmt(ty)
                << "' stroke='#444444' stroke-width='1'/>\n";
            svg << "<text x='" << fmt(ox - 7) << "' y='" << fmt(ty + 3)
                << "' font-family='sans-serif' font-size='10' text-anchor='end'>" << fmt(fyv, "%.4g")
                << "</text>\n";
        }
        svg << "<text x='" << fmt(ox + w / 2) << "' y='" << fmt(oy + h + 32)
            << "' font-family='sans-serif' font-size='11' text-anchor='middle'>" << panel.x_label << "</text>\n";
        svg << "<text x='" << fmt(ox - 48) << "' y='" << fmt(oy + h / 2)
            << "' font-family='sans-serif' font-size='11' text-anchor='middle' transform='rotate(-90 "
            << fmt(ox - 48) << ' ' << fmt(oy + h / 2) << ")'>" << panel.y_label << "</text>\n";

        for (std::size_t s = 0; s < variants.size(); ++s) {
            const auto& records = variants[s];
            // Thin long traces so files stay manageable; endpoints always kept.
            const std::size_t stride = std::max<std::size_t>(1, records.size() / 2000);
            svg << "<polyline fill='none' stroke='" << kSeriesColors[s % 4] << "' stroke-width='1.2' points='";
            for (std::size_t i = 0; i < records.size(); i += stride) {
                svg << fmt(px(fx(records[i], i))) << ',' << fmt(py(fy(records[i], i))) << ' ';
            }
            const std::size_t last = records.size() - 1;
            svg << fmt(px(fx(records[last], last))) << ',' << fmt(py(fy(records[last], last)));
            svg << "'/>\n";
        }
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void render_plots(const std::vector<std::vector<TelemetryRecord>>& variants, const PlotSpec& spec,
                  const std::string& path) {
    const std::string doc = render_plots_svg(variants, spec);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::WriteError, "cannot open '" + path + "' for writing");
    }
    out << doc;
    if (!out) {
        throw Error(ErrorKind::WriteError, "write failure on '" + path + "'");
    }
}

}  // namespace mrsim
