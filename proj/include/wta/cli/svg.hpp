#pragma once

#include <string>
#include <vector>

namespace wta::cli {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
    bool dotted = false;
    /// Draw markers instead of a polyline.
    bool points = false;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    /// Plot log10(max(y, 1e-16)).
    bool log_y = false;
    std::vector<Series> series;
    /// Bar heights by index; drawn when nonempty.
    std::vector<double> bars;
};

inline constexpr double kLogFloor = 1e-16;

/// Distinct colors for series i = 0, 1, ...
std::string palette(std::size_t i);

/// Panels stacked top to bottom in one document.
std::string render_svg(const std::vector<Panel>& panels, double width = 720.0, double panel_height = 300.0);

} // namespace wta::cli
