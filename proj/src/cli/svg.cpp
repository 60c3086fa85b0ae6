#include "wta/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace wta::cli {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 45.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, bool log_axis) {
    char buf[32];
    if (log_axis)
        std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
    else
        std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v))
            return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-300) {
            const double pad = std::max(std::abs(lo) * 0.05, 0.5);
            lo -= pad;
            hi += pad;
        }
    }
};

double transform(double y, bool log_y) { return log_y ? std::log10(std::max(y, kLogFloor)) : y; }

void draw_panel(std::ostringstream& os, const Panel& p, double width, double height, double y0) {
    const double plot_w = width - kLeft - kRight;
    const double plot_h = height - kTop - kBottom;

    Range xr, yr;
    if (!p.bars.empty()) {
        xr.add(-0.5);
        xr.add(static_cast<double>(p.bars.size()) - 0.5);
        yr.add(0.0);
        for (double b : p.bars)
            yr.add(b);
    }
    for (const Series& s : p.series) {
        for (double x : s.x)
            xr.add(x);
        for (double y : s.y)
            yr.add(transform(y, p.log_y));
    }
    xr.settle();
    yr.settle();

    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return y0 + kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

    os << "<g>\n";
    os << "<text x=\"" << num(width / 2) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(p.title) << "</text>\n";
    os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(y0 + kTop) << "\" width=\"" << num(plot_w) << "\" height=\""
       << num(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
        const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
        os << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(y0 + kTop + plot_h + 16)
           << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(fx, false) << "</text>\n";
        os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(fy) + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(fy, p.log_y) << "</text>\n";
    }
    os << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(y0 + height - 8)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(p.x_label) << "</text>\n";
    os << "<text transform=\"translate(14," << num(y0 + kTop + plot_h / 2)
       << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << escape(p.y_label) << "</text>\n";

    if (!p.bars.empty()) {
        const double bw = plot_w / static_cast<double>(p.bars.size());
        for (std::size_t i = 0; i < p.bars.size(); ++i) {
            const double top = py(p.bars[i]);
            const double base = py(std::max(0.0, yr.lo));
            os << "<rect x=\"" << num(px(static_cast<double>(i)) - bw * 0.4) << "\" y=\"" << num(std::min(top, base))
               << "\" width=\"" << num(bw * 0.8) << "\" height=\"" << num(std::abs(base - top))
               << "\" fill=\"#4477aa\"/>\n";
        }
    }

    for (std::size_t k = 0; k < p.series.size(); ++k) {
        const Series& s = p.series[k];
        const std::string color = s.color.empty() ? palette(k) : s.color;
        const std::size_t m = std::min(s.x.size(), s.y.size());
        if (s.points) {
            for (std::size_t i = 0; i < m; ++i)
                os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(transform(s.y[i], p.log_y)))
                   << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
            continue;
        }
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\"";
        if (s.dotted)
            os << " stroke-dasharray=\"3,3\"";
        os << " points=\"";
        for (std::size_t i = 0; i < m; ++i)
            os << (i ? " " : "") << num(px(s.x[i])) << "," << num(py(transform(s.y[i], p.log_y)));
        os << "\"/>\n";
    }
    os << "</g>\n";
}

} // namespace

std::string palette(std::size_t i) {
    static const char* colors[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee",
                                   "#aa3377", "#bbbbbb", "#000000", "#ee7733", "#009988"};
    return colors[i % (sizeof colors / sizeof colors[0])];
}

std::string render_svg(const std::vector<Panel>& panels, double width, double panel_height) {
    std::ostringstream os;
    const double height = panel_height * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
       << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\" font-family=\"sans-serif\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i)
        draw_panel(os, panels[i], width, panel_height, panel_height * static_cast<double>(i));
    os << "</svg>\n";
    return os.str();
}

} // namespace wta::cli
