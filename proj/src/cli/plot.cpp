#include "lmx/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lmx/core/io.hpp"

namespace lmx::cli {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v)
{
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

struct Frame {
    double x0, x1, y0, y1;

    [[nodiscard]] double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    [[nodiscard]] double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
}

void axes(std::ostringstream& svg, const Frame& f, const std::string& title, const std::string& x_label,
          const std::string& y_label, bool x_ticks)
{
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
    const double left = f.px(f.x0);
    const double right = f.px(f.x1);
    const double bottom = f.py(f.y0);
    const double top = f.py(f.y1);
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << left << "\" y2=\"" << top
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
        svg << "<text x=\"" << left - 6 << "\" y=\"" << f.py(y) + 4 << "\" text-anchor=\"end\">" << num(y)
            << "</text>\n";
        if (x_ticks) {
            const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
            svg << "<text x=\"" << f.px(x) << "\" y=\"" << bottom + 16 << "\" text-anchor=\"middle\">" << num(x)
                << "</text>\n";
        }
    }
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
        << escape(x_label) << "</text>\n"
        << "<text transform=\"translate(16," << (top + bottom) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(y_label) << "</text>\n";
}

void legend(std::ostringstream& svg, const std::vector<Series>& series)
{
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = kTop + 10 + 18.0 * static_cast<double>(i);
        const double x = kWidth - kRight + 12;
        svg << "<rect x=\"" << x << "\" y=\"" << y - 9 << "\" width=\"12\" height=\"12\" fill=\""
            << kPalette[i % std::size(kPalette)] << "\"/>\n"
            << "<text x=\"" << x + 18 << "\" y=\"" << y + 2 << "\">" << escape(series[i].name) << "</text>\n";
    }
}

} // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series)
{
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            const double e = i < s.error.size() ? s.error[i] : 0.0;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i] - e);
            y1 = std::max(y1, s.y[i] + e);
        }
    }
    widen(x0, x1);
    widen(y0, y1);
    const Frame f{x0, x1, y0, y1};

    std::ostringstream svg;
    axes(svg, f, title, x_label, y_label, true);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            svg << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
        }
        svg << "\"/>\n";
        for (std::size_t i = 0; i < s.error.size() && i < s.x.size() && i < s.y.size(); ++i) {
            svg << "<line x1=\"" << f.px(s.x[i]) << "\" y1=\"" << f.py(s.y[i] - s.error[i]) << "\" x2=\""
                << f.px(s.x[i]) << "\" y2=\"" << f.py(s.y[i] + s.error[i]) << "\" stroke=\"" << color << "\"/>\n";
        }
    }
    legend(svg, series);
    svg << "</svg>\n";
    return svg.str();
}

std::string bar_plot_svg(const std::string& title, const std::string& x_label, const std::vector<std::string>& x_ticks,
                         const std::vector<Series>& groups)
{
    double y1 = 0.0;
    for (const auto& g : groups) {
        for (double v : g.y) {
            y1 = std::max(y1, v);
        }
    }
    if (y1 <= 0.0) {
        y1 = 1.0;
    }
    const double slots = static_cast<double>(std::max<std::size_t>(x_ticks.size(), 1));
    const Frame f{0.0, slots, 0.0, y1};

    std::ostringstream svg;
    axes(svg, f, title, x_label, "count", false);
    const double slot_px = (kWidth - kLeft - kRight) / slots;
    const double bar_px = slot_px * 0.8 / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
    for (std::size_t t = 0; t < x_ticks.size(); ++t) {
        svg << "<text x=\"" << f.px(static_cast<double>(t) + 0.5) << "\" y=\"" << f.py(0.0) + 16
            << "\" text-anchor=\"middle\">" << escape(x_ticks[t]) << "</text>\n";
    }
    for (std::size_t k = 0; k < groups.size(); ++k) {
        for (std::size_t t = 0; t < groups[k].y.size() && t < x_ticks.size(); ++t) {
            const double x = f.px(static_cast<double>(t)) + slot_px * 0.1 + bar_px * static_cast<double>(k);
            const double top = f.py(groups[k].y[t]);
            svg << "<rect x=\"" << x << "\" y=\"" << top << "\" width=\"" << bar_px << "\" height=\""
                << f.py(0.0) - top << "\" fill=\"" << kPalette[k % std::size(kPalette)] << "\"/>\n";
        }
    }
    legend(svg, groups);
    svg << "</svg>\n";
    return svg.str();
}

} // namespace lmx::cli
