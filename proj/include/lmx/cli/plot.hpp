#pragma once

#include <string>
#include <vector>

namespace lmx::cli {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> error;  // optional symmetric error bars
};

// Minimal standalone SVG charts.
std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series);
std::string bar_plot_svg(const std::string& title, const std::string& x_label, const std::vector<std::string>& x_ticks,
                         const std::vector<Series>& groups);

} // namespace lmx::cli
