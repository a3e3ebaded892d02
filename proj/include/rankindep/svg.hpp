#pragma once

#include <string>
#include <vector>

namespace rankindep {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal standalone SVG line chart on the unit square [0,1]^2, optionally
/// with the main diagonal as a dashed reference.
std::string render_unit_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                             const std::vector<PlotSeries>& series, bool diagonal);

/// Writes `content` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rankindep
