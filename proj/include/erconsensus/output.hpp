#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace erc {

/// %.17g, enough to round-trip a double.
std::string format_double(double value);

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Writes one "# key=value" line per entry.
void write_config_echo(std::ostream& out, const ConfigEcho& config);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Standalone SVG line plot on a fixed 800x500 viewBox with linear axes.
std::string render_svg(const PlotSpec& plot);

}  // namespace erc
