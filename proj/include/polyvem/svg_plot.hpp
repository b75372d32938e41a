#pragma once

#include <string>
#include <vector>

namespace polyvem {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

/// Reference slope drawn as a right triangle near the end of a series.
struct SlopeMarker {
  double slope = 0.0;
  std::string label;
  std::size_t series = 0;  ///< series the triangle is attached to
};

struct PlotSpec {
  std::string title;
  std::string x_label, y_label;
  bool log_x = true, log_y = true;
  std::vector<PlotSeries> series;
  std::vector<SlopeMarker> slopes;
  int width = 640, height = 480;
};

/// Self-contained SVG line plot. Points with non-positive coordinates on a
/// log axis are dropped.
std::string render_svg(const PlotSpec& spec);

}  // namespace polyvem
