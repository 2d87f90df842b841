#pragma once

#include <string>
#include <vector>

#include "dispel/common/csv.hpp"

namespace dispel::plot {

struct Series {
  std::string name;
  std::vector<double> x, y;
  bool dashed = false;
};

struct Chart {
  std::string title, x_label, y_label;
  std::vector<Series> series;
  double width = 640, height = 420;
};

// Tick positions covering [lo, hi] at a 1-2-5 step, strictly increasing.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

// Line chart with markers and a legend, one colour per series.
std::string render_svg(const Chart& c);

// Figure analogs built from the tool's CSV outputs. `kind` is one of
// ef (frontier CSV), area-f (result CSV), edp-lspa, edp-xrw.
Chart figure(const std::string& kind, const CsvTable& t);

}  // namespace dispel::plot
