#pragma once

#include <string>
#include <vector>

#include "plateau/mesh.hpp"

namespace plateau {

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
};

// Line plot with axes, tick labels and an optional horizontal reference line.
std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series, const double* reference = nullptr);

// Domain mesh with interior vertices coloured by value (blue negative, red
// positive, white zero, saturating at |value| = scale).
std::string mesh_values_svg(const std::string& title, const DiscMesh& mesh, const std::vector<int>& vertices,
                            const std::vector<double>& values, double scale);

}  // namespace plateau
