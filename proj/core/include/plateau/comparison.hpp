#pragma once

#include <vector>

#include "plateau/point.hpp"

namespace plateau {

struct BishopGromovSample {
  int vertex = -1;
  double r = 0.0;
  double link = 0.0;       // angle sum at the vertex
  double ball_area = 0.0;  // area of the pull-back ball
  double defect = 0.0;     // (r^2/2) * link - ball_area
};

struct LowLink {
  Point point;
  double link = 0.0;
};

// Shared by verify_cat0, check_cn, check_bishop_gromov and flatness_report.
struct ComparisonReport {
  double cn_defect_max = 0.0;
  int cn_samples = 0;
  std::vector<BishopGromovSample> bg_defects;
  std::vector<int> angle_vertices;
  std::vector<double> angle_defects;  // 2pi - angle sum, per interior vertex
  std::vector<LowLink> low_links;     // singular points with link < 2pi

  // Flatness verdict fields.
  double flat_tol = 0.0;
  int cone_vertices = 0;
  double cone_defect_sum = 0.0;
  double max_other_defect = 0.0;      // max defect outside the cone set
  double max_abs_other_defect = 0.0;
  bool flat = false;
  bool rigid_cone = false;
};

}  // namespace plateau
