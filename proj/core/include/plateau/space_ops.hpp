#pragma once

#include <cstdint>
#include <vector>

#include "plateau/comparison.hpp"
#include "plateau/space.hpp"

namespace plateau {

struct AngleQuery {
  Point q, x, y;
  std::vector<double> probe_radii;  // strictly decreasing
};

// Probe radii (delta, delta/2) with delta = 1e-3 * min(d(q,x), d(q,y)).
AngleQuery make_angle_query(const MetricSpace& space, const Point& q, const Point& x, const Point& y);

// Comparison angle at q, linearly extrapolated to r = 0 from the last two probes.
double upper_angle(const MetricSpace& space, const AngleQuery& query);
double upper_angle(const MetricSpace& space, const Point& q, const Point& x, const Point& y);

// max(0, d(x,m)^2 - d(x,y)^2/2 - d(x,z)^2/2 + d(y,z)^2/4)
double cn_defect(double dxm, double dxy, double dxz, double dyz);

// Random triples, CN defect at geodesic midpoints, plus singular points with link < 2pi.
ComparisonReport verify_cat0(const MetricSpace& space, int samples, std::uint64_t seed = 1);

}  // namespace plateau
