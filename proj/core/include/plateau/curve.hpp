#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "plateau/space.hpp"

namespace plateau {

struct PolygonalCurve {
  std::vector<Point> vertices;
  bool closed = true;
  std::vector<double> edge_lengths;  // edge i joins vertex i and i+1 (cyclic)

  int size() const { return static_cast<int>(vertices.size()); }
  double length() const;
  // Arc-length parameter of vertex i, in [0, 1).
  double vertex_param(int i) const;
};

struct CurvatureReport {
  double kappa = 0.0;
  std::vector<double> turning_angles;
  bool fenchel_ok = false;
};

// Caches edge lengths. Throws DegenerateVertex if consecutive vertices coincide.
PolygonalCurve make_curve(const MetricSpace& space, std::vector<Point> vertices, bool closed = true);

CurvatureReport total_curvature(const MetricSpace& space, const PolygonalCurve& curve);

using Sampler = std::function<Point(double)>;
PolygonalCurve inscribe(const MetricSpace& space, const Sampler& sampler, int n);

struct CurveLocation {
  int edge = 0;
  double fraction = 0.0;  // along the edge, in [0, 1]
};
CurveLocation locate_param(const PolygonalCurve& curve, double t);
Point arc_length_param(const MetricSpace& space, const PolygonalCurve& curve, double t);

// Smallest distance between sample points of non-adjacent edges. A simple
// polygon has a positive value; this is a flag, not a certificate.
double min_edge_separation(const MetricSpace& space, const PolygonalCurve& curve, int samples_per_edge = 8);

// Fixed generators used by scenes and tests.
Sampler circle_sampler(const MetricSpace& space, double radius, const Coords& center);
Sampler trefoil_sampler(const MetricSpace& space);
PolygonalCurve regular_polygon(const MetricSpace& space, int n, double radius);
PolygonalCurve cone_circle(const MetricSpace& space, int n, double radius);
// Random closed polygon in R^3 with vertices near a circle, perturbed out of plane.
PolygonalCurve random_polygon(const MetricSpace& space, int n, std::uint64_t seed, double wobble = 0.35);

// Doubly winding octagon in GluedPlanes(pi): vertices at angles pi/4 + k pi/2
// (k = 0..7) around the base point (0,1) of the cone of angle 4pi over it,
// sheet 1 for the first turn and sheet 2 for the second.
PolygonalCurve example52_curve(const MetricSpace& space);
Point example52_base(const MetricSpace& space);
// A point of the shared sector surrounded twice by the curve.
Point example52_double_point(const MetricSpace& space);

}  // namespace plateau
