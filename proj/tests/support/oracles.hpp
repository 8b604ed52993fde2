#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "plateau/funnel.hpp"

namespace plateau::oracle {

// Planar position of a point of the funnel extension of a convex, counter-
// clockwise planar polygon in Euclidean(2). Built from the polygon alone:
// strip i sits on the outer side of edge i, sector i is the wedge between the
// outer normals of edges i-1 and i.
inline Vec2 planar_position(const FunnelExtension& ext, const std::vector<Vec2>& poly, const Point& p) {
  if (!ext.in_funnel(p)) return p.xy();
  const int n = static_cast<int>(poly.size());
  const int ch = p.chart - ext.strip_chart(0);
  if (ch < n) {
    const Vec2 u = (poly[(ch + 1) % n] - poly[ch]).normalized();
    const Vec2 out(u.y(), -u.x());
    return poly[ch] + p.coords(0) * u + p.coords(1) * out;
  }
  const int i = ch - n;
  const Vec2 u = (poly[i] - poly[(i + n - 1) % n]).normalized();
  const double a = std::atan2(-u.x(), u.y());
  const Vec2 x = p.xy();
  return poly[i] + Vec2(std::cos(a) * x.x() - std::sin(a) * x.y(), std::sin(a) * x.x() + std::cos(a) * x.y());
}

// Closed-form distance on the Euclidean cone of angle alpha.
inline double cone_distance(double alpha, double r1, double t1, double r2, double t2) {
  double d = std::fmod(std::abs(t1 - t2), alpha);
  d = std::min(d, alpha - d);
  if (d >= M_PI) return r1 + r2;
  return std::sqrt(std::max(0.0, r1 * r1 + r2 * r2 - 2 * r1 * r2 * std::cos(d)));
}

}  // namespace plateau::oracle
