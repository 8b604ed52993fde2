#pragma once

#include <Eigen/Core>
#include <initializer_list>
#include <string>

namespace plateau {

// Chart-local coordinates. Ambient dimension is capped at 8.
using Coords = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 8, 1>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

struct Point {
  int chart = 0;
  Coords coords;

  Point() = default;
  Point(int c, const Coords& x) : chart(c), coords(x) {}
  Point(int c, std::initializer_list<double> xs);

  static Point planar(int chart, double x, double y);
  static Point from(int chart, const Vec2& v) { return planar(chart, v.x(), v.y()); }

  int dim() const { return static_cast<int>(coords.size()); }
  Vec2 xy() const { return Vec2(coords(0), coords(1)); }
  std::string str() const;

  friend bool operator==(const Point& a, const Point& b) {
    return a.chart == b.chart && a.coords.size() == b.coords.size() && a.coords == b.coords;
  }
};

}  // namespace plateau
