#include "plateau/point.hpp"

#include <cstdio>

namespace plateau {

Point::Point(int c, std::initializer_list<double> xs) : chart(c), coords(static_cast<Eigen::Index>(xs.size())) {
  Eigen::Index i = 0;
  for (double x : xs) coords(i++) = x;
}

Point Point::planar(int chart, double x, double y) {
  Coords c(2);
  c << x, y;
  return Point(chart, c);
}

std::string Point::str() const {
  std::string s = "[" + std::to_string(chart) + ":";
  char buf[40];
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? "," : " ", coords(i));
    s += buf;
  }
  return s + "]";
}

}  // namespace plateau
