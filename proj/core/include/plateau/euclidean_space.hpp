#pragma once

#include "plateau/space.hpp"

namespace plateau {

// R^n as a single chart (chart id 0).
class EuclideanSpace final : public MetricSpace {
 public:
  explicit EuclideanSpace(int n);

  SpaceKind kind() const override { return SpaceKind::Euclidean; }
  std::string describe() const override;
  int dimension() const override { return n_; }
  int chart_count() const override { return 1; }
  void validate(const Point& p) const override;
  double distance(const Point& p, const Point& q) const override;
  Point geodesic_point(const Point& p, const Point& q, double t) const override;
  double link_length(const Point& v) const override;
  Point random_point(std::mt19937_64& rng) const override;
  FrechetResult frechet_mean(const std::vector<Point>& pts, const std::vector<double>& w,
                             const Point* warm = nullptr) const override;
  std::optional<double> exact_angle(const Point& q, const Point& x, const Point& y) const override;

  Point make(std::initializer_list<double> xs) const;
  Point make(const Coords& c) const { return Point(0, c); }

 private:
  int n_;
};

}  // namespace plateau
