#pragma once

#include <vector>

#include "plateau/piecewise_flat.hpp"
#include "plateau/space.hpp"

namespace plateau {

// Convex flat polygons glued isometrically along edges. Edge a.i (corner i to
// i+1) is glued to b.j reversed, so corner i meets b.(j+1).
class FlatComplex final : public MetricSpace {
 public:
  struct Gluing {
    int chart_a, edge_a, chart_b, edge_b;
  };

  FlatComplex(std::vector<std::vector<Vec2>> charts, std::vector<Gluing> gluings, int subdivisions = 3);

  SpaceKind kind() const override { return SpaceKind::PolyhedralComplex; }
  std::string describe() const override;
  int dimension() const override { return 2; }
  int chart_count() const override { return static_cast<int>(charts_.size()); }
  void validate(const Point& p) const override;
  double distance(const Point& p, const Point& q) const override;
  Point geodesic_point(const Point& p, const Point& q, double t) const override;
  double link_length(const Point& v) const override;
  std::vector<Point> singular_vertices() const override;
  Point random_point(std::mt19937_64& rng) const override;

  const std::vector<std::vector<Vec2>>& charts() const { return charts_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  const TriangleComplex& triangles() const { return tc_; }
  // Complex vertex ids of chart corners.
  int corner_vertex(int chart, int corner) const { return corner_vertex_[chart][corner]; }
  // Triangle and local coordinates holding p.
  std::pair<int, Vec2> locate(const Point& p) const;

 private:
  TriangleComplex::Sleeve sleeve(const Point& p, const Point& q) const;

  std::vector<std::vector<Vec2>> charts_;
  std::vector<Gluing> gluings_;
  std::vector<std::vector<int>> corner_vertex_;
  std::vector<std::vector<int>> chart_tris_;
  std::vector<int> tri_chart_;
  TriangleComplex tc_;
  std::vector<double> chart_area_;
};

}  // namespace plateau
