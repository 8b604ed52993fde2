#pragma once

#include <array>
#include <vector>

#include "plateau/space.hpp"

namespace plateau {

// Euclidean cone over a metric graph (the link). Two instances:
//   EuclideanCone(a): link is a circle of length a.
//   GluedPlanes(a):   link is a theta graph with arcs a, 2pi-a, 2pi-a, i.e. two
//                     planes P1 = S u A and P2 = S u B sharing the sector S of angle a.
// Charts are closed sectors of angle <= pi/2 cut out of one link arc. Chart
// coordinates are planar with the apex at the origin; for GluedPlanes they are
// the plane coordinates of P1 or P2.
class ConeSpace final : public MetricSpace {
 public:
  struct LinkPos {
    int arc = 0;
    double s = 0.0;
  };
  struct Polar {
    LinkPos pos;
    double r = 0.0;
  };

  static std::shared_ptr<ConeSpace> euclidean_cone(double alpha);
  static std::shared_ptr<ConeSpace> glued_planes(double alpha);

  SpaceKind kind() const override { return kind_; }
  std::string describe() const override;
  int dimension() const override { return 2; }
  int chart_count() const override { return static_cast<int>(pieces_.size()); }
  void validate(const Point& p) const override;
  double distance(const Point& p, const Point& q) const override;
  Point geodesic_point(const Point& p, const Point& q, double t) const override;
  double link_length(const Point& v) const override;
  std::vector<Point> singular_vertices() const override;
  Point random_point(std::mt19937_64& rng) const override;
  FrechetResult frechet_mean(const std::vector<Point>& pts, const std::vector<double>& w,
                             const Point* warm = nullptr) const override;
  std::optional<double> exact_angle(const Point& q, const Point& x, const Point& y) const override;

  double cone_angle() const { return alpha_; }
  double apex_link_length() const;
  Point apex() const { return Point::planar(0, 0.0, 0.0); }

  Polar to_polar(const Point& p) const;
  Point from_polar(const Polar& p) const;
  // EuclideanCone: point at total angle phi (taken mod alpha) and radius r.
  Point at_angle(double phi, double r) const;
  // GluedPlanes: sheet 1 is P1 = S u A, sheet 2 is P2 = S u B. EuclideanCone:
  // sheet k adds 2pi(k-1) to the polar angle.
  Point plane_point(int sheet, double x, double y) const;
  // GluedPlanes: 0 = shared sector S, 1 = A, 2 = B. EuclideanCone: 0.
  int region(const Point& p) const;

  double link_distance(const LinkPos& a, const LinkPos& b) const;
  LinkPos link_walk(const LinkPos& from, const LinkPos& to, double phi) const;
  std::vector<int> charts_at(const LinkPos& pos) const;

 private:
  struct Arc {
    int v0, v1;
    double len, offset;
  };
  struct Piece {
    int arc;
    double s0, s1;
  };
  struct Route {
    double len;
    bool direct;
    int e1, e2;
  };
  struct Hop {
    int arc = -1;
    bool forward = true;
  };

  ConeSpace(SpaceKind kind, double alpha, std::vector<Arc> arcs, int nverts);

  Route best_route(const LinkPos& a, const LinkPos& b) const;
  double vertex_to_pos(int v, const LinkPos& p) const;
  double chart_angle(int chart, const Vec2& y) const;
  Vec2 project(int chart, const Vec2& z) const;
  Vec2 chart_coords(int chart, const Polar& p) const;

  // Per-chart Frechet machinery.
  struct Developed {
    std::array<double, 3> psi;
    int n;
    double r;
  };
  Developed develop(int chart, const Polar& p) const;
  double chart_objective(int chart, const Vec2& y, const std::vector<Developed>& dev,
                         const std::vector<double>& w) const;
  Vec2 chart_step(int chart, const Vec2& y, const std::vector<Developed>& dev,
                  const std::vector<double>& w, double W) const;
  Vec2 chart_minimize(int chart, Vec2 y, const std::vector<Polar>& pts, const std::vector<double>& w,
                      double W, int& iterations, double& residual) const;

  SpaceKind kind_;
  double alpha_;
  std::vector<Arc> arcs_;
  std::vector<Piece> pieces_;
  int nverts_;
  std::vector<std::vector<double>> vd_;
  std::vector<std::vector<Hop>> next_;
};

}  // namespace plateau
