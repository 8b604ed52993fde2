#include "plateau/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace plateau {

const char* kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::Euclidean: return "euclidean";
    case SpaceKind::EuclideanCone: return "euclidean_cone";
    case SpaceKind::PolyhedralComplex: return "polyhedral_complex";
    case SpaceKind::GluedPlanes: return "glued_planes";
    case SpaceKind::FunnelExtension: return "funnel_extension";
  }
  return "unknown";
}

double DistanceField::operator()(const Point& q) const { return space_.distance(center_, q); }

double MetricSpace::link_length(const Point&) const {
  throw Error(ErrorCode::NotTwoDimensional, "link length needs a two-dimensional space");
}

std::unique_ptr<DistanceField> MetricSpace::distance_field(const Point& center) const {
  return std::make_unique<DistanceField>(*this, center);
}

std::optional<double> MetricSpace::exact_angle(const Point&, const Point&, const Point&) const {
  return std::nullopt;
}

bool MetricSpace::same_point(const Point& p, const Point& q) const {
  if (p == q) return true;
  return distance(p, q) <= 1e-12 * std::max(1.0, length_scale());
}

double MetricSpace::frechet_objective(const Point& x, const std::vector<Point>& pts,
                                      const std::vector<double>& w) const {
  double f = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (w[i] <= 0) continue;
    const double d = distance(x, pts[i]);
    f += w[i] * d * d;
  }
  return f;
}

FrechetResult MetricSpace::frechet_mean(const std::vector<Point>& pts, const std::vector<double>& w,
                                        const Point* warm) const {
  if (pts.empty() || pts.size() != w.size())
    throw Error(ErrorCode::InvalidArgument, "frechet_mean: points and weights differ in size");
  const double W = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(W > 0)) throw Error(ErrorCode::InvalidArgument, "frechet_mean: no positive weight");

  FrechetResult best;
  best.objective = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (w[i] <= 0) continue;
    const double f = frechet_objective(pts[i], pts, w);
    if (f < best.objective) {
      best.objective = f;
      best.point = pts[i];
    }
  }
  std::size_t positive = 0;
  for (double wi : w) positive += wi > 0;
  if (positive == 1) {
    best.converged = true;
    return best;
  }

  Point x = warm ? *warm : best.point;
  const double tol = mean_tolerance();
  const int max_cycles = 4000;
  int cycle = 0;
  double residual = INFINITY;
  for (; cycle < max_cycles; ++cycle) {
    const double lambda = 1.0 / (1.0 + cycle);
    Point start = x;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (w[i] <= 0) continue;
      const double s = lambda * w[i] / W;
      x = geodesic_point(x, pts[i], s / (1.0 + s));
    }
    residual = distance(start, x) / lambda;
    const double f = frechet_objective(x, pts, w);
    if (f < best.objective) {
      best.objective = f;
      best.point = x;
    }
    if (distance(start, x) <= tol) break;
  }
  best.residual = residual;
  best.iterations = cycle + 1;
  best.converged = cycle < max_cycles;
  return best;
}

double angle_from_sides(double a, double b, double c) {
  // Kahan: angle between sides a and b, opposite side c.
  if (a <= 0 || b <= 0) return 0.0;
  if (a < b) std::swap(a, b);
  double mu;
  if (b >= c) {
    mu = c - (a - b);
  } else {
    mu = b - (a - c);
  }
  if (c > a + b) return M_PI;
  const double num = ((a - b) + c) * mu;
  const double den = (a + (b + c)) * ((a - c) + b);
  if (den <= 0) return M_PI;
  if (num <= 0) return 0.0;
  return 2.0 * std::atan(std::sqrt(num / den));
}

double heron_area(double a, double b, double c) {
  double s[3] = {a, b, c};
  std::sort(s, s + 3, std::greater<double>());
  const double x = s[0], y = s[1], z = s[2];
  const double p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return p <= 0 ? 0.0 : 0.25 * std::sqrt(p);
}

}  // namespace plateau
