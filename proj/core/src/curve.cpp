#include "plateau/curve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "plateau/cone_space.hpp"
#include "plateau/space_ops.hpp"

namespace plateau {

double PolygonalCurve::length() const {
  double s = 0.0;
  for (double l : edge_lengths) s += l;
  return s;
}

double PolygonalCurve::vertex_param(int i) const {
  const double L = length();
  double s = 0.0;
  for (int k = 0; k < i; ++k) s += edge_lengths[k];
  return L > 0 ? s / L : 0.0;
}

PolygonalCurve make_curve(const MetricSpace& space, std::vector<Point> vertices, bool closed) {
  PolygonalCurve c;
  c.vertices = std::move(vertices);
  c.closed = closed;
  const int n = c.size();
  for (const Point& p : c.vertices) space.validate(p);
  const int edges = closed ? n : n - 1;
  const double tiny = 1e-14 * std::max(1.0, space.length_scale());
  for (int i = 0; i < edges; ++i) {
    const double l = space.distance(c.vertices[i], c.vertices[(i + 1) % n]);
    if (l <= tiny) throw Error(ErrorCode::DegenerateVertex, "consecutive vertices coincide at " + std::to_string(i));
    c.edge_lengths.push_back(l);
  }
  return c;
}

CurvatureReport total_curvature(const MetricSpace& space, const PolygonalCurve& curve) {
  if (!curve.closed) throw Error(ErrorCode::InvalidCurve, "total curvature needs a closed polygon");
  const int n = curve.size();
  if (n < 3) throw Error(ErrorCode::InvalidCurve, "a closed polygon needs at least three vertices");
  CurvatureReport rep;
  rep.turning_angles.resize(n);
  for (int i = 0; i < n; ++i) {
    const Point& prev = curve.vertices[(i + n - 1) % n];
    const Point& here = curve.vertices[i];
    const Point& next = curve.vertices[(i + 1) % n];
    double angle;
    try {
      angle = upper_angle(space, here, prev, next);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateQuery)
        throw Error(ErrorCode::DegenerateVertex, "vertex " + std::to_string(i) + " coincides with a neighbour");
      throw;
    }
    rep.turning_angles[i] = std::clamp(M_PI - angle, 0.0, M_PI);
  }
  for (double a : rep.turning_angles) rep.kappa += a;
  rep.fenchel_ok = rep.kappa >= 2 * M_PI - 1e-9;
  return rep;
}

PolygonalCurve inscribe(const MetricSpace& space, const Sampler& sampler, int n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "inscribe needs n >= 3");
  std::vector<Point> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    try {
      v.push_back(sampler(static_cast<double>(i) / n));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::SamplerFailure, e.what());
    }
  }
  return make_curve(space, std::move(v), true);
}

CurveLocation locate_param(const PolygonalCurve& curve, double t) {
  const double L = curve.length();
  if (!(L > 0)) throw Error(ErrorCode::InvalidCurve, "curve has zero length");
  t -= std::floor(t);
  double s = t * L;
  const int m = static_cast<int>(curve.edge_lengths.size());
  for (int i = 0; i < m; ++i) {
    const double l = curve.edge_lengths[i];
    if (s < l || i + 1 == m) return {i, std::clamp(s / l, 0.0, 1.0)};
    s -= l;
  }
  return {0, 0.0};
}

Point arc_length_param(const MetricSpace& space, const PolygonalCurve& curve, double t) {
  const CurveLocation loc = locate_param(curve, t);
  const int n = curve.size();
  return space.geodesic_point(curve.vertices[loc.edge], curve.vertices[(loc.edge + 1) % n], loc.fraction);
}

double min_edge_separation(const MetricSpace& space, const PolygonalCurve& curve, int k) {
  const int n = curve.size();
  const int m = static_cast<int>(curve.edge_lengths.size());
  std::vector<std::vector<Point>> samples(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= k; ++j)
      samples[i].push_back(space.geodesic_point(curve.vertices[i], curve.vertices[(i + 1) % n], double(j) / k));
  double best = INFINITY;
  for (int i = 0; i < m; ++i)
    for (int j = i + 2; j < m; ++j) {
      if (curve.closed && i == 0 && j == m - 1) continue;
      for (const Point& a : samples[i])
        for (const Point& b : samples[j]) best = std::min(best, space.distance(a, b));
    }
  return best;
}

Sampler circle_sampler(const MetricSpace& space, double radius, const Coords& center) {
  const int d = space.dimension();
  return [d, radius, center](double t) {
    Coords c = center.size() == d ? center : Coords::Zero(d);
    c(0) += radius * std::cos(2 * M_PI * t);
    c(1) += radius * std::sin(2 * M_PI * t);
    return Point(0, c);
  };
}

Sampler trefoil_sampler(const MetricSpace& space) {
  if (space.dimension() != 3) throw Error(ErrorCode::InvalidArgument, "trefoil needs Euclidean(3)");
  return [](double t) {
    const double a = 2 * M_PI * t;
    Coords c(3);
    c << std::sin(a) + 2 * std::sin(2 * a), std::cos(a) - 2 * std::cos(2 * a), -std::sin(3 * a);
    return Point(0, c);
  };
}

PolygonalCurve regular_polygon(const MetricSpace& space, int n, double radius) {
  return inscribe(space, circle_sampler(space, radius, Coords::Zero(space.dimension())), n);
}

PolygonalCurve cone_circle(const MetricSpace& space, int n, double radius) {
  const auto* cone = dynamic_cast<const ConeSpace*>(&space);
  if (!cone) throw Error(ErrorCode::InvalidArgument, "cone_circle needs a cone space");
  const double total = cone->apex_link_length();
  std::vector<Point> v;
  for (int i = 0; i < n; ++i) v.push_back(cone->at_angle(total * i / n, radius));
  return make_curve(space, std::move(v), true);
}

PolygonalCurve random_polygon(const MetricSpace& space, int n, std::uint64_t seed, double wobble) {
  if (space.dimension() != 3) throw Error(ErrorCode::InvalidArgument, "random_polygon needs Euclidean(3)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> v;
  for (int i = 0; i < n; ++i) {
    const double a = 2 * M_PI * i / n;
    const double r = 1.0 + 0.25 * wobble * u(rng);
    Coords c(3);
    c << r * std::cos(a), r * std::sin(a), wobble * u(rng);
    v.push_back(Point(0, c));
  }
  return make_curve(space, std::move(v), true);
}

namespace {
const ConeSpace& glued(const MetricSpace& space) {
  const auto* cone = dynamic_cast<const ConeSpace*>(&space);
  if (!cone || cone->kind() != SpaceKind::GluedPlanes)
    throw Error(ErrorCode::InvalidArgument, "example52 needs a GluedPlanes space");
  return *cone;
}
}  // namespace

PolygonalCurve example52_curve(const MetricSpace& space) {
  const ConeSpace& g = glued(space);
  const double rho[8] = {3.0, 2.5, 2.5, 1.5, 1.5, 2.5, 2.5, 3.0};
  std::vector<Point> v;
  for (int k = 0; k < 8; ++k) {
    const double th = M_PI / 4 + k * M_PI / 2;
    const int sheet = th < 2 * M_PI ? 1 : 2;
    v.push_back(g.plane_point(sheet, -rho[k] * std::sin(th), 1.0 + rho[k] * std::cos(th)));
  }
  return make_curve(space, std::move(v), true);
}

Point example52_base(const MetricSpace& space) { return glued(space).plane_point(1, 0.0, 1.0); }

Point example52_double_point(const MetricSpace& space) { return glued(space).plane_point(1, 0.0, 1.5); }

}  // namespace plateau
