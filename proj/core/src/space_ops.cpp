#include "plateau/space_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace plateau {

AngleQuery make_angle_query(const MetricSpace& space, const Point& q, const Point& x, const Point& y) {
  const double side = std::min(space.distance(q, x), space.distance(q, y));
  if (!(side > 0)) throw Error(ErrorCode::DegenerateQuery, "angle base coincides with a target");
  const double delta = 1e-3 * side;
  return {q, x, y, {delta, 0.5 * delta}};
}

double upper_angle(const MetricSpace& space, const AngleQuery& Q) {
  const double dqx = space.distance(Q.q, Q.x), dqy = space.distance(Q.q, Q.y);
  if (!(dqx > 0) || !(dqy > 0)) throw Error(ErrorCode::DegenerateQuery, "angle base coincides with a target");
  if (Q.probe_radii.empty()) throw Error(ErrorCode::DegenerateQuery, "no probe radii");
  for (std::size_t i = 0; i < Q.probe_radii.size(); ++i) {
    if (!(Q.probe_radii[i] > 0)) throw Error(ErrorCode::DegenerateQuery, "probe radius must be positive");
    if (i && !(Q.probe_radii[i] < Q.probe_radii[i - 1]))
      throw Error(ErrorCode::DegenerateQuery, "probe radii must decrease strictly");
  }
  if (!(Q.probe_radii.front() < std::min(dqx, dqy)))
    throw Error(ErrorCode::DegenerateQuery, "probe radius exceeds a geodesic length");
  if (auto exact = space.exact_angle(Q.q, Q.x, Q.y)) return std::clamp(*exact, 0.0, M_PI);

  auto comparison = [&](double r) {
    const Point xr = space.geodesic_point(Q.q, Q.x, r / dqx);
    const Point yr = space.geodesic_point(Q.q, Q.y, r / dqy);
    return angle_from_sides(space.distance(Q.q, xr), space.distance(Q.q, yr), space.distance(xr, yr));
  };
  const std::size_t n = Q.probe_radii.size();
  if (n == 1) return std::clamp(comparison(Q.probe_radii[0]), 0.0, M_PI);
  const double r1 = Q.probe_radii[n - 2], r2 = Q.probe_radii[n - 1];
  const double a1 = comparison(r1), a2 = comparison(r2);
  const double a0 = a2 + (a2 - a1) * r2 / (r1 - r2);
  return std::clamp(a0, 0.0, M_PI);
}

double upper_angle(const MetricSpace& space, const Point& q, const Point& x, const Point& y) {
  return upper_angle(space, make_angle_query(space, q, x, y));
}

double cn_defect(double dxm, double dxy, double dxz, double dyz) {
  return std::max(0.0, dxm * dxm - 0.5 * dxy * dxy - 0.5 * dxz * dxz + 0.25 * dyz * dyz);
}

ComparisonReport verify_cat0(const MetricSpace& space, int samples, std::uint64_t seed) {
  ComparisonReport rep;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Point x = space.random_point(rng), y = space.random_point(rng), z = space.random_point(rng);
    const Point m = space.geodesic_point(y, z, 0.5);
    const double d = cn_defect(space.distance(x, m), space.distance(x, y), space.distance(x, z), space.distance(y, z));
    rep.cn_defect_max = std::max(rep.cn_defect_max, d);
  }
  rep.cn_samples = samples;
  if (space.dimension() == 2) {
    for (const Point& v : space.singular_vertices()) {
      const double L = space.link_length(v);
      if (L < 2 * M_PI - 1e-9) rep.low_links.push_back({v, L});
    }
  }
  return rep;
}

}  // namespace plateau
