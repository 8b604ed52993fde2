#include "plateau/euclidean_space.hpp"

#include <cmath>

namespace plateau {

EuclideanSpace::EuclideanSpace(int n) : n_(n) {
  if (n < 1 || n > 8) throw Error(ErrorCode::InvalidArgument, "Euclidean dimension must be in [1, 8]");
}

std::string EuclideanSpace::describe() const { return "Euclidean(" + std::to_string(n_) + ")"; }

void EuclideanSpace::validate(const Point& p) const {
  if (p.chart != 0) throw Error(ErrorCode::InvalidChart, "Euclidean space has only chart 0, got " + p.str());
  if (p.dim() != n_) throw Error(ErrorCode::InvalidChart, "coordinate dimension mismatch " + p.str());
  if (!p.coords.allFinite()) throw Error(ErrorCode::InvalidChart, "non-finite coordinates " + p.str());
}

double EuclideanSpace::distance(const Point& p, const Point& q) const {
  validate(p);
  validate(q);
  return (p.coords - q.coords).norm();
}

Point EuclideanSpace::geodesic_point(const Point& p, const Point& q, double t) const {
  validate(p);
  validate(q);
  if (t <= 0) return p;
  if (t >= 1) return q;
  return Point(0, ((1.0 - t) * p.coords + t * q.coords).eval());
}

double EuclideanSpace::link_length(const Point& v) const {
  if (n_ != 2) return MetricSpace::link_length(v);
  validate(v);
  return 2.0 * M_PI;
}

Point EuclideanSpace::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Coords c(n_);
  for (int i = 0; i < n_; ++i) c(i) = u(rng) * length_scale();
  return Point(0, c);
}

FrechetResult EuclideanSpace::frechet_mean(const std::vector<Point>& pts, const std::vector<double>& w,
                                           const Point*) const {
  if (pts.empty() || pts.size() != w.size())
    throw Error(ErrorCode::InvalidArgument, "frechet_mean: points and weights differ in size");
  Coords acc = Coords::Zero(n_);
  double W = 0.0;
  int positive = 0, last = -1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    validate(pts[i]);
    if (w[i] <= 0) continue;
    acc += w[i] * pts[i].coords;
    W += w[i];
    ++positive;
    last = static_cast<int>(i);
  }
  if (!(W > 0)) throw Error(ErrorCode::InvalidArgument, "frechet_mean: no positive weight");
  FrechetResult r;
  r.point = positive == 1 ? pts[last] : Point(0, (acc / W).eval());
  r.objective = frechet_objective(r.point, pts, w);
  r.converged = true;
  r.iterations = 1;
  return r;
}

std::optional<double> EuclideanSpace::exact_angle(const Point& q, const Point& x, const Point& y) const {
  const Coords u = x.coords - q.coords, v = y.coords - q.coords;
  const double nu = u.norm(), nv = v.norm();
  if (nu == 0 || nv == 0) return std::nullopt;
  // 2 atan2(|a - b|, |a + b|) with a, b scaled to a common length.
  const Coords a = nv * u, b = nu * v;
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

Point EuclideanSpace::make(std::initializer_list<double> xs) const {
  Point p(0, xs);
  validate(p);
  return p;
}

}  // namespace plateau
