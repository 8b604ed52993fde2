#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "plateau/error.hpp"
#include "plateau/point.hpp"

namespace plateau {

enum class SpaceKind { Euclidean, EuclideanCone, PolyhedralComplex, GluedPlanes, FunnelExtension };

const char* kind_name(SpaceKind k);

struct FrechetResult {
  Point point;
  double objective = 0.0;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

class MetricSpace;

// d(center, .) with whatever precomputation the space can share across queries.
class DistanceField {
 public:
  DistanceField(const MetricSpace& space, Point center) : space_(space), center_(std::move(center)) {}
  virtual ~DistanceField() = default;
  virtual double operator()(const Point& q) const;
  const Point& center() const { return center_; }

 protected:
  const MetricSpace& space_;
  Point center_;
};

// Metric oracle over a chart-addressed space. Immutable after construction,
// so every const member is safe to call concurrently.
class MetricSpace {
 public:
  virtual ~MetricSpace() = default;

  virtual SpaceKind kind() const = 0;
  virtual std::string describe() const = 0;
  virtual int dimension() const = 0;
  virtual int chart_count() const = 0;

  // Throws InvalidChart when the chart is missing or coords leave its domain.
  virtual void validate(const Point& p) const = 0;

  virtual double distance(const Point& p, const Point& q) const = 0;
  virtual Point geodesic_point(const Point& p, const Point& q, double t) const = 0;

  // Total angle around v. Default: NotTwoDimensional.
  virtual double link_length(const Point& v) const;
  // Points whose link differs from 2pi (cone tips, branching rays sampled once).
  virtual std::vector<Point> singular_vertices() const { return {}; }

  virtual Point random_point(std::mt19937_64& rng) const = 0;
  virtual double length_scale() const { return scale_; }
  void set_length_scale(double s) { scale_ = s; }
  double geodesic_tolerance() const { return 1e-6 * length_scale(); }
  double mean_tolerance() const { return 1e-9 * length_scale(); }

  // Minimizer of sum w_i d(x, p_i)^2. Default: cyclic proximal point sweeps
  // (pairwise geodesic interpolation in a fixed order).
  virtual FrechetResult frechet_mean(const std::vector<Point>& pts, const std::vector<double>& w,
                                     const Point* warm = nullptr) const;

  virtual std::unique_ptr<DistanceField> distance_field(const Point& center) const;

  // Exact angle at q if the space has a closed form; nullopt means "use probes".
  virtual std::optional<double> exact_angle(const Point& q, const Point& x, const Point& y) const;

  bool same_point(const Point& p, const Point& q) const;
  double frechet_objective(const Point& x, const std::vector<Point>& pts, const std::vector<double>& w) const;

 private:
  double scale_ = 1.0;
};

using SpacePtr = std::shared_ptr<const MetricSpace>;

// Angle from three side lengths, stable near 0 and pi.
double angle_from_sides(double adjacent1, double adjacent2, double opposite);
// Area from three side lengths, stable for needles.
double heron_area(double a, double b, double c);

}  // namespace plateau
