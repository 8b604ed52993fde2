#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plateau/analyze.hpp"
#include "plateau/comparison.hpp"
#include "plateau/curve.hpp"
#include "plateau/solve.hpp"

namespace plateau {

// X glued along the polygon to a flat funnel: a half-strip [0, l_i] x [0, R]
// over every edge and a sector of angle a_i = pi - (interior angle) at every
// vertex, so the sector angles sum to the total curvature.
//
// Chart ids: base charts keep their ids [0, B); strip i is B + i with local
// coordinates (s, t), s along the edge from vertex i, t the distance from the
// curve; sector i (at vertex i, between strips i-1 and i) is B + n + i with
// local coordinates rho (cos phi, sin phi), phi in [0, a_i] measured from the
// side shared with strip i-1. Sectors are truncated by the polygon through the
// points at radius R and phi = a_i k / K_i.
class FunnelExtension final : public MetricSpace {
 public:
  FunnelExtension(SpacePtr base, PolygonalCurve curve, double truncation, int portals_per_edge);

  SpaceKind kind() const override { return SpaceKind::FunnelExtension; }
  std::string describe() const override;
  int dimension() const override { return 2; }
  int chart_count() const override { return base_charts_ + 2 * n_; }
  void validate(const Point& p) const override;
  double distance(const Point& p, const Point& q) const override;
  Point geodesic_point(const Point& p, const Point& q, double t) const override;
  std::vector<Point> singular_vertices() const override { return base_->singular_vertices(); }
  Point random_point(std::mt19937_64& rng) const override;
  std::unique_ptr<DistanceField> distance_field(const Point& center) const override;

  const MetricSpace& base() const { return *base_; }
  SpacePtr base_ptr() const { return base_; }
  const PolygonalCurve& curve() const { return curve_; }
  int edge_count() const { return n_; }
  double kappa() const { return kappa_; }
  const std::vector<double>& sector_angles() const { return alpha_; }
  int sector_divisions(int i) const { return sector_k_[i]; }
  double truncation() const { return R_; }
  int portals_per_edge() const { return portals_; }
  double curve_diameter() const { return diameter_; }

  int strip_chart(int i) const { return base_charts_ + i; }
  int sector_chart(int i) const { return base_charts_ + n_ + i; }
  bool in_funnel(const Point& p) const { return p.chart >= base_charts_; }
  Point strip_point(int i, double s, double t) const;
  Point sector_point(int i, double rho, double phi) const;
  // Point of the curve on edge i at distance s from vertex i, as a base point.
  Point curve_point(int edge, double s) const;
  // Distance from the curve for a funnel point.
  double funnel_depth(const Point& p) const;
  // Length of the level curve at funnel distance r (circular sectors).
  double level_length(double r) const { return curve_.length() + kappa_ * r; }
  // Area of the truncated charts (polygonal sector truncation).
  double funnel_area() const;

  // Base distances from a base center to every portal, in portal order.
  std::vector<double> portal_distances(const Point& center) const;
  // min over curve points g of h(g) + |g q| for a funnel point q, where h is
  // d(center, .) in the base and hp its values at the portals.
  double mixed_distance(const Point& center, const std::vector<double>& hp, const Point& q) const;

 private:
  struct Affine {
    Eigen::Matrix2d rot = Eigen::Matrix2d::Identity();
    Vec2 shift = Vec2::Zero();
    Vec2 apply(const Vec2& x) const { return rot * x + shift; }
  };
  struct Lifted {
    long unrolled = 0;  // 2k sector k, 2k + 1 strip k, plus 2n per lap
    Vec2 dev;
    double turn_lo = 0.0, turn_hi = 0.0;
  };
  struct Crossing {
    int edge = -1;
    double s = 0.0;
    int lap = 0;
  };
  struct Route {
    enum Kind { Base, Straight, Mixed, Mixed2 } kind = Base;
    double length = INFINITY;
    bool reversed = false;  // Mixed: funnel point first
    Crossing g1, g2;
    long straight_from = 0, straight_to = 0;
    Vec2 a_dev, b_dev;
  };

  int unrolled_chart(long u) const;
  Affine chart_frame(long u) const;
  Affine holonomy_power(long laps) const;
  Vec2 vertex_dev(long w) const;
  Lifted lift(const Point& p, long laps) const;
  bool on_curve(const Lifted& a, double eps) const;
  bool outward(const Lifted& a, const Vec2& dir, double eps) const;
  bool visible(const Lifted& a, const Lifted& b) const;
  // Straight funnel distance with the best visible lift; INFINITY if none.
  double straight(const Point& a, const Point& b, long* from = nullptr, long* to = nullptr, Vec2* adev = nullptr,
                  Vec2* bdev = nullptr) const;
  Lifted gamma_lift(int edge, double s) const;
  double mixed(const Point& center, const std::vector<double>& hp, const Point& q, Crossing* best) const;
  double base_to_curve(const Point& center, int edge, double s) const;
  Route route(const Point& p, const Point& q) const;
  Point from_dev(long from, long to, const Vec2& x) const;

  SpacePtr base_;
  PolygonalCurve curve_;
  int n_ = 0;
  int base_charts_ = 0;
  double R_ = 0.0;
  int portals_ = 16;
  double kappa_ = 0.0;
  double diameter_ = 0.0;
  std::vector<double> alpha_;
  std::vector<int> sector_k_;
  std::vector<double> theta_;  // strip direction, lap 0
  std::vector<Vec2> origin_;   // strip origin, lap 0; origin_[n] closes the lap
  Affine hol_;
  std::vector<Point> vertex_base_;
};

using FunnelPtr = std::shared_ptr<const FunnelExtension>;

// R <= 0 selects 8 x curve diameter. Throws DegenerateAngle if a turning angle
// leaves [0, pi] beyond tolerance, InvalidCurve for non-simple input.
FunnelPtr build_funnel(SpacePtr space, const PolygonalCurve& curve, double R = 0.0, int portals_per_edge = 16);

double extended_distance(const FunnelExtension& ext, const Point& p, const Point& q);

// Disc map plus an annular funnel mesh, one sub-mesh per chart, glued to the
// disc along the curve. Vertices [0, disc_vertices) and triangles
// [0, disc_triangles) are the solved disc.
struct ExtendedMap {
  MeshMap map;
  int disc_vertices = 0;
  int disc_triangles = 0;
  std::vector<int> disc_boundary;
  int disc_rings = 0;
  double disc_area = 0.0;
  double funnel_area = 0.0;  // sum of funnel triangle areas
  MeshMap disc() const;
};

ExtendedMap extend_plateau(const SolveResult& result, FunnelPtr ext, int funnel_rings = 24);

struct GrowthReport {
  std::vector<double> radii;
  std::vector<double> theta;
  std::vector<double> stderr_;
  double theta_infinity_estimate = 0.0;
  double predicted = 0.0;  // kappa / 2pi
  double error = 0.0;      // |estimate - predicted|
  double monotonicity_defect = 0.0;
  double cap = 0.0;  // 0.8 R
};

// Throws RadiusTooLarge if a radius exceeds 0.8 R.
GrowthReport area_growth(const ExtendedMap& extended, const FunnelExtension& ext, const Point& p,
                         const std::vector<double>& radii, int samples_per_triangle = 64);

struct KeyEstimate {
  int bound = 0;  // floor(kappa / 2pi + 0.1)
  std::vector<int> counts;
  int worst_probe = -1;
  int worst_count = 0;
  bool pass = false;
};

KeyEstimate key_estimate_check(const ExtendedMap& extended, const FunnelExtension& ext, double kappa,
                               const std::vector<Point>& probes, double image_tol, double cluster_tol);

enum class Verdict { Embedded, RigidConeCandidate, AboveThreshold, Inconclusive };
const char* verdict_name(Verdict v);

struct FaryMilnorOptions {
  double tol_kappa = 1e-6;
  bool skip_funnel = false;
  double delta_fraction = 0.1;  // injectivity separation as a fraction of the curve diameter
  double epsilon_ratio = 0.1;   // embedded iff min_ratio >= epsilon / delta
  double flat_tol = 1e-3;
  int funnel_rings = 24;
};

struct FaryMilnorVerdict {
  double kappa = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::optional<SolveResult> solve;
  std::optional<InjectivityReport> injectivity;
  std::optional<ComparisonReport> flatness;
  std::optional<GrowthReport> growth;
};

FaryMilnorVerdict fary_milnor(SpacePtr space, const PolygonalCurve& curve, const SolverConfig& cfg,
                              const FaryMilnorOptions& opt = {});
// Same pipeline on an existing solve. Given reports replace the injectivity
// and funnel stages; the injectivity report must use the options' delta and
// epsilon.
FaryMilnorVerdict fary_milnor_from_solve(SpacePtr space, const PolygonalCurve& curve, SolveResult solved,
                                         const FaryMilnorOptions& opt = {}, const GrowthReport* growth = nullptr,
                                         const InjectivityReport* injectivity = nullptr);

}  // namespace plateau
