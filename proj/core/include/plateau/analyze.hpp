#pragma once

#include <cstdint>
#include <vector>

#include "plateau/comparison.hpp"
#include "plateau/curve.hpp"
#include "plateau/mesh.hpp"
#include "plateau/pullback.hpp"

namespace plateau {

// Centroids of the m^2 congruent sub-triangles, in barycentric coordinates.
// upward[i] tells whether sample i comes from an upward sub-triangle.
std::vector<Eigen::Vector3d> stratified_barycentric(int m, std::vector<char>* upward = nullptr);
// Barycentric-geodesic interpolation: geodesic from a to b, then towards c.
Point map_point(const MeshMap& map, int tri, const Eigen::Vector3d& bary);
Vec2 domain_point(const DiscMesh& mesh, int tri, const Eigen::Vector3d& bary);
// Triangle and barycentric coordinates of a domain point (nearest triangle if outside).
std::pair<int, Eigen::Vector3d> locate_domain(const DiscMesh& mesh, const Vec2& x);
// Distance from p to the image of the boundary loop (geodesic edge samples).
double boundary_image_distance(const MeshMap& map, const Point& p, int samples_per_edge = 8);

struct DensityProfile {
  Point center;
  std::vector<double> radii;
  std::vector<double> theta;
  std::vector<double> stderr_;  // half the gap between the upward and downward half-sample estimates
  double monotonicity_defect = 0.0;
  double theta_zero = 0.0;
  double max_stderr = 0.0;
  double boundary_distance = 0.0;
};

std::vector<double> radius_grid(double r_min, double r_max, int n);
// theta(r) = sum_T |T|_pullback * frac_T(r) / (pi r^2).
DensityProfile density_profile(const MeshMap& map, const Point& p, const std::vector<double>& radii,
                               int samples_per_triangle = 256);

struct MonotonicityVerdict {
  double defect = 0.0;
  double slack = 0.0;
  double estimator_error = 0.0;
  bool pass = false;
};
MonotonicityVerdict check_monotonicity(const DensityProfile& profile, double slack);

struct Preimage {
  int tri = -1;
  Eigen::Vector3d bary = Eigen::Vector3d::Zero();
  Vec2 domain = Vec2::Zero();
  double image_distance = 0.0;
};
struct PreimageReport {
  int count = 0;
  std::vector<Preimage> points;  // one representative per cluster
};
PreimageReport find_preimages(const MeshMap& map, const PullbackMetric& pullback, const Point& p, double image_tol,
                              double cluster_tol);
int count_preimages(const MeshMap& map, const Point& p, double image_tol, double cluster_tol);

struct InjectivityWitness {
  int tri_a = -1, tri_b = -1;
  Eigen::Vector3d bary_a = Eigen::Vector3d::Zero(), bary_b = Eigen::Vector3d::Zero();
  Vec2 domain_a = Vec2::Zero(), domain_b = Vec2::Zero();
  double d_image = 0.0;
  double d_pullback = 0.0;
  double ratio = 0.0;
};
struct InjectivityReport {
  double delta = 0.0;
  double epsilon = 0.0;
  double min_ratio = 0.0;
  long long pairs_scanned = 0;
  int pairs_exact = 0;              // pairs recomputed with exact pull-back distances
  double unverified_bound = 0.0;    // lower bound on the ratio of every other pair
  std::vector<InjectivityWitness> witnesses;  // worst first
  bool embedded = false;
};
InjectivityReport injectivity_report(const MeshMap& map, double delta, double epsilon, int witnesses = 5);

// Exact pull-back distance between two domain points via the string-pulled sleeve.
double pullback_distance(const PullbackMetric& pb, int ta, const Eigen::Vector3d& a, int tb,
                         const Eigen::Vector3d& b);
// Pull-back distance from vertex v. Each triangle gets a virtual source (the
// last bend of the string-pulled path to its centroid), so values are exact
// wherever the geodesics into a triangle share one combinatorial type.
class VertexDistance {
 public:
  VertexDistance(const PullbackMetric& pb, int v);
  double operator()(int t, const Vec2& local) const { return offset_[t] + (local - source_[t]).norm(); }
  double at(int t, const Eigen::Vector3d& bary) const { return (*this)(t, pb_.local(t, bary)); }

 private:
  const PullbackMetric& pb_;
  std::vector<Vec2> source_;
  std::vector<double> offset_;
};

BishopGromovSample check_bishop_gromov(const PullbackMetric& pb, int p, double r, int samples_per_triangle = 256);
// Largest radius allowed for check_bishop_gromov at p.
double bg_radius_limit(const PullbackMetric& pb, int p);

ComparisonReport check_cn(const PullbackMetric& pb, int samples, std::uint64_t seed = 1);

// Angle defects 2pi - angle sum at interior vertices. Rigid-cone verdict: at
// most `max_cones` vertices outside tol, their defects summing to
// cone_defect +- cone_tol, every other defect <= tol.
ComparisonReport flatness_report(const PullbackMetric& pb, double tol = 1e-3, int max_cones = 1,
                                 double cone_defect = -2 * M_PI, double cone_tol = 0.1);

double isoperimetric_ratio(const MeshMap& map, const PolygonalCurve& curve);

}  // namespace plateau
