#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plateau/cone_space.hpp"
#include "plateau/curve.hpp"
#include "plateau/euclidean_space.hpp"
#include "plateau/space_io.hpp"

using namespace plateau;

namespace {

// Independent turning-angle sum for polygons in R^n.
double kappa_oracle(const std::vector<Point>& v) {
  const int n = static_cast<int>(v.size());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd u = v[i].coords - v[(i + n - 1) % n].coords;
    const Eigen::VectorXd w = v[(i + 1) % n].coords - v[i].coords;
    const double c = u.dot(w) / (u.norm() * w.norm());
    s += std::acos(std::clamp(c, -1.0, 1.0));
  }
  return s;
}

PolygonalCurve load_curve(const std::string& name, SpacePtr& space) {
  const Json j = load_json(std::string(PLATEAU_DATA_DIR) + "/curves/" + name);
  space = space_from_json(j.at("space"));
  return curve_from_json(*space, j);
}

}  // namespace

TEST(Curve, ConvexPlanarPolygons) {
  EuclideanSpace e(2);
  auto sq = make_curve(e, {e.make({0, 0}), e.make({1, 0}), e.make({1, 1}), e.make({0, 1})});
  auto r = total_curvature(e, sq);
  EXPECT_NEAR(r.kappa, 2 * M_PI, 1e-12);
  for (double a : r.turning_angles) EXPECT_NEAR(a, M_PI / 2, 1e-12);
  EXPECT_TRUE(r.fenchel_ok);
  auto tri = make_curve(e, {e.make({0, 0}), e.make({1, 0}), e.make({0.5, std::sqrt(3.0) / 2})});
  EXPECT_NEAR(total_curvature(e, tri).kappa, 2 * M_PI, 1e-12);
  EXPECT_NEAR(total_curvature(e, regular_polygon(e, 64, 1.0)).kappa, 2 * M_PI, 1e-9);
  EXPECT_NEAR(total_curvature(e, regular_polygon(e, 4, 1.0)).kappa, 2 * M_PI, 1e-12);
}

TEST(Curve, Trefoil6) {
  SpacePtr s;
  auto c = load_curve("trefoil6.json", s);
  const double k = total_curvature(*s, c).kappa;
  EXPECT_NEAR(k, kappa_oracle(c.vertices), 1e-12);
  EXPECT_GT(k, 4 * M_PI);
  EXPECT_GT(min_edge_separation(*s, c), 0.0);
}

TEST(Curve, FenchelRandomPolygons) {
  EuclideanSpace e(3);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    std::vector<Point> v;
    const int n = 3 + t % 9;
    for (int i = 0; i < n; ++i) v.push_back(e.make({u(rng), u(rng), u(rng)}));
    auto c = make_curve(e, v);
    const double k = total_curvature(e, c).kappa;
    EXPECT_GE(k, 2 * M_PI - 1e-9);
    EXPECT_NEAR(k, kappa_oracle(v), 1e-9);
    // Cyclic relabeling and reversal.
    std::vector<Point> rot(v.begin() + 1, v.end());
    rot.push_back(v.front());
    EXPECT_NEAR(total_curvature(e, make_curve(e, rot)).kappa, k, 1e-12);
    std::vector<Point> rev(v.rbegin(), v.rend());
    EXPECT_NEAR(total_curvature(e, make_curve(e, rev)).kappa, k, 1e-12);
    // Sub-polygon monotonicity.
    if (n >= 4) {
      std::vector<Point> sub(v.begin(), v.end() - 1);
      EXPECT_LE(total_curvature(e, make_curve(e, sub)).kappa, k + 1e-9);
    }
  }
}

TEST(Curve, InscribedMonotonicity) {
  EuclideanSpace e(3);
  auto s = trefoil_sampler(e);
  const double k16 = total_curvature(e, inscribe(e, s, 16)).kappa;
  const double k32 = total_curvature(e, inscribe(e, s, 32)).kappa;
  EXPECT_LE(k16, k32 + 1e-9);
  EuclideanSpace e2(2);
  EXPECT_NEAR(total_curvature(e2, inscribe(e2, circle_sampler(e2, 1.0, Coords::Zero(2)), 64)).kappa, 2 * M_PI, 1e-3);
}

TEST(Curve, ArcLengthParam) {
  EuclideanSpace e(2);
  auto sq = make_curve(e, {e.make({0, 0}), e.make({1, 0}), e.make({1, 1}), e.make({0, 1})});
  EXPECT_NEAR(e.distance(arc_length_param(e, sq, 0.25), e.make({1, 0})), 0.0, 1e-15);
  EXPECT_NEAR(e.distance(arc_length_param(e, sq, 0.0), e.make({0, 0})), 0.0, 1e-15);
  EXPECT_NEAR(e.distance(arc_length_param(e, sq, 0.125), e.make({0.5, 0})), 0.0, 1e-15);
}

TEST(Curve, Errors) {
  EuclideanSpace e(2);
  EXPECT_THROW(make_curve(e, {e.make({0, 0}), e.make({0, 0}), e.make({1, 1})}), Error);
  try {
    make_curve(e, {e.make({0, 0}), e.make({0, 0}), e.make({1, 1})});
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::DegenerateVertex);
  }
}

TEST(Curve, Example52) {
  SpacePtr s;
  auto c = load_curve("example52.json", s);
  auto gen = example52_curve(*s);
  ASSERT_EQ(c.size(), 8);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(s->distance(c.vertices[i], gen.vertices[i]), 0.0, 1e-12);
  const auto rep = total_curvature(*s, c);
  EXPECT_NEAR(rep.kappa, 4 * M_PI, 1e-9);
  // Development in the plane: each edge is a straight segment on one sheet.
  const double rho[8] = {3.0, 2.5, 2.5, 1.5, 1.5, 2.5, 2.5, 3.0};
  double L = 0.0;
  for (int k = 0; k < 8; ++k) {
    const double a = rho[k], b = rho[(k + 1) % 8];
    L += std::sqrt(a * a + b * b);  // consecutive directions are orthogonal
  }
  EXPECT_NEAR(c.length(), L, 1e-12);
}
