#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plateau/cone_space.hpp"
#include "plateau/euclidean_space.hpp"
#include "plateau/flat_complex.hpp"
#include "plateau/space_ops.hpp"

using namespace plateau;

namespace {

// Closed-form cone metric from total angles phi1, phi2 on a circle of length alpha.
double cone_oracle(double alpha, double r1, double phi1, double r2, double phi2) {
  double sep = std::fmod(std::abs(phi1 - phi2), alpha);
  sep = std::min(sep, alpha - sep);
  if (sep >= M_PI) return r1 + r2;
  return std::sqrt(std::max(0.0, r1 * r1 + r2 * r2 - 2 * r1 * r2 * std::cos(sep)));
}

std::shared_ptr<FlatComplex> l_shape() {
  std::vector<std::vector<Vec2>> charts = {
      {{0, 0}, {1, 0}, {1, 1}, {0, 1}},
      {{1, 0}, {2, 0}, {2, 1}, {1, 1}},
      {{0, 1}, {1, 1}, {1, 2}, {0, 2}},
  };
  std::vector<FlatComplex::Gluing> g = {{0, 1, 1, 3}, {0, 2, 2, 0}};
  return std::make_shared<FlatComplex>(charts, g);
}

}  // namespace

TEST(Space, EuclideanDistance) {
  EuclideanSpace e(3);
  EXPECT_DOUBLE_EQ(e.distance(e.make({0, 0, 0}), e.make({3, 4, 0})), 5.0);
  EuclideanSpace e2(2);
  Point m = e2.geodesic_point(e2.make({0, 0}), e2.make({2, 0}), 0.5);
  EXPECT_NEAR(m.coords(0), 1.0, 1e-15);
  EXPECT_NEAR(m.coords(1), 0.0, 1e-15);
}

TEST(Space, ConeExamples) {
  auto c = ConeSpace::euclidean_cone(3 * M_PI);
  EXPECT_NEAR(c->distance(c->at_angle(0, 1), c->at_angle(1.5 * M_PI, 1)), 2.0, 1e-12);
  EXPECT_NEAR(c->distance(c->at_angle(0, 1), c->at_angle(0.5 * M_PI, 1)), std::sqrt(2.0), 1e-12);
  auto c4 = ConeSpace::euclidean_cone(4 * M_PI);
  Point m = c4->geodesic_point(c4->at_angle(0, 1), c4->at_angle(2 * M_PI, 1), 0.5);
  EXPECT_NEAR(c4->distance(m, c4->apex()), 0.0, 1e-12);
}

TEST(Space, ConeClosedForm) {
  for (double alpha : {2 * M_PI, 3 * M_PI, 4 * M_PI, 0.7 * M_PI}) {
    auto c = ConeSpace::euclidean_cone(alpha);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 1000; ++i) {
      const double r1 = 2 * u(rng), r2 = 2 * u(rng), p1 = alpha * u(rng), p2 = alpha * u(rng);
      EXPECT_NEAR(c->distance(c->at_angle(p1, r1), c->at_angle(p2, r2)), cone_oracle(alpha, r1, p1, r2, p2), 1e-12);
    }
  }
}

TEST(Space, GluedPlanesUnfolding) {
  auto g = ConeSpace::glued_planes(M_PI);
  // a in A (sheet 1, lower half), b its mirror in B (sheet 2).
  for (double th : {1.1 * M_PI, 1.3 * M_PI, 1.5 * M_PI, 1.8 * M_PI}) {
    const double r = 1.0;
    Point a = g->plane_point(1, r * std::cos(th), r * std::sin(th));
    Point b = g->plane_point(2, r * std::cos(th), r * std::sin(th));
    // Unfolded routes: around the ray at angle pi, or around the ray at 0.
    const double via_pi = 2 * (th - M_PI), via_0 = 2 * (2 * M_PI - th);
    const double sep = std::min(via_pi, via_0);
    const double oracle = sep >= M_PI ? 2 * r : 2 * r * std::sin(sep / 2);
    EXPECT_NEAR(g->distance(a, b), oracle, 1e-12) << th;
  }
  EXPECT_NEAR(g->link_length(g->plane_point(1, 1.0, 0.0)), 3 * M_PI, 1e-12);
  EXPECT_NEAR(g->link_length(g->plane_point(1, 0.3, 0.4)), 2 * M_PI, 1e-12);
  auto c = ConeSpace::euclidean_cone(3 * M_PI);
  EXPECT_NEAR(c->link_length(c->apex()), 3 * M_PI, 1e-12);
}

TEST(Space, UpperAngle) {
  EuclideanSpace e(2);
  EXPECT_NEAR(upper_angle(e, e.make({0, 0}), e.make({1, 0}), e.make({0, 1})), M_PI / 2, 1e-12);
  EXPECT_NEAR(upper_angle(e, e.make({0, 0}), e.make({1, 0}), e.make({-2, 0})), M_PI, 1e-12);
  auto c = ConeSpace::euclidean_cone(3 * M_PI);
  EXPECT_NEAR(upper_angle(*c, c->apex(), c->at_angle(0, 1), c->at_angle(2 * M_PI, 1)), M_PI, 1e-9);
  EXPECT_THROW(upper_angle(e, e.make({0, 0}), e.make({0, 0}), e.make({1, 0})), Error);
}

TEST(Space, FlatComplexLShape) {
  auto L = l_shape();
  Point a = Point::planar(0, 0.5, 0.5), b = Point::planar(1, 1.5, 0.5);
  EXPECT_NEAR(L->distance(a, b), 1.0, 1e-9);
  Point m = L->geodesic_point(a, b, 0.5);
  EXPECT_NEAR(L->distance(m, Point::planar(0, 1.0, 0.5)), 0.0, 1e-9);
  // Around the reflex corner (1,1).
  Point p = Point::planar(1, 1.5, 0.8), q = Point::planar(2, 0.8, 1.5);
  const double oracle = std::hypot(0.5, 0.2) + std::hypot(0.2, 0.5);
  EXPECT_NEAR(L->distance(p, q), oracle, 1e-6 * 2);
  Point mid = L->geodesic_point(p, q, 0.5);
  EXPECT_NEAR(L->distance(mid, Point::planar(0, 1.0, 1.0)), 0.0, 1e-6);
}

TEST(Space, FrechetMeans) {
  EuclideanSpace e(2);
  auto r = e.frechet_mean({e.make({0, 0}), e.make({2, 0})}, {1, 1});
  EXPECT_NEAR(r.point.coords(0), 1.0, 1e-12);
  auto c4 = ConeSpace::euclidean_cone(4 * M_PI);
  std::vector<Point> pts = {c4->at_angle(0, 1), c4->at_angle(4 * M_PI / 3, 1), c4->at_angle(8 * M_PI / 3, 1)};
  auto m = c4->frechet_mean(pts, {1, 1, 1});
  EXPECT_NEAR(c4->distance(m.point, c4->apex()), 0.0, 1e-9);
  EXPECT_NEAR(m.objective, 3.0, 1e-9);
  // Brute force: no sampled point does better than the tip.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    Point x = c4->random_point(rng);
    EXPECT_GE(c4->frechet_objective(x, pts, {1, 1, 1}), 3.0 - 1e-12);
  }
  Point single = c4->at_angle(1.0, 0.7);
  auto s = c4->frechet_mean({single}, {2.0});
  EXPECT_EQ(s.point, single);
}

TEST(Space, ConeFrechetMatchesBruteForce) {
  auto c = ConeSpace::euclidean_cone(3 * M_PI);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> pts;
    std::vector<double> w;
    for (int i = 0; i < 5; ++i) {
      pts.push_back(c->random_point(rng));
      w.push_back(1.0 + i);
    }
    auto m = c->frechet_mean(pts, w);
    for (const Point& p : pts) EXPECT_LE(m.objective, c->frechet_objective(p, pts, w) + 1e-12);
    for (int i = 0; i < 500; ++i) {
      Point x = c->random_point(rng);
      EXPECT_LE(m.objective, c->frechet_objective(x, pts, w) + 1e-9);
    }
  }
}

TEST(Space, VerifyCat0) {
  auto c3 = ConeSpace::euclidean_cone(3 * M_PI);
  auto rep = verify_cat0(*c3, 2000, 5);
  EXPECT_LE(rep.cn_defect_max, c3->geodesic_tolerance());
  EXPECT_TRUE(rep.low_links.empty());
  auto c1 = ConeSpace::euclidean_cone(M_PI);
  auto rep1 = verify_cat0(*c1, 100, 5);
  ASSERT_EQ(rep1.low_links.size(), 1u);
  EXPECT_NEAR(rep1.low_links[0].link, M_PI, 1e-12);
  EuclideanSpace e(3);
  EXPECT_LE(verify_cat0(e, 1000, 1).cn_defect_max, 1e-12);
  auto L = l_shape();
  EXPECT_LE(verify_cat0(*L, 300, 2).cn_defect_max, L->geodesic_tolerance());
}
