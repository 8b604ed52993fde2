#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "../support/oracles.hpp"
#include "plateau/cone_space.hpp"
#include "plateau/error.hpp"
#include "plateau/euclidean_space.hpp"
#include "plateau/funnel.hpp"
#include "plateau/space_io.hpp"

using namespace plateau;

namespace {

struct SquareScene {
  std::shared_ptr<EuclideanSpace> space = std::make_shared<EuclideanSpace>(2);
  std::vector<Vec2> poly = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  PolygonalCurve curve;
  FunnelPtr ext;
  SquareScene(int portals = 16) {
    std::vector<Point> v;
    for (const auto& x : poly) v.push_back(space->make({x.x(), x.y()}));
    curve = make_curve(*space, v);
    ext = build_funnel(space, curve, 0.0, portals);
  }
  Point random_point(std::mt19937_64& rng, bool allow_base) const {
    std::uniform_real_distribution<double> u(0, 1);
    const double w = u(rng);
    if (allow_base && w < 0.25) return space->make({u(rng), u(rng)});
    if (w < 0.65) return ext->strip_point(static_cast<int>(rng() % 4), u(rng), 3 * u(rng));
    const int i = static_cast<int>(rng() % 4);
    return ext->sector_point(i, 3 * u(rng), ext->sector_angles()[i] * u(rng));
  }
};

}  // namespace

TEST(Funnel, SquareMatchesPlanarDevelopment) {
  SquareScene sq;
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const Point a = sq.random_point(rng, false), b = sq.random_point(rng, true);
    const Vec2 pa = oracle::planar_position(*sq.ext, sq.poly, a), pb = oracle::planar_position(*sq.ext, sq.poly, b);
    EXPECT_NEAR(extended_distance(*sq.ext, a, b), (pa - pb).norm(), 1e-6);
    const Point m = sq.ext->geodesic_point(a, b, 0.3);
    EXPECT_LT((oracle::planar_position(*sq.ext, sq.poly, m) - (0.7 * pa + 0.3 * pb)).norm(), 1e-6);
  }
}

TEST(Funnel, SameStripIsChartDistance) {
  SquareScene sq;
  const Point a = sq.ext->strip_point(1, 0.2, 0.5), b = sq.ext->strip_point(1, 0.9, 2.0);
  EXPECT_NEAR(extended_distance(*sq.ext, a, b), std::hypot(0.7, 1.5), 1e-12);
}

TEST(Funnel, PushedCurvePointAddsDepth) {
  SquareScene sq;
  const Point p = sq.space->make({0.5, 0.3});
  const Point q = sq.ext->strip_point(0, 0.5, 0.8);
  EXPECT_NEAR(extended_distance(*sq.ext, p, q), 0.3 + 0.8, 1e-9);
}

TEST(Funnel, SectorAnglesSumToKappa) {
  SquareScene sq;
  const auto& a = sq.ext->sector_angles();
  EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 2 * M_PI, 1e-9);
  auto g = ConeSpace::glued_planes(M_PI);
  auto ext = build_funnel(g, example52_curve(*g));
  const auto& b = ext->sector_angles();
  EXPECT_NEAR(std::accumulate(b.begin(), b.end(), 0.0), 4 * M_PI, 1e-9);
  EXPECT_NEAR(ext->kappa(), 4 * M_PI, 1e-9);
}

TEST(Funnel, LevelCurveLengthGrowsLinearly) {
  auto g = ConeSpace::glued_planes(M_PI);
  auto ext = build_funnel(g, example52_curve(*g));
  const double r = 5.0;
  double len = 0.0;
  for (int i = 0; i < ext->edge_count(); ++i) {
    const double l = ext->curve().edge_lengths[i];
    len += extended_distance(*ext, ext->strip_point(i, 0.0, r), ext->strip_point(i, l, r));
    const int m = 4000;
    for (int k = 0; k < m; ++k) {
      const double a = ext->sector_angles()[i];
      len += extended_distance(*ext, ext->sector_point(i, r, a * k / m), ext->sector_point(i, r, a * (k + 1) / m));
    }
  }
  EXPECT_NEAR(len / ext->level_length(r), 1.0, 1e-6);
}

TEST(Funnel, DoublingPortalsKeepsDistances) {
  SquareScene a(16), b(32);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 40; ++k) {
    const Point p = a.random_point(rng, true), q = a.random_point(rng, true);
    EXPECT_NEAR(extended_distance(*a.ext, p, q), extended_distance(*b.ext, p, q), 1e-9);
  }
  auto g = ConeSpace::glued_planes(M_PI);
  auto e16 = build_funnel(g, example52_curve(*g), 0.0, 16), e32 = build_funnel(g, example52_curve(*g), 0.0, 32);
  const Point base = example52_double_point(*g);
  for (int i = 0; i < e16->edge_count(); ++i) {
    const Point q = e16->strip_point(i, 0.37 * e16->curve().edge_lengths[i], 1.3);
    EXPECT_NEAR(extended_distance(*e16, base, q), extended_distance(*e32, base, q), 1e-9);
  }
}

TEST(Funnel, DegenerateCurveRejected) {
  auto e = std::make_shared<EuclideanSpace>(2);
  auto c = make_curve(*e, {e->make({0, 0}), e->make({2, 0}), e->make({1, 0})});
  EXPECT_THROW(build_funnel(e, c), Error);
}

TEST(Funnel, ExtensionAreaIsAdditive) {
  auto e = std::make_shared<EuclideanSpace>(2);
  auto curve = regular_polygon(*e, 32, 1.0);
  SolverConfig cfg;
  cfg.rings = 8;
  const auto res = solve_plateau(e, curve, cfg);
  auto ext = build_funnel(e, curve);
  const auto em = extend_plateau(res, ext, 8);
  EXPECT_NEAR(em.funnel_area, ext->funnel_area(), 1e-9 * ext->funnel_area());
  EXPECT_NEAR(map_area(em.map), em.disc_area + em.funnel_area, 1e-9 * map_area(em.map));
  EXPECT_NEAR(em.disc_area, res.area, 1e-12);
  EXPECT_EQ(em.disc().mesh.triangle_count(), res.map.mesh.triangle_count());
}

TEST(Funnel, BoundaryMismatchDetected) {
  auto e = std::make_shared<EuclideanSpace>(2);
  SolverConfig cfg;
  cfg.rings = 6;
  const auto res = solve_plateau(e, regular_polygon(*e, 16, 1.0), cfg);
  auto other = build_funnel(e, regular_polygon(*e, 16, 1.5));
  try {
    extend_plateau(res, other, 4);
    FAIL() << "expected BoundaryMismatch";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::BoundaryMismatch);
  }
}

TEST(Funnel, GrowthRadiusCapped) {
  auto e = std::make_shared<EuclideanSpace>(2);
  auto curve = regular_polygon(*e, 16, 1.0);
  SolverConfig cfg;
  cfg.rings = 6;
  const auto res = solve_plateau(e, curve, cfg);
  auto ext = build_funnel(e, curve);
  const auto em = extend_plateau(res, ext, 4);
  try {
    area_growth(em, *ext, e->make({0, 0}), {0.9 * ext->truncation()}, 4);
    FAIL() << "expected RadiusTooLarge";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::RadiusTooLarge);
  }
}

TEST(Funnel, FlatKeyEstimate) {
  auto e = std::make_shared<EuclideanSpace>(2);
  auto curve = regular_polygon(*e, 16, 1.0);
  SolverConfig cfg;
  cfg.rings = 8;
  const auto res = solve_plateau(e, curve, cfg);
  auto ext = build_funnel(e, curve);
  const auto em = extend_plateau(res, ext, 6);
  std::vector<Point> probes = {e->make({0.1, 0.2}), e->make({-0.4, 0.3}), ext->strip_point(3, 0.1, 2.0)};
  const auto ke = key_estimate_check(em, *ext, ext->kappa(), probes, 0.02, 0.05);
  EXPECT_EQ(ke.bound, 1);
  EXPECT_TRUE(ke.pass);
  for (int c : ke.counts) EXPECT_EQ(c, 1);
}

TEST(FaryMilnor, TrefoilAboveThreshold) {
  const Json j = load_json(std::string(PLATEAU_DATA_DIR) + "/curves/trefoil6.json");
  auto space = space_from_json(j.at("space"));
  const auto v = fary_milnor(space, curve_from_json(*space, j), SolverConfig{});
  EXPECT_EQ(v.verdict, Verdict::AboveThreshold);
  EXPECT_GT(v.kappa, 4 * M_PI);
  EXPECT_FALSE(v.solve.has_value());
}

TEST(FaryMilnor, ConvexPolygonEmbedded) {
  auto e = std::make_shared<EuclideanSpace>(2);
  SolverConfig cfg;
  cfg.rings = 8;
  const auto v = fary_milnor(e, regular_polygon(*e, 7, 1.0), cfg);
  EXPECT_EQ(v.verdict, Verdict::Embedded) << v.reason;
}
