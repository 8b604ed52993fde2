#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "plateau/analyze.hpp"
#include "plateau/cone_space.hpp"
#include "plateau/euclidean_space.hpp"
#include "plateau/funnel.hpp"
#include "plateau/parallel.hpp"
#include "plateau/solve.hpp"

using namespace plateau;

namespace {

void BM_ConeDistance(benchmark::State& st) {
  auto cone = ConeSpace::euclidean_cone(3 * M_PI);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> pts;
  for (int i = 0; i < 256; ++i) pts.push_back(cone->at_angle(3 * M_PI * u(rng), u(rng)));
  std::size_t i = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(cone->distance(pts[i % 256], pts[(i * 7 + 3) % 256]));
    ++i;
  }
}
BENCHMARK(BM_ConeDistance);

void BM_TotalCurvature(benchmark::State& st) {
  auto e = std::make_shared<EuclideanSpace>(3);
  const auto c = random_polygon(*e, static_cast<int>(st.range(0)), 7);
  for (auto _ : st) benchmark::DoNotOptimize(total_curvature(*e, c).kappa);
}
BENCHMARK(BM_TotalCurvature)->Arg(24)->Arg(256);

void BM_SolveFlatCircle(benchmark::State& st) {
  set_thread_count(1);
  auto e = std::make_shared<EuclideanSpace>(2);
  const auto c = regular_polygon(*e, 64, 1.0);
  SolverConfig cfg;
  cfg.rings = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(solve_plateau(e, c, cfg).area);
}
BENCHMARK(BM_SolveFlatCircle)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_DensityProfile(benchmark::State& st) {
  auto e = std::make_shared<EuclideanSpace>(2);
  SolverConfig cfg;
  cfg.rings = 16;
  const SolveResult r = solve_plateau(e, regular_polygon(*e, 64, 1.0), cfg);
  const auto radii = radius_grid(0.08, 0.8, 12);
  for (auto _ : st) benchmark::DoNotOptimize(density_profile(r.map, r.map.images[0], radii).theta_zero);
}
BENCHMARK(BM_DensityProfile)->Unit(benchmark::kMillisecond);

void BM_FunnelDistance(benchmark::State& st) {
  auto e = std::make_shared<EuclideanSpace>(2);
  const auto sq = make_curve(*e, {e->make({0, 0}), e->make({1, 0}), e->make({1, 1}), e->make({0, 1})});
  const auto ext = build_funnel(e, sq);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> pts;
  for (int i = 0; i < 64; ++i) pts.push_back(ext->strip_point(i % 4, u(rng), 3 * u(rng)));
  std::size_t i = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(extended_distance(*ext, pts[i % 64], pts[(i * 5 + 1) % 64]));
    ++i;
  }
}
BENCHMARK(BM_FunnelDistance);

}  // namespace

BENCHMARK_MAIN();
