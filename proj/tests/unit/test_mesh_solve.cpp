#include <gtest/gtest.h>

#include <cmath>

#include "plateau/cone_space.hpp"
#include "plateau/error.hpp"
#include "plateau/euclidean_space.hpp"
#include "plateau/mesh.hpp"
#include "plateau/parallel.hpp"
#include "plateau/solve.hpp"

using namespace plateau;

TEST(Mesh, DiscInvariants) {
  for (int rings : {1, 4, 16}) {
    const DiscMesh m = generate_disc_mesh(rings);
    EXPECT_NO_THROW(m.validate());
    EXPECT_EQ(m.vertex_count(), 1 + 3 * rings * (rings + 1));
    EXPECT_EQ(m.triangle_count(), 6 * rings * rings);
    EXPECT_EQ(m.euler_characteristic(), 1);
    EXPECT_EQ(static_cast<int>(m.boundary_loop.size()), 6 * rings);
    EXPECT_GT(m.min_angle(), 0.5);
  }
}

TEST(Mesh, RingVertexIndexing) {
  EXPECT_EQ(ring_vertex(0, 0), 0);
  EXPECT_EQ(ring_vertex(1, 0), 1);
  EXPECT_EQ(ring_vertex(2, 0), 7);
  EXPECT_EQ(ring_vertex(3, 5), 1 + 3 * 3 * 2 + 5);
}

TEST(Mesh, NestedRefinement) {
  const DiscMesh a = generate_disc_mesh(4), b = generate_disc_mesh(8);
  for (int k = 0; k <= 4; ++k)
    for (int j = 0; j < std::max(1, 6 * k); ++j)
      EXPECT_LT((a.vertices[ring_vertex(k, j)] - b.vertices[ring_vertex(2 * k, 2 * j)]).norm(), 1e-14);
}

TEST(Mesh, IdentityMapEnergyEqualsArea) {
  MeshMap m;
  m.mesh = generate_disc_mesh(8);
  m.space = std::make_shared<EuclideanSpace>(2);
  for (const auto& v : m.mesh.vertices) m.images.push_back(Point::from(0, v));
  EXPECT_NEAR(map_area(m), m.mesh.area(), 1e-12);
  // Isometry: trace 2 and top eigenvalue 1 in every triangle.
  EXPECT_NEAR(ks_energy(m), 2 * m.mesh.area(), 1e-12);
  EXPECT_NEAR(reshetnyak_energy(m), m.mesh.area(), 1e-12);
}

TEST(Mesh, JsonRoundTrip) {
  const DiscMesh m = generate_disc_mesh(3);
  const DiscMesh r = mesh_from_json(mesh_to_json(m));
  ASSERT_EQ(r.vertex_count(), m.vertex_count());
  for (int i = 0; i < m.vertex_count(); ++i) EXPECT_EQ(r.vertices[i], m.vertices[i]);
  EXPECT_EQ(r.triangles, m.triangles);
}

TEST(Solve, ConfigValidation) {
  SolverConfig c;
  c.over_relaxation = 2.5;
  EXPECT_THROW(c.validate(), Error);
  c = SolverConfig{};
  c.pinned = {0.5, 0.2, 0.7};
  EXPECT_THROW(c.validate(), Error);
}

TEST(Solve, FlatSquareAreaAndDeterminism) {
  auto e = std::make_shared<EuclideanSpace>(2);
  const auto sq = make_curve(*e, {e->make({0, 0}), e->make({1, 0}), e->make({1, 1}), e->make({0, 1})});
  SolverConfig cfg;
  cfg.rings = 8;
  set_thread_count(1);
  const SolveResult a = solve_plateau(e, sq, cfg);
  set_thread_count(4);
  const SolveResult b = solve_plateau(e, sq, cfg);
  set_thread_count(1);
  EXPECT_TRUE(a.converged);
  EXPECT_NEAR(a.area, 1.0, 0.05);
  EXPECT_LE(a.area, 1.0 + 1e-9);
  ASSERT_EQ(a.map.images.size(), b.map.images.size());
  for (std::size_t i = 0; i < a.map.images.size(); ++i) EXPECT_EQ(a.map.images[i].coords, b.map.images[i].coords);
  // Energy never increases.
  for (std::size_t i = 1; i < a.energy_trace.size(); ++i)
    EXPECT_LE(a.energy_trace[i], a.energy_trace[i - 1] * (1 + 1e-12));
}

TEST(Solve, ConeFillOfConeCircleMatchesSector) {
  auto cone = ConeSpace::euclidean_cone(3 * M_PI);
  const auto c = cone_circle(*cone, 96, 1.0);
  const MeshMap m = radial_cone_fill(cone, cone->apex(), c, 16);  // 96 boundary vertices
  // Inscribed 96-gon on a cone of angle 3pi: area 96 * sin(3pi/96) / 2.
  EXPECT_NEAR(map_area(m), 48 * std::sin(3 * M_PI / 96), 1e-9);
}
