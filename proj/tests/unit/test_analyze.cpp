#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "plateau/analyze.hpp"
#include "plateau/error.hpp"
#include "plateau/euclidean_space.hpp"
#include "plateau/parallel.hpp"
#include "plateau/report_io.hpp"
#include "plateau/scene.hpp"

using namespace plateau;
namespace fs = std::filesystem;

namespace {

MeshMap identity_map(int rings, double scale = 1.0) {
  MeshMap m;
  m.mesh = generate_disc_mesh(rings);
  m.space = std::make_shared<EuclideanSpace>(2);
  for (const auto& v : m.mesh.vertices) m.images.push_back(Point::from(0, scale * v));
  return m;
}

}  // namespace

TEST(Analyze, DensityOfFlatDiscIsOne) {
  const MeshMap m = identity_map(12);
  const auto prof = density_profile(m, m.images[0], radius_grid(0.1, 0.8, 8));
  for (double t : prof.theta) EXPECT_NEAR(t, 1.0, 0.02);
  EXPECT_TRUE(check_monotonicity(prof, 0.03).pass);
}

TEST(Analyze, PreimagesAndInjectivityOfIdentity) {
  const MeshMap m = identity_map(8);
  EXPECT_EQ(count_preimages(m, Point::planar(0, 0.3, -0.2), 0.02, 0.05), 1);
  const auto rep = injectivity_report(m, 0.2, 0.02);
  EXPECT_TRUE(rep.embedded);
  EXPECT_GT(rep.min_ratio, 0.9);
}

TEST(Analyze, CnFlatVersusCorrupted) {
  const MeshMap m = identity_map(8);
  EXPECT_LE(check_cn(pullback_metric(m), 200, 1).cn_defect_max, 1e-10);
  auto len = image_edge_lengths(m);
  const auto edges = m.mesh.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].first == 0 || edges[i].second == 0) len[i] *= 0.8;
  EXPECT_GT(check_cn(PullbackMetric(m.mesh, len, 3), 200, 1).cn_defect_max, 0.01);
}

TEST(Analyze, BishopGromovFlatIsTight) {
  const MeshMap m = identity_map(8);
  const PullbackMetric pb = pullback_metric(m);
  const auto s = check_bishop_gromov(pb, 0, 0.5 * bg_radius_limit(pb, 0));
  EXPECT_NEAR(s.link, 2 * M_PI, 1e-12);
  EXPECT_LE(std::abs(s.defect) / (s.r * s.r), 0.01);
}

TEST(Analyze, FlatnessOfIdentity) {
  const auto rep = flatness_report(pullback_metric(identity_map(6)));
  EXPECT_TRUE(rep.flat);
  EXPECT_FALSE(rep.rigid_cone);
  EXPECT_LE(rep.max_abs_other_defect, 1e-12);
}

TEST(ReportIo, Formatting) {
  EXPECT_EQ(fmt17(0.1), "0.10000000000000001");
  EXPECT_EQ(fmt6(M_PI), "3.14159");
  const Json j = {{"b", 1.0 / 3.0}, {"a", NAN}, {"c", {1, 2}}};
  const std::string d = dump_report(j);
  EXPECT_EQ(d, dump_report(Json::parse(d)));
  EXPECT_LT(d.find("\"a\""), d.find("\"b\""));
  EXPECT_NE(d.find("null"), std::string::npos);
  EXPECT_NE(d.find("0.33333333333333331"), std::string::npos);
  EXPECT_EQ(d.back(), '\n');
  EXPECT_EQ(fnv1a_hex(""), fnv1a_hex(""));
  EXPECT_NE(fnv1a_hex("a"), fnv1a_hex("b"));
}

TEST(Scene, ParseErrors) {
  const fs::path dir = fs::temp_directory_path() / "plateau_scene_test";
  fs::create_directories(dir);
  auto expect_parse_error = [&](const std::string& text) {
    std::ofstream(dir / "s.json") << text;
    try {
      load_scene((dir / "s.json").string());
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::SceneParseError) << text;
    }
  };
  expect_parse_error("{not json");
  expect_parse_error(R"({"name": "x", "space": {"kind": "nowhere"}, "curve": {"generator": {"type": "circle"}}})");
  expect_parse_error(R"({"name": "x", "space": {"kind": "euclidean", "dimension": 2},
    "curve": {"generator": {"type": "circle", "n": 8}}, "analyses": [{"type": "bogus"}]})");
  EXPECT_THROW(load_scene((dir / "missing.json").string()), Error);
}

TEST(Scene, RunIsDeterministicAcrossThreads) {
  const Scene s = load_scene(std::string(PLATEAU_SCENE_DIR) + "/random_a.json");
  RunOptions o;
  o.write_files = false;
  o.rings = 8;
  set_thread_count(1);
  const RunReport a = run_scene(s, o);
  set_thread_count(3);
  const RunReport b = run_scene(s, o);
  set_thread_count(1);
  EXPECT_EQ(dump_report(a.report), dump_report(b.report));
  EXPECT_EQ(a.report.at("schema"), kReportSchema);
}

TEST(Scene, SolveJsonRoundTrip) {
  const Scene s = load_scene(std::string(PLATEAU_SCENE_DIR) + "/convex_polygon.json");
  SolverConfig cfg = s.solver;
  cfg.rings = 4;
  const SolveResult r = solve_plateau(s.space, s.curve, cfg);
  const SolveResult back = solve_from_json(Json::parse(dump_report(solve_to_json(r))), s);
  ASSERT_EQ(back.map.images.size(), r.map.images.size());
  for (std::size_t i = 0; i < r.map.images.size(); ++i) EXPECT_EQ(back.map.images[i].coords, r.map.images[i].coords);
  EXPECT_EQ(back.area, r.area);
}

#ifdef PLATEAU_CLI
namespace {

int cli(const std::string& args) {
  const int st = std::system((std::string(PLATEAU_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  const fs::path dir = fs::temp_directory_path() / "plateau_cli_test";
  fs::create_directories(dir);
  const std::string out = " --out " + (dir / "out").string();
  std::ofstream(dir / "bad.json") << "{oops";
  EXPECT_EQ(cli("run " + (dir / "bad.json").string() + out), 2);
  std::ofstream(dir / "solver.json") << R"({"name": "s", "space": {"kind": "euclidean", "dimension": 2},
    "curve": {"generator": {"type": "circle", "n": 8}}, "solver": {"over_relaxation": 3},
    "analyses": [{"type": "area", "expected": 1}]})";
  EXPECT_EQ(cli("run " + (dir / "solver.json").string() + out), 3);
  EXPECT_EQ(cli("run " + std::string(PLATEAU_SCENE_DIR) + "/trefoil.json" + out), 0);
  EXPECT_EQ(cli("curvature " + std::string(PLATEAU_DATA_DIR) + "/curves/square.json"), 0);
  EXPECT_EQ(cli("fary-milnor " + std::string(PLATEAU_DATA_DIR) + "/curves/trefoil6.json" + out), 0);
  EXPECT_EQ(cli("fary-milnor " + std::string(PLATEAU_DATA_DIR) + "/curves/open_polygon.json" + out), 2);
}
#endif
