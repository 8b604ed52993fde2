// Regenerates data/golden/cn_slack.json. The CN slack is c * h (h = mesh
// size); c is calibrated on flat scenes, where the true defect is zero, as 10x
// the largest observed defect per unit h, with a floor of 1e-6.
#include <cstdio>

#include "plateau/analyze.hpp"
#include "plateau/euclidean_space.hpp"
#include "plateau/report_io.hpp"
#include "plateau/solve.hpp"
#include "plateau/space_io.hpp"

using namespace plateau;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output.json>\n", argv[0]);
    return 2;
  }
  auto e = std::make_shared<EuclideanSpace>(2);
  Json runs = Json::array();
  double worst = 0.0;
  auto record = [&](const std::string& name, const MeshMap& m) {
    const double h = m.mesh.mesh_size();
    const double cn = check_cn(pullback_metric(m), 200, 1).cn_defect_max;
    worst = std::max(worst, cn / h);
    runs.push_back({{"scene", name}, {"mesh_size", h}, {"cn_defect_max", cn}});
  };
  for (int rings : {8, 16, 32}) {
    MeshMap m;
    m.mesh = generate_disc_mesh(rings);
    m.space = e;
    for (const auto& v : m.mesh.vertices) m.images.push_back(Point::from(0, v));
    record("identity_" + std::to_string(rings), m);
  }
  SolverConfig cfg;
  cfg.rings = 16;
  record("flat_circle_16", solve_plateau(e, regular_polygon(*e, 64, 1.0), cfg).map);
  const double c = std::max(10.0 * worst, 1e-6);
  const Json out = {{"c", c}, {"floor", 1e-6}, {"safety_factor", 10.0}, {"calibration", runs}};
  write_text(argv[1], dump_report(out));
  std::printf("c = %s\n", fmt17(c).c_str());
  return 0;
}
