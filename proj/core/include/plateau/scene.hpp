#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plateau/funnel.hpp"
#include "plateau/space_io.hpp"

namespace plateau {

inline constexpr int kReportSchema = 1;

// Scene file:
//   {"name": ..., "space": {...}, "curve": {...} | {"file": path},
//    "solver": {...}, "solve": true, "analyses": [{"type": ...}, ...],
//    "output_dir": path}
// Paths are relative to the scene file. Analysis types: area, isoperimetric,
// density, preimages, injectivity, cn, bishop_gromov, flatness, funnel,
// fary_milnor, curvature.
struct Scene {
  std::string path;
  std::string dir;
  std::string name;
  Json raw;
  std::string hash;  // FNV-1a of the canonical scene text
  SpacePtr space;
  PolygonalCurve curve;
  SolverConfig solver;
  bool solve = true;
  std::vector<Json> analyses;
  std::string output_dir;
};

// Throws SceneParseError for missing files, bad JSON, unknown analyses or
// analyses that need a solve when "solve" is false.
Scene load_scene(const std::string& path);
SolverConfig solver_from_json(const Json& j);
// Named point ("disc_center", "curve_center", "apex", "example52_base",
// "example52_double_point") or a point description.
Point scene_point(const Scene& scene, const Json& spec, const MeshMap* map = nullptr);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> rings;
  std::optional<double> tol;
  std::string out_dir;  // overrides the scene's output_dir when set
  bool skip_funnel = false;
  bool write_files = true;
  const SolveResult* solved = nullptr;  // analyze an existing solve instead of solving
};

struct RunReport {
  Json report;    // machine report, deterministic given scene + seed
  Json timings;   // wall-clock seconds, kept out of the machine report
  bool pass = false;
  int exit_code = 0;  // 0 all pass, 1 some verdict failed, 3 solver error
  std::string out_dir;
  std::string report_path;
};

// Solve, then each analysis in declared order. Writes report.json,
// timings.json, CSV profiles and SVG plots into the output directory.
RunReport run_scene(const Scene& scene, const RunOptions& opt = {});

// Solved map with boundary parameters, curve and summary; round-trips exactly.
Json solve_to_json(const SolveResult& r);
SolveResult solve_from_json(const Json& j, const Scene& scene);

// Slack constant c of the CN check (slack = c * mesh size), read from a
// golden file {"c": ...}.
double load_cn_slack(const std::string& path);

}  // namespace plateau
