#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "plateau/analyze.hpp"
#include "plateau/error.hpp"
#include "plateau/funnel.hpp"
#include "plateau/parallel.hpp"
#include "plateau/report_io.hpp"
#include "plateau/scene.hpp"

using namespace plateau;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFail = 1, kExitParse = 2, kExitSolver = 3;

struct Common {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
  std::optional<int> rings;
  std::optional<double> tol;
  bool skip_funnel = false;
};

void add_common(CLI::App* cmd, Common& c, bool funnel_flag) {
  cmd->add_option("--seed", c.seed, "Random seed (solver, probes, samples)");
  cmd->add_option("--threads", c.threads, "Worker cap; 1 runs inline")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--rings", c.rings, "Disc mesh rings")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", c.tol, "Relative energy tolerance of the solver");
  if (funnel_flag) cmd->add_flag("--skip-funnel", c.skip_funnel, "Skip the funnel stage");
}

RunOptions run_options(const Common& c) {
  RunOptions o;
  o.seed = c.seed;
  o.rings = c.rings;
  o.tol = c.tol;
  o.out_dir = c.out;
  o.skip_funnel = c.skip_funnel;
  return o;
}

// "2π", "4π", or "4.67864π".
std::string pi_multiple(double kappa) {
  const double m = kappa / M_PI;
  if (std::abs(m - std::round(m)) < 1e-9) return fmt6(std::round(m)) + "π";
  return fmt6(m) + "π";
}

// Curve file: {"space": {...}, "vertices": [...]} or a generator.
// An optional "center" sets the radial initialization centre of the solver.
PolygonalCurve read_curve(const std::string& curve_path, const std::string& space_path, SpacePtr& space,
                          std::optional<Point>* center = nullptr) {
  const Json cj = load_json(curve_path);
  try {
    if (!space_path.empty()) {
      const Json sj = load_json(space_path);
      space = space_from_json(sj.contains("space") ? sj.at("space") : sj);
    } else {
      space = space_from_json(cj.at("space"));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SceneParseError, curve_path + ": " + e.what());
  }
  if (center && cj.contains("center")) *center = point_from_json(*space, cj.at("center"));
  return curve_from_json(*space, cj);
}

void print_run(const RunReport& r) {
  std::cout << "scene " << r.report.at("scene").get<std::string>() << ": " << (r.pass ? "pass" : "FAIL") << "\n";
  if (r.report.contains("solver") && r.report.at("solver").contains("area"))
    std::cout << "  solve: area " << fmt6(r.report.at("solver").at("area").get<double>()) << ", converged "
              << (r.report.at("solver").at("converged").get<bool>() ? "yes" : "no") << "\n";
  if (r.report.contains("analyses"))
    for (const Json& a : r.report.at("analyses")) {
      std::cout << "  " << a.at("name").get<std::string>() << ": " << (a.at("pass").get<bool>() ? "pass" : "FAIL");
      const Json& d = a.at("result");
      if (d.contains("verdict")) std::cout << " (" << d.at("verdict").get<std::string>() << ")";
      if (d.contains("message")) std::cout << " (" << d.at("message").get<std::string>() << ")";
      std::cout << "\n";
    }
  if (!r.report_path.empty()) std::cout << "report: " << r.report_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Plateau solver and verification suite for piecewise-flat CAT(0) targets"};
  app.require_subcommand(1);

  Common run_c, solve_c, analyze_c, funnel_c, fm_c;
  std::string scene_path, curve_path, space_path, solve_path;

  auto* run = app.add_subcommand("run", "Solve a scene and run its analyses");
  run->add_option("scene", scene_path, "Scene file")->required();
  add_common(run, run_c, true);

  auto* curv = app.add_subcommand("curvature", "Total curvature of a closed polygon");
  curv->add_option("curve", curve_path, "Curve file")->required();
  curv->add_option("--space", space_path, "Space file (default: the curve file's space)");

  auto* solve = app.add_subcommand("solve", "Solve a scene and write the solved map");
  solve->add_option("scene", scene_path, "Scene file")->required();
  add_common(solve, solve_c, false);

  auto* analyze = app.add_subcommand("analyze", "Run a scene's analyses on a solved map");
  analyze->add_option("scene", scene_path, "Scene file")->required();
  analyze->add_option("solve", solve_path, "Solve file written by 'solve'")->required();
  add_common(analyze, analyze_c, true);

  auto* funnel = app.add_subcommand("funnel", "Extend a scene's solve by the flat funnel and measure area growth");
  funnel->add_option("scene", scene_path, "Scene file")->required();
  add_common(funnel, funnel_c, false);

  auto* fm = app.add_subcommand("fary-milnor", "Embeddedness verdict for a curve");
  fm->add_option("curve", curve_path, "Curve file")->required();
  fm->add_option("space", space_path, "Space file (default: the curve file's space)");
  add_common(fm, fm_c, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (run_c.threads > 0) set_thread_count(run_c.threads);
      const Scene scene = load_scene(scene_path);
      const RunReport r = run_scene(scene, run_options(run_c));
      print_run(r);
      return r.exit_code;
    }
    if (*curv) {
      SpacePtr space;
      const auto curve = read_curve(curve_path, space_path, space);
      const auto rep = total_curvature(*space, curve);
      std::cout << "kappa = " << fmt17(rep.kappa) << " rad = " << pi_multiple(rep.kappa) << "\n";
      if (rep.kappa > 4 * M_PI + 1e-6) std::cout << "> 4π\n";
      std::cout << "fenchel (kappa >= 2π): " << (rep.fenchel_ok ? "ok" : "violated") << "\n";
      return rep.fenchel_ok ? 0 : kExitFail;
    }
    if (*solve) {
      if (solve_c.threads > 0) set_thread_count(solve_c.threads);
      const Scene scene = load_scene(scene_path);
      SolverConfig cfg = scene.solver;
      if (solve_c.seed) cfg.seed = *solve_c.seed;
      if (solve_c.rings) cfg.rings = *solve_c.rings;
      if (solve_c.tol) cfg.tol_energy = *solve_c.tol;
      SolveResult res;
      try {
        res = solve_plateau(scene.space, scene.curve, cfg);
      } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
      }
      const std::string out = solve_c.out.empty() ? scene.output_dir : solve_c.out;
      ensure_dir(out);
      const std::string path = (fs::path(out) / "solve.json").string();
      write_text(path, dump_report(solve_to_json(res)));
      std::cout << "area " << fmt6(res.area) << ", converged " << (res.converged ? "yes" : "no") << ", sweeps "
                << res.sweeps << "\nsolve: " << path << "\n";
      return res.converged ? 0 : kExitSolver;
    }
    if (*analyze) {
      if (analyze_c.threads > 0) set_thread_count(analyze_c.threads);
      const Scene scene = load_scene(scene_path);
      const SolveResult solved = solve_from_json(load_json(solve_path), scene);
      RunOptions o = run_options(analyze_c);
      o.solved = &solved;
      const RunReport r = run_scene(scene, o);
      print_run(r);
      return r.exit_code;
    }
    if (*funnel) {
      if (funnel_c.threads > 0) set_thread_count(funnel_c.threads);
      Scene scene = load_scene(scene_path);
      Json fa = {{"type", "funnel"}};
      for (const Json& a : scene.analyses)
        if (a.at("type") == "funnel") fa = a;
      scene.analyses = {fa};
      const RunReport r = run_scene(scene, run_options(funnel_c));
      print_run(r);
      const Json& d = r.report.at("analyses").at(0).at("result");
      if (d.contains("theta_infinity_estimate"))
        std::cout << "theta_infinity " << fmt6(d.at("theta_infinity_estimate").get<double>()) << " (kappa/2π = "
                  << fmt6(d.at("predicted").get<double>()) << ")\n";
      return r.exit_code;
    }
    if (*fm) {
      if (fm_c.threads > 0) set_thread_count(fm_c.threads);
      SpacePtr space;
      SolverConfig cfg;
      const auto curve = read_curve(curve_path, space_path, space, &cfg.center);
      if (fm_c.seed) cfg.seed = *fm_c.seed;
      if (fm_c.rings) cfg.rings = *fm_c.rings;
      if (fm_c.tol) cfg.tol_energy = *fm_c.tol;
      FaryMilnorOptions o;
      o.skip_funnel = fm_c.skip_funnel;
      const FaryMilnorVerdict v = fary_milnor(space, curve, cfg, o);
      std::string line = verdict_name(v.verdict);
      if (v.verdict == Verdict::AboveThreshold) line += " (κ/π = " + fmt6(v.kappa / M_PI) + ")";
      std::cout << line << "\n";
      Json rep = {{"schema", kReportSchema},
                  {"verdict", verdict_name(v.verdict)},
                  {"kappa", v.kappa},
                  {"reason", v.reason},
                  {"seed", cfg.seed}};
      if (v.injectivity) rep["min_ratio"] = v.injectivity->min_ratio;
      if (v.flatness)
        rep["flatness"] = {{"cone_defect_sum", v.flatness->cone_defect_sum},
                           {"max_other_defect", v.flatness->max_other_defect},
                           {"rigid_cone", v.flatness->rigid_cone}};
      if (v.growth) rep["theta_infinity_estimate"] = v.growth->theta_infinity_estimate;
      const std::string out = fm_c.out.empty() ? "out/fary_milnor" : fm_c.out;
      ensure_dir(out);
      const std::string path = (fs::path(out) / "fary_milnor.json").string();
      write_text(path, dump_report(rep));
      std::cout << "report: " << path << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::SceneParseError) return kExitParse;
    if (e.code() == ErrorCode::SolverError || e.code() == ErrorCode::NoConvergence) return kExitSolver;
    return kExitParse;
  }
  return 0;
}
