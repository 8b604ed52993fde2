#include "plateau/scene.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <random>

#include "plateau/analyze.hpp"
#include "plateau/error.hpp"
#include "plateau/report_io.hpp"
#include "plateau/svg.hpp"

namespace plateau {

namespace fs = std::filesystem;

namespace {

const char* const kAnalyses[] = {"area",          "isoperimetric", "density",  "preimages",   "injectivity", "cn",
                                 "bishop_gromov", "flatness",      "funnel",   "fary_milnor", "curvature"};

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::SceneParseError, msg); }

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

Json doubles(const std::vector<double>& v) { return Json(v); }

Json point_json(const Point& p) { return point_to_json(p); }

double curve_diameter(const MetricSpace& space, const PolygonalCurve& c) {
  double d = 0.0;
  for (int i = 0; i < c.size(); ++i)
    for (int j = i + 1; j < c.size(); ++j) d = std::max(d, space.distance(c.vertices[i], c.vertices[j]));
  return d;
}

Json growth_json(const GrowthReport& g) {
  return {{"radii", doubles(g.radii)},
          {"theta", doubles(g.theta)},
          {"stderr", doubles(g.stderr_)},
          {"theta_infinity_estimate", g.theta_infinity_estimate},
          {"predicted", g.predicted},
          {"error", g.error},
          {"monotonicity_defect", g.monotonicity_defect},
          {"cap", g.cap}};
}

Json injectivity_json(const InjectivityReport& r) {
  Json w = Json::array();
  for (const auto& x : r.witnesses)
    w.push_back({{"domain_a", {x.domain_a.x(), x.domain_a.y()}},
                 {"domain_b", {x.domain_b.x(), x.domain_b.y()}},
                 {"d_image", x.d_image},
                 {"d_pullback", x.d_pullback},
                 {"ratio", x.ratio}});
  return {{"delta", r.delta},
          {"epsilon", r.epsilon},
          {"min_ratio", r.min_ratio},
          {"pairs_scanned", r.pairs_scanned},
          {"pairs_exact", r.pairs_exact},
          {"unverified_bound", r.unverified_bound},
          {"embedded", r.embedded},
          {"witnesses", w}};
}

Json flatness_json(const ComparisonReport& f) {
  return {{"tol", f.flat_tol},
          {"cone_vertices", f.cone_vertices},
          {"cone_defect_sum", f.cone_defect_sum},
          {"max_other_defect", f.max_other_defect},
          {"max_abs_other_defect", f.max_abs_other_defect},
          {"flat", f.flat},
          {"rigid_cone", f.rigid_cone}};
}

// Shared state of one run.
struct Context {
  const Scene& scene;
  const RunOptions& opt;
  std::string out;
  std::uint64_t seed;
  std::optional<SolveResult> result;
  std::optional<PullbackMetric> pb;
  FunnelPtr ext;
  std::optional<GrowthReport> growth;
  std::optional<InjectivityReport> injectivity;

  const PullbackMetric& pullback() {
    if (!pb) pb.emplace(pullback_metric(result->map));
    return *pb;
  }
  std::string artifact(const std::string& file, const std::string& text) {
    if (opt.write_files) write_text((fs::path(out) / file).string(), text);
    return file;
  }
};

Json run_area(Context& c, const Json& a, bool& pass) {
  const double area = c.result->area, expected = a.at("expected").get<double>();
  const double rel = std::abs(area - expected) / expected;
  pass = rel <= a.value("rel_tol", 0.015);
  return {{"area", area}, {"expected", expected}, {"relative_error", rel}, {"rel_tol", a.value("rel_tol", 0.015)}};
}

Json run_isoperimetric(Context& c, const Json& a, bool& pass) {
  const double ratio = isoperimetric_ratio(c.result->map, c.scene.curve);
  const double lo = a.value("min", 0.0), hi = a.value("max", 1.02);
  pass = ratio >= lo && ratio <= hi;
  return {{"ratio", ratio}, {"min", lo}, {"max", hi}};
}

Json run_density(Context& c, const Json& a, bool& pass, std::vector<std::string>& files, const std::string& tag) {
  const Point p = scene_point(c.scene, a.value("center", Json("disc_center")), &c.result->map);
  const double bd = boundary_image_distance(c.result->map, p);
  const auto radii = radius_grid(a.value("r_min_fraction", 0.08) * bd, a.value("r_max_fraction", 0.8) * bd,
                                 a.value("points", 12));
  const auto prof = density_profile(c.result->map, p, radii, a.value("samples_per_triangle", 256));
  const double slack = a.value("slack", 0.03);
  const auto mono = check_monotonicity(prof, slack);
  pass = mono.pass;
  Json j = {{"center", point_json(p)},
            {"boundary_distance", bd},
            {"radii", doubles(prof.radii)},
            {"theta", doubles(prof.theta)},
            {"stderr", doubles(prof.stderr_)},
            {"theta_zero", prof.theta_zero},
            {"monotonicity_defect", prof.monotonicity_defect},
            {"slack", slack},
            {"max_stderr", prof.max_stderr}};
  if (a.contains("expect_theta")) {
    const double e = a.at("expect_theta").get<double>(), tol = a.value("theta_tol", 0.02);
    double worst = 0.0;
    for (double t : prof.theta) worst = std::max(worst, std::abs(t - e));
    j["expect_theta"] = e;
    j["theta_max_deviation"] = worst;
    pass = pass && worst <= tol;
  }
  if (a.contains("min_theta_zero")) {
    j["min_theta_zero"] = a.at("min_theta_zero").get<double>();
    pass = pass && prof.theta_zero >= a.at("min_theta_zero").get<double>();
  }
  files.push_back(c.artifact(tag + ".csv", csv_columns({"r", "theta", "stderr"}, {prof.radii, prof.theta, prof.stderr_})));
  const double ref = a.value("expect_theta", 0.0);
  files.push_back(c.artifact(tag + ".svg", line_plot_svg(c.scene.name + ": density profile", "r", "theta(r)",
                                                         {{"theta", prof.radii, prof.theta}},
                                                         a.contains("expect_theta") ? &ref : nullptr)));
  return j;
}

Json run_preimages(Context& c, const Json& a, bool& pass) {
  const Point p = scene_point(c.scene, a.at("probe"), &c.result->map);
  const double itol = a.value("image_tol", 0.02), ctol = a.value("cluster_tol", 0.05);
  const auto rep = find_preimages(c.result->map, c.pullback(), p, itol, ctol);
  const double bd = boundary_image_distance(c.result->map, p);
  const auto prof = density_profile(c.result->map, p, radius_grid(0.05 * bd, 0.3 * bd, 6));
  Json pts = Json::array();
  for (const auto& q : rep.points) pts.push_back({q.domain.x(), q.domain.y()});
  pass = prof.theta_zero >= rep.count - 0.1;
  Json j = {{"probe", point_json(p)}, {"count", rep.count}, {"domain_points", pts}, {"theta_zero", prof.theta_zero}};
  if (a.contains("expect")) pass = pass && rep.count == a.at("expect").get<int>(), j["expect"] = a.at("expect");
  if (a.contains("min_theta_zero"))
    pass = pass && prof.theta_zero >= a.at("min_theta_zero").get<double>(), j["min_theta_zero"] = a.at("min_theta_zero");
  return j;
}

Json run_injectivity(Context& c, const Json& a, bool& pass) {
  const double delta = a.value("delta_fraction", 0.1) * curve_diameter(*c.scene.space, c.scene.curve);
  const auto rep = injectivity_report(c.result->map, delta, a.value("epsilon_ratio", 0.1) * delta);
  c.injectivity = rep;
  Json j = injectivity_json(rep);
  pass = true;
  if (a.contains("expect_embedded"))
    pass = rep.embedded == a.at("expect_embedded").get<bool>(), j["expect_embedded"] = a.at("expect_embedded");
  return j;
}

Json run_cn(Context& c, const Json& a, bool& pass) {
  const double cs = load_cn_slack((fs::path(c.scene.dir) / a.value("slack_file", "../data/golden/cn_slack.json")).string());
  const double h = c.result->map.mesh.mesh_size();
  const auto rep = check_cn(c.pullback(), a.value("samples", 200), c.seed);
  pass = rep.cn_defect_max <= cs * h;
  return {{"cn_defect_max", rep.cn_defect_max}, {"samples", rep.cn_samples}, {"mesh_size", h}, {"slack", cs * h}};
}

Json run_bg(Context& c, const Json& a, bool& pass) {
  const auto& pb = c.pullback();
  const int v = a.value("vertex", 0);
  const double lim = bg_radius_limit(pb, v), bound = a.value("max_defect_over_r2", 0.05);
  Json samples = Json::array();
  pass = true;
  for (double f : a.value("fractions", std::vector<double>{0.3, 0.6, 0.9})) {
    const auto s = check_bishop_gromov(pb, v, f * lim);
    pass = pass && s.defect <= bound * s.r * s.r;
    samples.push_back({{"r", s.r}, {"link", s.link}, {"ball_area", s.ball_area}, {"defect", s.defect},
                       {"defect_over_r2", s.defect / (s.r * s.r)}});
  }
  return {{"vertex", v}, {"radius_limit", lim}, {"max_defect_over_r2", bound}, {"samples", samples}};
}

Json run_flatness(Context& c, const Json& a, bool& pass, std::vector<std::string>& files, const std::string& tag) {
  const auto rep = flatness_report(c.pullback(), a.value("tol", 1e-3), a.value("max_cones", 1),
                                   a.value("cone_defect", -2 * M_PI), a.value("cone_tol", 0.1));
  const std::string expect = a.value("expect", "any");
  pass = expect == "any" || (expect == "flat" && rep.flat) || (expect == "rigid_cone" && rep.rigid_cone) ||
         (expect == "not_rigid" && !rep.rigid_cone);
  Json j = flatness_json(rep);
  j["expect"] = expect;
  files.push_back(c.artifact(tag + ".svg", mesh_values_svg(c.scene.name + ": angle defects", c.result->map.mesh,
                                                           rep.angle_vertices, rep.angle_defects, 0.05)));
  return j;
}

Json run_funnel(Context& c, const Json& a, bool& pass, std::vector<std::string>& files, const std::string& tag) {
  c.ext = build_funnel(c.scene.space, c.scene.curve, a.value("R", 0.0), a.value("portals", 16));
  const ExtendedMap em = extend_plateau(*c.result, c.ext, a.value("funnel_rings", 24));
  const Point p = scene_point(c.scene, a.value("center", Json("disc_center")), &c.result->map);
  const double cap = 0.8 * c.ext->truncation();
  const int n = a.value("points", 8);
  c.growth = area_growth(em, *c.ext, p, radius_grid(cap / n, cap, n), a.value("samples_per_triangle", 64));
  const double tol = a.value("tol", 0.05), slack = a.value("slack", 0.03);
  pass = c.growth->error <= tol && c.growth->monotonicity_defect <= slack;
  Json j = growth_json(*c.growth);
  j["tol"] = tol;
  j["slack"] = slack;
  j["kappa"] = c.ext->kappa();
  j["truncation"] = c.ext->truncation();
  j["disc_area"] = em.disc_area;
  j["funnel_area"] = em.funnel_area;
  j["extended_triangles"] = em.map.mesh.triangle_count();
  const int nprobes = a.value("probes", 0);
  if (nprobes > 0) {
    // Probes are images of random disc points, so every probe lies in the image.
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& mesh = c.result->map.mesh;
    std::vector<Point> probes;
    for (int i = 0; i < nprobes; ++i) {
      const int t = static_cast<int>(rng() % static_cast<std::uint64_t>(mesh.triangle_count()));
      double b1 = u(rng), b2 = u(rng);
      if (b1 + b2 > 1) b1 = 1 - b1, b2 = 1 - b2;
      probes.push_back(map_point(c.result->map, t, Eigen::Vector3d(1 - b1 - b2, b1, b2)));
    }
    const auto ke = key_estimate_check(em, *c.ext, c.ext->kappa(), probes, a.value("image_tol", 0.02),
                                       a.value("cluster_tol", 0.05));
    j["key_estimate"] = {{"bound", ke.bound},
                         {"counts", ke.counts},
                         {"worst_probe", ke.worst_probe},
                         {"worst_count", ke.worst_count},
                         {"pass", ke.pass}};
    pass = pass && ke.pass;
  }
  files.push_back(c.artifact(tag + ".csv", csv_columns({"r", "theta", "stderr"},
                                                       {c.growth->radii, c.growth->theta, c.growth->stderr_})));
  files.push_back(c.artifact(tag + ".svg", line_plot_svg(c.scene.name + ": area growth of the extended plane", "r",
                                                         "theta(r)", {{"theta", c.growth->radii, c.growth->theta}},
                                                         &c.growth->predicted)));
  return j;
}

Json run_fary_milnor(Context& c, const Json& a, bool& pass) {
  FaryMilnorOptions o;
  o.tol_kappa = a.value("tol_kappa", 1e-6);
  o.skip_funnel = c.opt.skip_funnel || a.value("skip_funnel", false);
  o.funnel_rings = a.value("funnel_rings", 24);
  FaryMilnorVerdict v;
  if (c.result) {
    // Reuse the scene's injectivity report when it used the same scale.
    const double delta = o.delta_fraction * curve_diameter(*c.scene.space, c.scene.curve);
    const bool same = c.injectivity && std::abs(c.injectivity->delta - delta) <= 1e-12 * delta &&
                      std::abs(c.injectivity->epsilon - o.epsilon_ratio * delta) <= 1e-12 * delta;
    v = fary_milnor_from_solve(c.scene.space, c.scene.curve, *c.result, o, c.growth ? &*c.growth : nullptr,
                               same ? &*c.injectivity : nullptr);
  } else {
    v = fary_milnor(c.scene.space, c.scene.curve, c.scene.solver, o);
  }
  Json j = {{"verdict", verdict_name(v.verdict)}, {"kappa", v.kappa}, {"kappa_over_pi", v.kappa / M_PI},
            {"reason", v.reason}};
  if (v.injectivity) j["injectivity"] = {{"min_ratio", v.injectivity->min_ratio}, {"embedded", v.injectivity->embedded}};
  if (v.flatness) j["flatness"] = flatness_json(*v.flatness);
  if (v.growth) j["theta_infinity_estimate"] = v.growth->theta_infinity_estimate;
  pass = true;
  if (a.contains("expect")) pass = a.at("expect").get<std::string>() == verdict_name(v.verdict), j["expect"] = a.at("expect");
  return j;
}

Json run_curvature(Context& c, const Json& a, bool& pass) {
  const auto rep = total_curvature(*c.scene.space, c.scene.curve);
  pass = rep.fenchel_ok;
  Json j = {{"kappa", rep.kappa}, {"kappa_over_pi", rep.kappa / M_PI}, {"fenchel_ok", rep.fenchel_ok},
            {"above_4pi", rep.kappa > 4 * M_PI + 1e-6}};
  if (a.contains("expect_kappa_over_pi")) {
    const double e = a.at("expect_kappa_over_pi").get<double>();
    pass = pass && std::abs(rep.kappa / M_PI - e) <= a.value("tol", 1e-9);
    j["expect_kappa_over_pi"] = e;
  }
  if (a.contains("expect_above_4pi"))
    pass = pass && (rep.kappa > 4 * M_PI + 1e-6) == a.at("expect_above_4pi").get<bool>(),
    j["expect_above_4pi"] = a.at("expect_above_4pi");
  return j;
}

bool needs_solve(const std::string& type) { return type != "fary_milnor" && type != "curvature"; }

}  // namespace

SolverConfig solver_from_json(const Json& j) {
  SolverConfig c;
  try {
    c.rings = j.value("rings", c.rings);
    c.max_sweeps = j.value("max_sweeps", c.max_sweeps);
    c.tol_energy = j.value("tol_energy", c.tol_energy);
    c.seed = j.value("seed", c.seed);
    c.refinement_levels = j.value("refinement_levels", c.refinement_levels);
    c.slide_every = j.value("slide_every", c.slide_every);
    c.over_relaxation = j.value("over_relaxation", c.over_relaxation);
    c.continuation = j.value("continuation", c.continuation);
    const std::string mode = j.value("boundary_mode", "sliding");
    if (mode == "fixed") c.boundary_mode = BoundaryMode::Fixed;
    else if (mode == "sliding") c.boundary_mode = BoundaryMode::Sliding;
    else parse_error("unknown boundary_mode '" + mode + "'");
    if (j.contains("pinned"))
      for (int i = 0; i < 3; ++i) c.pinned[i] = j.at("pinned").at(i).get<double>();
  } catch (const Json::exception& e) {
    parse_error(std::string("solver: ") + e.what());
  }
  return c;
}

Point scene_point(const Scene& scene, const Json& spec, const MeshMap* map) {
  if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    if (s == "disc_center") {
      if (!map) parse_error("disc_center needs a solved map");
      return map->images[0];
    }
    if (s == "curve_center") return curve_center(*scene.space, scene.curve);
    if (s == "apex") {
      const auto v = scene.space->singular_vertices();
      if (v.empty()) parse_error("space has no singular vertex");
      return v.front();
    }
    if (s == "example52_base") return example52_base(*scene.space);
    if (s == "example52_double_point") return example52_double_point(*scene.space);
    parse_error("unknown named point '" + s + "'");
  }
  return point_from_json(*scene.space, spec);
}

Scene load_scene(const std::string& path) {
  Scene s;
  s.path = path;
  s.dir = fs::path(path).parent_path().string();
  if (s.dir.empty()) s.dir = ".";
  s.raw = load_json(path);
  s.hash = fnv1a_hex(s.raw.dump());
  try {
    const Json& j = s.raw;
    s.name = j.value("name", fs::path(path).stem().string());
    s.space = space_from_json(j.at("space"));
    const Json& cj = j.at("curve");
    if (cj.contains("file")) {
      const Json f = load_json((fs::path(s.dir) / cj.at("file").get<std::string>()).string());
      s.curve = curve_from_json(*s.space, f);
    } else {
      s.curve = curve_from_json(*s.space, cj);
    }
    s.solver = solver_from_json(j.value("solver", Json::object()));
    s.solve = j.value("solve", true);
    if (j.contains("center")) s.solver.center = scene_point(s, j.at("center"));
    for (const Json& a : j.value("analyses", Json::array())) {
      const std::string type = a.at("type").get<std::string>();
      if (std::find(std::begin(kAnalyses), std::end(kAnalyses), type) == std::end(kAnalyses))
        parse_error("unknown analysis '" + type + "'");
      if (!s.solve && needs_solve(type)) parse_error("analysis '" + type + "' needs a solve");
      s.analyses.push_back(a);
    }
    s.output_dir = j.value("output_dir", "out/" + s.name);
  } catch (const Json::exception& e) {
    parse_error(path + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SceneParseError) throw;
    parse_error(path + ": " + e.what());
  }
  return s;
}

Json solve_to_json(const SolveResult& r) {
  return {{"schema", kReportSchema},
          {"map", map_to_json(r.map)},
          {"boundary_params", r.boundary_params},
          {"energy_trace", r.energy_trace},
          {"area", r.area},
          {"converged", r.converged},
          {"sweeps", r.sweeps},
          {"seed", r.config.seed},
          {"rings", r.config.rings},
          {"refinement_levels", r.config.refinement_levels}};
}

SolveResult solve_from_json(const Json& j, const Scene& scene) {
  SolveResult r;
  try {
    r.map = map_from_json(j.at("map"), scene.space);
    r.boundary_params = j.at("boundary_params").get<std::vector<double>>();
    r.energy_trace = j.at("energy_trace").get<std::vector<double>>();
    r.area = j.at("area").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.sweeps = j.at("sweeps").get<int>();
    r.curve = scene.curve;
    r.config = scene.solver;
    r.config.seed = j.at("seed").get<std::uint64_t>();
    r.config.rings = j.at("rings").get<int>();
    r.config.refinement_levels = j.at("refinement_levels").get<int>();
  } catch (const Json::exception& e) {
    parse_error(std::string("solve file: ") + e.what());
  }
  return r;
}

double load_cn_slack(const std::string& path) {
  const Json j = load_json(path);
  if (!j.contains("c") || !j.at("c").is_number()) parse_error(path + ": missing number 'c'");
  return j.at("c").get<double>();
}

RunReport run_scene(const Scene& scene, const RunOptions& opt) {
  RunReport rr;
  rr.out_dir = opt.out_dir.empty() ? scene.output_dir : opt.out_dir;
  if (opt.write_files) ensure_dir(rr.out_dir);
  SolverConfig cfg = scene.solver;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.rings) cfg.rings = *opt.rings;
  if (opt.tol) cfg.tol_energy = *opt.tol;
  Context c{scene, opt, rr.out_dir, cfg.seed, {}, {}, {}, {}, {}};

  Json& rep = rr.report;
  rep["schema"] = kReportSchema;
  rep["scene"] = scene.name;
  rep["scene_hash"] = scene.hash;
  rep["seed"] = cfg.seed;
  rep["space"] = scene.space->describe();
  rep["curve"] = {{"vertices", scene.curve.size()}, {"length", scene.curve.length()}};
  Json& timing = rr.timings;
  timing["scene"] = scene.name;

  bool all = true;
  if (opt.solved) {
    c.result = *opt.solved;
    cfg = c.result->config;
    c.seed = opt.seed ? *opt.seed : cfg.seed;
    rep["seed"] = c.seed;
  }
  if (scene.solve && !opt.solved) {
    const double t0 = now();
    try {
      c.result = solve_plateau(scene.space, scene.curve, cfg);
    } catch (const Error& e) {
      rep["solver"] = {{"error", error_name(e.code())}, {"message", e.what()}};
      rep["pass"] = false;
      timing["solve"] = now() - t0;
      rr.exit_code = 3;
      if (opt.write_files) {
        rr.report_path = (fs::path(rr.out_dir) / "report.json").string();
        write_text(rr.report_path, dump_report(rep));
        write_text((fs::path(rr.out_dir) / "timings.json").string(), dump_report(timing));
      }
      return rr;
    }
    timing["solve"] = now() - t0;
  }
  if (c.result) {
    const auto& tr = c.result->energy_trace;
    const std::size_t tail = std::min<std::size_t>(tr.size(), 5);
    rep["solver"] = {{"rings", c.result->map.mesh.rings},
                     {"refinement_levels", cfg.refinement_levels},
                     {"area", c.result->area},
                     {"converged", c.result->converged},
                     {"sweeps", c.result->sweeps},
                     {"energy_trace_tail", std::vector<double>(tr.end() - tail, tr.end())},
                     {"triangles", c.result->map.mesh.triangle_count()},
                     {"mesh_size", c.result->map.mesh.mesh_size()}};
    all = c.result->converged;
  }

  Json analyses = Json::array();
  std::map<std::string, int> seen;
  for (const Json& a : scene.analyses) {
    const std::string type = a.at("type").get<std::string>();
    const int k = seen[type]++;
    const std::string tag = k ? type + "_" + std::to_string(k) : type;
    std::vector<std::string> files;
    bool pass = false;
    const double t0 = now();
    Json data;
    try {
      if (type == "area") data = run_area(c, a, pass);
      else if (type == "isoperimetric") data = run_isoperimetric(c, a, pass);
      else if (type == "density") data = run_density(c, a, pass, files, tag);
      else if (type == "preimages") data = run_preimages(c, a, pass);
      else if (type == "injectivity") data = run_injectivity(c, a, pass);
      else if (type == "cn") data = run_cn(c, a, pass);
      else if (type == "bishop_gromov") data = run_bg(c, a, pass);
      else if (type == "flatness") data = run_flatness(c, a, pass, files, tag);
      else if (type == "funnel") data = run_funnel(c, a, pass, files, tag);
      else if (type == "fary_milnor") data = run_fary_milnor(c, a, pass);
      else data = run_curvature(c, a, pass);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SceneParseError) throw;
      data = {{"error", error_name(e.code())}, {"message", e.what()}};
      pass = false;
    } catch (const Json::exception& e) {
      parse_error(scene.path + ": analysis '" + tag + "': " + e.what());
    }
    timing[tag] = now() - t0;
    analyses.push_back({{"type", type}, {"name", tag}, {"pass", pass}, {"result", data}, {"artifacts", files}});
    all = all && pass;
  }
  rep["analyses"] = analyses;
  rep["pass"] = all;
  rr.pass = all;
  rr.exit_code = all ? 0 : 1;
  if (opt.write_files) {
    rr.report_path = (fs::path(rr.out_dir) / "report.json").string();
    write_text(rr.report_path, dump_report(rep));
    write_text((fs::path(rr.out_dir) / "timings.json").string(), dump_report(timing));
  }
  return rr;
}

}  // namespace plateau
