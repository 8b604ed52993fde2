// Acceptance suite: one PASS/FAIL line per criterion. Usage:
//   plateau_acceptance [criterion ...]    (default: all nine)
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "../support/oracles.hpp"
#include "plateau/analyze.hpp"
#include "plateau/cone_space.hpp"
#include "plateau/euclidean_space.hpp"
#include "plateau/parallel.hpp"
#include "plateau/report_io.hpp"
#include "plateau/scene.hpp"

using namespace plateau;

namespace {

const std::string kScenes = PLATEAU_SCENE_DIR;
const std::string kData = PLATEAU_DATA_DIR;

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string g6(double x) { return fmt6(x); }

// Solved canonical scenes, one solve each, shared between criteria.
class Solves {
 public:
  const Scene& scene(const std::string& name) {
    auto it = scenes_.find(name);
    if (it == scenes_.end()) it = scenes_.emplace(name, load_scene(kScenes + "/" + name + ".json")).first;
    return it->second;
  }
  const SolveResult& result(const std::string& name) {
    auto it = results_.find(name);
    if (it == results_.end()) {
      const Scene& s = scene(name);
      it = results_.emplace(name, solve_plateau(s.space, s.curve, s.solver)).first;
    }
    return it->second;
  }

 private:
  std::map<std::string, Scene> scenes_;
  std::map<std::string, SolveResult> results_;
};

// First analysis of the given type in a scene file, {} if none.
Json analysis(const Scene& s, const std::string& type) {
  for (const Json& a : s.analyses)
    if (a.at("type") == type) return a;
  return Json::object();
}

Solves& solves() {
  static Solves s;
  return s;
}

Outcome criterion1() {
  Outcome o;
  const Scene& s = solves().scene("flat_circle");
  const double t0 = now();
  const SolveResult r = solve_plateau(s.space, s.curve, s.solver);
  const double dt = now() - t0;
  const double rel = std::abs(r.area - M_PI) / M_PI, iso = isoperimetric_ratio(r.map, s.curve);
  o.check(r.map.mesh.rings == 32, "rings 16 refined once -> " + std::to_string(r.map.mesh.rings));
  o.check(rel <= 0.015, "area " + g6(r.area) + " (rel err " + g6(rel) + " <= 0.015)");
  o.check(iso >= 0.97 && iso <= 1.005, "isoperimetric ratio " + g6(iso) + " in [0.97, 1.005]");
  o.check(dt < 30, "solve " + g6(dt) + " s < 30 s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double t0 = now();
  auto e2 = std::make_shared<EuclideanSpace>(2);
  auto e3 = std::make_shared<EuclideanSpace>(3);
  const auto sq = make_curve(*e2, {e2->make({0, 0}), e2->make({1, 0}), e2->make({1, 1}), e2->make({0, 1})});
  const auto tri = make_curve(*e2, {e2->make({0, 0}), e2->make({1, 0}), e2->make({0.5, std::sqrt(3.0) / 2})});
  std::vector<Point> ngon;
  for (int k = 0; k < 64; ++k) ngon.push_back(e2->make({std::cos(2 * M_PI * k / 64), std::sin(2 * M_PI * k / 64)}));
  const double ks = total_curvature(*e2, sq).kappa, kt = total_curvature(*e2, tri).kappa;
  const double kn = total_curvature(*e2, make_curve(*e2, ngon)).kappa;
  o.check(std::abs(ks - 2 * M_PI) <= 1e-12, "square |k-2pi| = " + g6(std::abs(ks - 2 * M_PI)));
  o.check(std::abs(kt - 2 * M_PI) <= 1e-12, "triangle |k-2pi| = " + g6(std::abs(kt - 2 * M_PI)));
  o.check(std::abs(kn - 2 * M_PI) <= 1e-9, "64-gon |k-2pi| = " + g6(std::abs(kn - 2 * M_PI)));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = INFINITY;
  int simple = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 4 + static_cast<int>(rng() % 17);
    std::vector<Point> v;
    for (int k = 0; k < n; ++k) v.push_back(e3->make({u(rng), u(rng), u(rng)}));
    const auto c = make_curve(*e3, v);
    simple += min_edge_separation(*e3, c) > 1e-9;
    worst = std::min(worst, total_curvature(*e3, c).kappa - 2 * M_PI);
  }
  o.check(simple == 100, std::to_string(simple) + "/100 random polygons simple");
  o.check(worst >= -1e-9, "min over 100 random of k-2pi = " + g6(worst));
  const double dt = now() - t0;
  o.check(dt < 5, g6(dt) + " s < 5 s");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const double t0 = now();
  const std::vector<const char*> items = {"flat_circle", "cone3pi", "example52", "random_a", "random_b"};
  for (const char* name : items) {
    const Scene& s = solves().scene(name);
    const SolveResult& r = solves().result(name);
    const Point p = scene_point(s, analysis(s, "density").value("center", Json("disc_center")), &r.map);
    const double bd = boundary_image_distance(r.map, p);
    const auto prof = density_profile(r.map, p, radius_grid(0.08 * bd, 0.8 * bd, 12));
    o.check(prof.radii.size() == 12 && prof.monotonicity_defect <= 0.03,
            std::string(name) + " defect " + g6(prof.monotonicity_defect));
  }
  const double dt = now() - t0;
  o.check(dt < 120, g6(dt) + " s < 120 s");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const Scene& s = solves().scene("example52");
  const SolveResult& r = solves().result("example52");
  const Point p = example52_double_point(*s.space);
  const int count = count_preimages(r.map, p, 0.02, 0.05);
  const double bd = boundary_image_distance(r.map, p);
  const auto prof = density_profile(r.map, p, radius_grid(0.05 * bd, 0.3 * bd, 6));
  o.check(count == 2, "count_preimages = " + std::to_string(count));
  o.check(prof.theta_zero >= 1.9, "theta_zero = " + g6(prof.theta_zero) + " >= 1.9");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const double t0 = now();
  for (const auto& [name, target, tol, probes] : std::vector<std::tuple<std::string, double, double, int>>{
           {"example52", 2.0, 0.1, 50}, {"flat_circle", 1.0, 0.05, 0}}) {
    const Scene& s = solves().scene(name);
    const SolveResult& r = solves().result(name);
    const auto ext = build_funnel(s.space, s.curve);
    const auto em = extend_plateau(r, ext, name == "example52" ? 24 : 16);
    const double cap = 0.8 * ext->truncation();
    const auto g = area_growth(em, *ext, r.map.images[0], radius_grid(cap / 8, cap, 8));
    o.check(std::abs(g.theta_infinity_estimate - target) <= tol,
            name + " theta_inf " + g6(g.theta_infinity_estimate) + " vs " + g6(target) + " +- " + g6(tol));
    if (probes > 0) {
      std::mt19937_64 rng(5);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::vector<Point> pts;
      for (int i = 0; i < probes; ++i) {
        const int t = static_cast<int>(rng() % static_cast<std::uint64_t>(r.map.mesh.triangle_count()));
        double b1 = u(rng), b2 = u(rng);
        if (b1 + b2 > 1) b1 = 1 - b1, b2 = 1 - b2;
        pts.push_back(map_point(r.map, t, Eigen::Vector3d(1 - b1 - b2, b1, b2)));
      }
      const auto ke = key_estimate_check(em, *ext, ext->kappa(), pts, 0.02, 0.05);
      o.check(ke.worst_count <= 2 && static_cast<int>(ke.counts.size()) == probes,
              name + " max preimages over " + std::to_string(probes) + " probes = " + std::to_string(ke.worst_count));
    }
  }
  const double dt = now() - t0;
  o.check(dt < 180, g6(dt) + " s < 180 s");
  return o;
}

Outcome criterion6() {
  Outcome o;
  const double t0 = now();
  {
    const Scene& s = solves().scene("convex_polygon");
    const auto v = fary_milnor_from_solve(s.space, s.curve, solves().result("convex_polygon"));
    o.check(v.verdict == Verdict::Embedded, std::string("convex polygon ") + verdict_name(v.verdict));
  }
  {
    const Scene& s = solves().scene("example52");
    const auto v = fary_milnor_from_solve(s.space, s.curve, solves().result("example52"));
    o.check(v.verdict == Verdict::RigidConeCandidate, std::string("example52 ") + verdict_name(v.verdict));
    int in_band = 0;
    double other = -INFINITY;
    if (v.flatness)
      for (double d : v.flatness->angle_defects) {
        if (std::abs(d + 2 * M_PI) <= 0.1) ++in_band;
        else other = std::max(other, d);
      }
    o.check(in_band == 1, std::to_string(in_band) + " defect(s) in [-2pi-0.1, -2pi+0.1]");
    o.check(other <= 1e-3, "other defects <= " + g6(other));
  }
  {
    const Json j = load_json(kData + "/curves/trefoil6.json");
    auto space = space_from_json(j.at("space"));
    const auto v = fary_milnor(space, curve_from_json(*space, j), SolverConfig{});
    o.check(v.verdict == Verdict::AboveThreshold,
            std::string("trefoil ") + verdict_name(v.verdict) + " (k/pi = " + g6(v.kappa / M_PI) + ")");
  }
  const double dt = now() - t0;
  o.check(dt < 180, g6(dt) + " s < 180 s");
  return o;
}

Outcome criterion7() {
  Outcome o;
  const double c = load_cn_slack(kData + "/golden/cn_slack.json");
  for (const char* name : {"flat_circle", "cone3pi", "example52", "random_a", "random_b"}) {
    const SolveResult& r = solves().result(name);
    const int vbg = analysis(solves().scene(name), "bishop_gromov").value("vertex", 0);
    const PullbackMetric pb = pullback_metric(r.map);
    const double h = r.map.mesh.mesh_size();
    const double cn = check_cn(pb, 200, 1).cn_defect_max;
    double bg = -INFINITY;
    const double lim = bg_radius_limit(pb, vbg);
    for (double f : {0.3, 0.6, 0.9}) {
      const auto s = check_bishop_gromov(pb, vbg, f * lim);
      bg = std::max(bg, s.defect / (s.r * s.r));
    }
    o.check(cn <= c * h && bg <= 0.05,
            std::string(name) + " CN " + g6(cn) + " <= " + g6(c * h) + ", BG/r^2 " + g6(bg) + " <= 0.05");
  }
  // Corrupted metric: shrink the spokes at the centre of a flat disc.
  MeshMap m;
  m.mesh = generate_disc_mesh(16);
  m.space = std::make_shared<EuclideanSpace>(2);
  for (const auto& v : m.mesh.vertices) m.images.push_back(Point::from(0, v));
  auto len = image_edge_lengths(m);
  const auto edges = m.mesh.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].first == 0 || edges[i].second == 0) len[i] *= 0.8;
  const double cn = check_cn(PullbackMetric(m.mesh, len, 3), 200, 1).cn_defect_max;
  o.check(cn > c * m.mesh.mesh_size(), "corrupted CN " + g6(cn) + " > slack " + g6(c * m.mesh.mesh_size()));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const double t0 = now();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double mult : {2.0, 3.0, 4.0}) {
    const double alpha = mult * M_PI;
    auto cone = ConeSpace::euclidean_cone(alpha);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t1 = alpha * u(rng), t2 = alpha * u(rng), r1 = 3 * u(rng), r2 = 3 * u(rng);
      const double d = cone->distance(cone->at_angle(t1, r1), cone->at_angle(t2, r2));
      worst = std::max(worst, std::abs(d - oracle::cone_distance(alpha, r1, t1, r2, t2)));
    }
    o.check(worst <= 1e-9, "C_" + g6(mult) + "pi worst " + g6(worst));
  }
  auto e = std::make_shared<EuclideanSpace>(2);
  const std::vector<Vec2> poly = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<Point> v;
  for (const auto& x : poly) v.push_back(e->make({x.x(), x.y()}));
  const auto ext = build_funnel(e, make_curve(*e, v));
  auto rand_point = [&](bool base_ok) {
    const double w = u(rng);
    if (base_ok && w < 0.25) return e->make({u(rng), u(rng)});
    if (w < 0.65) return ext->strip_point(static_cast<int>(rng() % 4), u(rng), 4 * u(rng));
    const int i = static_cast<int>(rng() % 4);
    return ext->sector_point(i, 4 * u(rng), ext->sector_angles()[i] * u(rng));
  };
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Point a = rand_point(false), b = rand_point(true);
    const double ref = (oracle::planar_position(*ext, poly, a) - oracle::planar_position(*ext, poly, b)).norm();
    worst = std::max(worst, std::abs(extended_distance(*ext, a, b) - ref));
  }
  o.check(worst <= 1e-6, "square funnel worst " + g6(worst));
  const double dt = now() - t0;
  o.check(dt < 30, g6(dt) + " s < 30 s");
  return o;
}

Outcome criterion9() {
  Outcome o;
  const std::set<std::string> golden = {"flat_circle", "cone3pi", "example52", "square"};
  for (const char* name :
       {"flat_circle", "cone3pi", "example52", "square", "random_a", "random_b", "trefoil", "convex_polygon"}) {
    const Scene& s = solves().scene(name);
    RunOptions opt;
    opt.write_files = false;
    set_thread_count(1);
    const std::string one = dump_report(run_scene(s, opt).report);
    set_thread_count(4);
    const std::string four = dump_report(run_scene(s, opt).report);
    set_thread_count(1);
    bool ok = one == four;
    std::string what = std::string(name) + (ok ? " identical" : " DIFFERS") + " (threads 1 vs 4)";
    if (golden.count(name)) {
      std::string frozen;
      try {
        const Json g = load_json(kData + "/golden/reports/" + name + ".json");
        frozen = dump_report(g);
      } catch (const Error&) {
      }
      const bool same = frozen == one;
      ok = ok && same;
      what += same ? ", matches golden" : ", golden MISMATCH";
    }
    o.check(ok, what);
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  set_thread_count(1);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"flat Plateau equality", criterion1},     {"total curvature exactness", criterion2},
      {"monotonicity suite", criterion3},        {"density >= multiplicity", criterion4},
      {"key estimate + area growth", criterion5}, {"Fary-Milnor verdicts", criterion6},
      {"comparison-geometry suite", criterion7}, {"oracle equivalence", criterion8},
      {"determinism", criterion9}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!only.empty() && !only.count(static_cast<int>(k + 1))) continue;
    const double t0 = now();
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    all = all && out.pass;
    std::printf("[%s] %zu %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                out.detail.c_str(), now() - t0);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
