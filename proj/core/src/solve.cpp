#include "plateau/solve.hpp"

#include <algorithm>
#include <cmath>

#include "plateau/parallel.hpp"

namespace plateau {

void SolverConfig::validate() const {
  if (rings < 1) throw Error(ErrorCode::InvalidArgument, "rings must be >= 1");
  if (!(tol_energy > 0)) throw Error(ErrorCode::InvalidArgument, "tol_energy must be positive");
  if (max_sweeps < 1) throw Error(ErrorCode::InvalidArgument, "max_sweeps must be >= 1");
  for (double p : pinned)
    if (!(p >= 0 && p < 1)) throw Error(ErrorCode::InvalidArgument, "pinned parameters must lie in [0,1)");
  if (!(pinned[0] < pinned[1] && pinned[1] < pinned[2]))
    throw Error(ErrorCode::InvalidArgument, "pinned parameters must be strictly increasing");
  if (slide_every < 1) throw Error(ErrorCode::InvalidArgument, "slide_every must be >= 1");
  if (!(over_relaxation > 0 && over_relaxation < 2))
    throw Error(ErrorCode::InvalidArgument, "over_relaxation must lie in (0,2)");
}

namespace {

double wrap01(double t) {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

// Loop positions of the three pinned boundary vertices.
std::array<int, 3> pinned_positions(int L) { return {0, L / 3, (2 * L) / 3}; }

std::vector<double> initial_params(int L, const std::array<double, 3>& pinned) {
  const auto pos = pinned_positions(L);
  std::vector<double> t(L);
  for (int k = 0; k < 3; ++k) {
    const int a = pos[k], b = k == 2 ? L : pos[k + 1];
    const double ta = pinned[k], tb = k == 2 ? pinned[0] + 1.0 : pinned[k + 1];
    for (int i = a; i < b; ++i) t[i] = wrap01(ta + (tb - ta) * (i - a) / double(b - a));
  }
  return t;
}

// Greedy colouring of interior vertices in index order.
std::vector<std::vector<int>> colour_classes(const DiscMesh& mesh) {
  const auto nb = mesh.neighbors();
  const auto bm = mesh.boundary_mask();
  std::vector<int> colour(mesh.vertices.size(), -1);
  std::vector<std::vector<int>> classes;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (bm[v]) continue;
    std::vector<bool> used(classes.size() + 1, false);
    for (int u : nb[v])
      if (colour[u] >= 0) used[colour[u]] = true;
    int c = 0;
    while (used[c]) ++c;
    colour[v] = c;
    if (c == static_cast<int>(classes.size())) classes.emplace_back();
    classes[c].push_back(v);
  }
  return classes;
}

class Relaxer {
 public:
  Relaxer(SpacePtr space, const PolygonalCurve& curve, const SolverConfig& cfg, MeshMap map,
          std::vector<double> params)
      : space_(std::move(space)), curve_(curve), cfg_(cfg), map_(std::move(map)), params_(std::move(params)) {
    const DiscMesh& m = map_.mesh;
    cw_ = cotan_weights(m);
    classes_ = colour_classes(m);
    const int L = static_cast<int>(m.boundary_loop.size());
    pinned_.assign(L, false);
    for (int p : pinned_positions(L)) pinned_[p] = true;
    euclid_ = space_->kind() == SpaceKind::Euclidean;
  }

  double energy() const {
    const auto& e = cw_.edges;
    std::vector<double> terms(e.size());
    parallel_for(e.size(), [&](std::size_t i) {
      const double d = space_->distance(map_.images[e[i].first], map_.images[e[i].second]);
      terms[i] = cw_.weight[i] * d * d;
    });
    double s = 0.0;
    for (double x : terms) s += x;
    return s;
  }

  double local_energy(int v, const Point& x) const {
    double s = 0.0;
    for (const auto& [u, w] : cw_.adjacency[v]) {
      const double d = space_->distance(x, map_.images[u]);
      s += w * d * d;
    }
    return s;
  }

  void relax_vertex(int v) {
    const auto& adj = cw_.adjacency[v];
    std::vector<Point> pts;
    std::vector<double> w;
    pts.reserve(adj.size());
    w.reserve(adj.size());
    for (const auto& [u, x] : adj) {
      pts.push_back(map_.images[u]);
      w.push_back(x);
    }
    const Point& cur = map_.images[v];
    Point next;
    try {
      next = space_->frechet_mean(pts, w, &cur).point;
    } catch (const NoConvergenceError& e) {
      next = e.best();
    }
    if (euclid_) next.coords = cur.coords + cfg_.over_relaxation * (next.coords - cur.coords);
    // Keep the previous image unless the local energy drops.
    if (local_energy(v, next) < local_energy(v, cur)) map_.images[v] = next;
  }

  void relax_interior() {
    for (const auto& cls : classes_) parallel_for(cls.size(), [&](std::size_t i) { relax_vertex(cls[i]); });
  }

  void slide_vertex(int pos) {
    const auto& loop = map_.mesh.boundary_loop;
    const int L = static_cast<int>(loop.size());
    const int v = loop[pos];
    double lo = params_[(pos + L - 1) % L], hi = params_[(pos + 1) % L], cur = params_[pos];
    if (hi <= lo) hi += 1.0;
    if (cur < lo) cur += 1.0;
    const double gap = hi - lo;
    lo += 1e-9 * gap;
    hi -= 1e-9 * gap;
    auto g = [&](double t) { return local_energy(v, arc_length_param(*space_, curve_, wrap01(t))); };
    const double g0 = local_energy(v, map_.images[v]);
    // Coarse scan, then golden section around the best sample.
    const int N = 8;
    double best_t = cur, best_g = g(cur);
    int best_k = -1;
    std::vector<double> ts(N + 1);
    for (int k = 0; k <= N; ++k) {
      ts[k] = lo + (hi - lo) * k / N;
      const double gk = g(ts[k]);
      if (gk < best_g) best_g = gk, best_t = ts[k], best_k = k;
    }
    double a, b;
    if (best_k < 0) {
      a = std::max(lo, cur - (hi - lo) / N);
      b = std::min(hi, cur + (hi - lo) / N);
    } else {
      a = ts[std::max(0, best_k - 1)];
      b = ts[std::min(N, best_k + 1)];
    }
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
      if (f1 < f2) {
        b = x2, x2 = x1, f2 = f1;
        x1 = b - phi * (b - a), f1 = g(x1);
      } else {
        a = x1, x1 = x2, f1 = f2;
        x2 = a + phi * (b - a), f2 = g(x2);
      }
    }
    if (f1 < best_g) best_g = f1, best_t = x1;
    if (f2 < best_g) best_g = f2, best_t = x2;
    if (best_g < g0) {
      params_[pos] = wrap01(best_t);
      map_.images[v] = arc_length_param(*space_, curve_, params_[pos]);
    }
  }

  void slide_boundary() {
    const int L = static_cast<int>(map_.mesh.boundary_loop.size());
    for (int parity = 0; parity < 2; ++parity) {
      std::vector<int> todo;
      for (int p = parity; p < L; p += 2)
        if (!pinned_[p]) todo.push_back(p);
      // An odd loop would make the last and first positions adjacent.
      if (L % 2 == 1 && parity == 0 && !todo.empty() && todo.back() == L - 1) todo.pop_back();
      parallel_for(todo.size(), [&](std::size_t i) { slide_vertex(todo[i]); });
    }
    if (L % 2 == 1 && !pinned_[L - 1]) slide_vertex(L - 1);
  }

  SolveResult run() {
    SolveResult res;
    double E = energy();
    res.energy_trace.push_back(E);
    const bool sliding = cfg_.boundary_mode == BoundaryMode::Sliding;
    for (int sweep = 1; sweep <= cfg_.max_sweeps; ++sweep) {
      relax_interior();
      const bool slid = sliding && sweep % cfg_.slide_every == 0;
      if (slid) slide_boundary();
      const double En = energy();
      res.energy_trace.push_back(En);
      res.sweeps = sweep;
      const double rel = (E - En) / std::max(En, 1e-300);
      E = En;
      if ((!sliding || slid) && rel < cfg_.tol_energy) {
        res.converged = true;
        break;
      }
    }
    res.map = map_;
    res.boundary_params = params_;
    res.area = map_area(res.map);
    return res;
  }

  const MeshMap& map() const { return map_; }

 private:
  SpacePtr space_;
  const PolygonalCurve& curve_;
  SolverConfig cfg_;
  MeshMap map_;
  std::vector<double> params_;
  CotanWeights cw_;
  std::vector<std::vector<int>> classes_;
  std::vector<bool> pinned_;
  bool euclid_ = false;
};

// Curve parameter at domain angle phi, interpolating the boundary parameters.
double param_at_angle(const std::vector<double>& params, double phi) {
  const int L = static_cast<int>(params.size());
  double x = phi / (2 * M_PI) * L;
  x -= std::floor(x / L) * L;
  int i = static_cast<int>(std::floor(x));
  if (i >= L) i = L - 1;
  const double f = x - i;
  double a = params[i], b = params[(i + 1) % L];
  if (b <= a) b += 1.0;
  return wrap01(a + f * (b - a));
}

MeshMap radial_fill(SpacePtr space, const Point& p, const PolygonalCurve& curve, const DiscMesh& mesh,
                    const std::vector<double>& params) {
  MeshMap m;
  m.mesh = mesh;
  m.space = space;
  m.images.resize(mesh.vertices.size());
  const auto bm = mesh.boundary_mask();
  std::vector<int> loop_pos(mesh.vertices.size(), -1);
  for (std::size_t i = 0; i < mesh.boundary_loop.size(); ++i) loop_pos[mesh.boundary_loop[i]] = static_cast<int>(i);
  parallel_for(mesh.vertices.size(), [&](std::size_t v) {
    const Vec2 x = mesh.vertices[v];
    const double rho = std::min(1.0, x.norm());
    if (bm[v]) {
      m.images[v] = arc_length_param(*space, curve, params[loop_pos[v]]);
      return;
    }
    if (rho == 0.0) {
      m.images[v] = p;
      return;
    }
    const Point end = arc_length_param(*space, curve, param_at_angle(params, std::atan2(x.y(), x.x())));
    m.images[v] = space->geodesic_point(p, end, rho);
  });
  return m;
}

// Images on the ring mesh of 2n rings from a solved map on n rings.
std::pair<MeshMap, std::vector<double>> prolongate(const MeshMap& coarse, const std::vector<double>& params,
                                                   const PolygonalCurve& curve) {
  const DiscMesh& cm = coarse.mesh;
  DiscMesh fm = generate_disc_mesh(2 * cm.rings);
  const int Lc = static_cast<int>(cm.boundary_loop.size());
  std::vector<double> fp(2 * Lc);
  for (int i = 0; i < Lc; ++i) {
    double a = params[i], b = params[(i + 1) % Lc];
    if (b <= a) b += 1.0;
    fp[2 * i] = a;
    fp[2 * i + 1] = wrap01(0.5 * (a + b));
  }
  MeshMap fmap;
  fmap.space = coarse.space;
  fmap.images.resize(fm.vertices.size());
  const auto bm = fm.boundary_mask();
  std::vector<int> loop_pos(fm.vertices.size(), -1);
  for (std::size_t i = 0; i < fm.boundary_loop.size(); ++i) loop_pos[fm.boundary_loop[i]] = static_cast<int>(i);
  const MetricSpace& X = *coarse.space;
  parallel_for(fm.vertices.size(), [&](std::size_t v) {
    if (bm[v]) {
      fmap.images[v] = arc_length_param(X, curve, fp[loop_pos[v]]);
      return;
    }
    const Vec2 x = fm.vertices[v];
    int best_t = 0;
    double best_min = -INFINITY;
    Eigen::Vector3d best_b;
    for (int t = 0; t < cm.triangle_count(); ++t) {
      const auto& tr = cm.triangles[t];
      const Vec2 a = cm.vertices[tr[0]], b = cm.vertices[tr[1]], c = cm.vertices[tr[2]];
      const double A = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
      Eigen::Vector3d l;
      l(1) = ((x - a).x() * (c - a).y() - (x - a).y() * (c - a).x()) / A;
      l(2) = ((b - a).x() * (x - a).y() - (b - a).y() * (x - a).x()) / A;
      l(0) = 1.0 - l(1) - l(2);
      const double mn = l.minCoeff();
      if (mn > best_min) best_min = mn, best_t = t, best_b = l;
      if (mn >= 0) break;
    }
    Eigen::Vector3d l = best_b.cwiseMax(0.0);
    l /= l.sum();
    const auto& tr = cm.triangles[best_t];
    const Point& A = coarse.images[tr[0]];
    const Point& B = coarse.images[tr[1]];
    const Point& C = coarse.images[tr[2]];
    const double ab = l(0) + l(1);
    if (ab <= 1e-15) {
      fmap.images[v] = C;
      return;
    }
    const Point P = X.geodesic_point(A, B, l(1) / ab);
    fmap.images[v] = X.geodesic_point(P, C, l(2));
  });
  fmap.mesh = std::move(fm);
  return {std::move(fmap), std::move(fp)};
}

SolveResult relax(SpacePtr space, const PolygonalCurve& curve, const SolverConfig& cfg, MeshMap map,
                  std::vector<double> params) {
  Relaxer r(std::move(space), curve, cfg, std::move(map), std::move(params));
  SolveResult res = r.run();
  res.curve = curve;
  res.config = cfg;
  res.config.rings = res.map.mesh.rings;
  return res;
}

}  // namespace

Point curve_center(const MetricSpace& space, const PolygonalCurve& curve) {
  const int n = curve.size();
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 * (curve.edge_lengths[i] + curve.edge_lengths[(i + n - 1) % n]);
  try {
    return space.frechet_mean(curve.vertices, w).point;
  } catch (const NoConvergenceError& e) {
    return e.best();
  }
}

MeshMap radial_cone_fill(SpacePtr space, const Point& p, const PolygonalCurve& curve, int rings) {
  if (!(curve.length() > 0)) throw Error(ErrorCode::InvalidCurve, "curve has zero length");
  space->validate(p);
  const DiscMesh mesh = generate_disc_mesh(rings);
  const int L = static_cast<int>(mesh.boundary_loop.size());
  std::vector<double> params(L);
  for (int i = 0; i < L; ++i) params[i] = static_cast<double>(i) / L;
  return radial_fill(std::move(space), p, curve, mesh, params);
}

SolveResult solve_plateau(SpacePtr space, const PolygonalCurve& curve, const SolverConfig& cfg) {
  cfg.validate();
  if (!(curve.length() > 0)) throw Error(ErrorCode::InvalidCurve, "curve has zero length");
  if (!curve.closed || curve.size() < 3) throw Error(ErrorCode::InvalidCurve, "curve must be a closed polygon");
  const Point center = cfg.center ? *cfg.center : curve_center(*space, curve);
  space->validate(center);

  std::vector<int> levels{cfg.rings};
  if (cfg.continuation)
    while (levels.back() % 2 == 0 && levels.back() / 2 >= 4) levels.push_back(levels.back() / 2);
  std::reverse(levels.begin(), levels.end());

  const DiscMesh coarse = generate_disc_mesh(levels.front());
  std::vector<double> params = initial_params(static_cast<int>(coarse.boundary_loop.size()), cfg.pinned);
  MeshMap map = radial_fill(space, center, curve, coarse, params);
  SolveResult res;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i > 0) std::tie(map, params) = prolongate(res.map, res.boundary_params, curve);
    res = relax(space, curve, cfg, std::move(map), std::move(params));
  }
  if (cfg.refinement_levels > 0) res = refine_and_resolve(res, cfg.refinement_levels);
  res.config = cfg;
  res.config.rings = res.map.mesh.rings;
  return res;
}

SolveResult refine_and_resolve(const SolveResult& result, int levels) {
  if (levels < 1) throw Error(ErrorCode::InvalidArgument, "levels must be >= 1");
  if (result.map.mesh.rings < 1) throw Error(ErrorCode::InvalidArgument, "refinement needs a ring mesh");
  SolveResult res = result;
  for (int l = 0; l < levels; ++l) {
    auto [map, params] = prolongate(res.map, res.boundary_params, res.curve);
    SolverConfig cfg = res.config;
    cfg.refinement_levels = 0;
    SpacePtr space = map.space;
    res = relax(space, result.curve, cfg, std::move(map), std::move(params));
  }
  return res;
}

}  // namespace plateau
