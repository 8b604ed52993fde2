#include "plateau/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "plateau/error.hpp"
#include "plateau/parallel.hpp"

namespace plateau {

namespace {

// Complex barycentric coordinates -> mesh corner order.
Eigen::Vector3d complex_to_mesh(const PullbackMetric& pb, int t, const Eigen::Vector3d& b) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  const auto& tri = pb.complex().tri(t);
  for (int k = 0; k < 3; ++k)
    for (int c = 0; c < 3; ++c)
      if (tri.v[c] == pb.mesh().triangles[t][k]) out(k) = b(c);
  return out;
}

// Any triangle holding vertex v, with v's barycentric coordinates.
std::pair<int, Eigen::Vector3d> vertex_location(const DiscMesh& mesh, int v) {
  for (int t = 0; t < mesh.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k)
      if (mesh.triangles[t][k] == v) {
        Eigen::Vector3d b = Eigen::Vector3d::Zero();
        b(k) = 1.0;
        return {t, b};
      }
  throw Error(ErrorCode::InvalidArgument, "isolated vertex");
}

// Complex triangle and local coordinates for the source of a vertex field.
std::pair<int, Vec2> vertex_seat(const TriangleComplex& tc, int v) {
  const auto& [t, c] = tc.incident(v).front();
  return {t, tc.tri(t).c[c]};
}

// Pattern search over domain points, 8 directions, halving on failure.
Vec2 pattern_search(const std::function<double(const Vec2&)>& g, Vec2 x, double step, double min_step,
                    int max_evals, double* value) {
  double gx = g(x);
  int evals = 1;
  while (step > min_step && evals < max_evals && gx > 0) {
    bool moved = false;
    for (int k = 0; k < 8 && evals < max_evals; ++k) {
      const double a = k * M_PI / 4;
      const Vec2 y = x + step * Vec2(std::cos(a), std::sin(a));
      const double gy = g(y);
      ++evals;
      if (gy < gx) {
        x = y;
        gx = gy;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  if (value) *value = gx;
  return x;
}

Vec2 clamp_disc(const Vec2& x) {
  const double n = x.norm();
  return n > 1.0 ? Vec2(x / n) : x;
}

struct DomainEval {
  const MeshMap& map;
  Point operator()(const Vec2& x) const {
    const auto [t, b] = locate_domain(map.mesh, clamp_disc(x));
    return map_point(map, t, b);
  }
};

}  // namespace

std::vector<Eigen::Vector3d> stratified_barycentric(int m, std::vector<char>* upward) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "stratification level must be >= 1");
  std::vector<Eigen::Vector3d> out;
  out.reserve(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; i + j < m; ++j) {
      const double u = (i + 1.0 / 3) / m, v = (j + 1.0 / 3) / m;
      out.emplace_back(1 - u - v, u, v);
      if (upward) upward->push_back(1);
      if (i + j < m - 1) {
        const double u2 = (i + 2.0 / 3) / m, v2 = (j + 2.0 / 3) / m;
        out.emplace_back(1 - u2 - v2, u2, v2);
        if (upward) upward->push_back(0);
      }
    }
  return out;
}

Point map_point(const MeshMap& map, int tri, const Eigen::Vector3d& bary) {
  const auto& T = map.mesh.triangles[tri];
  const Point& A = map.images[T[0]];
  const Point& B = map.images[T[1]];
  const Point& C = map.images[T[2]];
  const double ab = bary(0) + bary(1);
  if (ab <= 0) return C;
  const Point P = map.space->geodesic_point(A, B, bary(1) / ab);
  if (bary(2) <= 0) return P;
  return map.space->geodesic_point(P, C, bary(2));
}

Vec2 domain_point(const DiscMesh& mesh, int tri, const Eigen::Vector3d& bary) {
  const auto& T = mesh.triangles[tri];
  return bary(0) * mesh.vertices[T[0]] + bary(1) * mesh.vertices[T[1]] + bary(2) * mesh.vertices[T[2]];
}

std::pair<int, Eigen::Vector3d> locate_domain(const DiscMesh& mesh, const Vec2& x) {
  int best = 0;
  double best_min = -INFINITY;
  Eigen::Vector3d best_b(1.0 / 3, 1.0 / 3, 1.0 / 3);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const Vec2& a = mesh.vertices[mesh.triangles[t][0]];
    const Vec2& b = mesh.vertices[mesh.triangles[t][1]];
    const Vec2& c = mesh.vertices[mesh.triangles[t][2]];
    const Vec2 e1 = b - a, e2 = c - a, w = x - a;
    const double det = e1.x() * e2.y() - e1.y() * e2.x();
    const double u = (w.x() * e2.y() - w.y() * e2.x()) / det;
    const double v = (e1.x() * w.y() - e1.y() * w.x()) / det;
    const Eigen::Vector3d bc(1 - u - v, u, v);
    const double mn = bc.minCoeff();
    if (mn >= 0) return {t, bc};
    if (mn > best_min) best_min = mn, best = t, best_b = bc;
  }
  best_b = best_b.cwiseMax(0.0);
  best_b /= best_b.sum();
  return {best, best_b};
}

double boundary_image_distance(const MeshMap& map, const Point& p, int samples_per_edge) {
  const auto field = map.space->distance_field(p);
  const auto& loop = map.mesh.boundary_loop;
  const int L = static_cast<int>(loop.size());
  std::vector<double> best(L, INFINITY);
  parallel_for(L, [&](std::size_t i) {
    const Point& a = map.images[loop[i]];
    const Point& b = map.images[loop[(i + 1) % L]];
    for (int k = 0; k < samples_per_edge; ++k)
      best[i] = std::min(best[i], (*field)(map.space->geodesic_point(a, b, static_cast<double>(k) / samples_per_edge)));
  });
  return *std::min_element(best.begin(), best.end());
}

std::vector<double> radius_grid(double r_min, double r_max, int n) {
  if (n < 2 || !(r_min > 0) || !(r_max > r_min)) throw Error(ErrorCode::InvalidArgument, "bad radius grid");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = r_min + (r_max - r_min) * i / (n - 1);
  return out;
}

DensityProfile density_profile(const MeshMap& map, const Point& p, const std::vector<double>& radii,
                               int samples_per_triangle) {
  if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "empty radius grid");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw Error(ErrorCode::InvalidArgument, "radii must be positive and strictly increasing");
  map.space->validate(p);
  DensityProfile prof;
  prof.center = p;
  prof.radii = radii;
  prof.boundary_distance = boundary_image_distance(map, p);
  if (!(radii.back() < prof.boundary_distance - map.space->geodesic_tolerance()))
    throw Error(ErrorCode::RadiusTooLarge, "largest radius reaches the boundary image");

  const int m = std::max(1, static_cast<int>(std::lround(std::sqrt(std::max(1, samples_per_triangle)))));
  std::vector<char> up;
  const auto bary = stratified_barycentric(m, &up);
  const auto field = map.space->distance_field(p);
  const auto lengths = image_edge_lengths(map);
  const auto edges = map.mesh.edges();
  auto edge_len = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    const auto it = std::lower_bound(edges.begin(), edges.end(), std::pair<int, int>(key));
    return lengths[it - edges.begin()];
  };
  const int F = map.mesh.triangle_count();
  const std::size_t R = radii.size();
  // Per triangle: pull-back area and hit counts per radius, split by half.
  std::vector<double> area(F);
  std::vector<std::vector<int>> hits(F, std::vector<int>(R, 0)), hits_up(F, std::vector<int>(R, 0));
  parallel_for(F, [&](std::size_t t) {
    const auto& T = map.mesh.triangles[t];
    area[t] = heron_area(edge_len(T[0], T[1]), edge_len(T[1], T[2]), edge_len(T[2], T[0]));
    if (area[t] <= 0) return;
    for (std::size_t k = 0; k < bary.size(); ++k) {
      const double d = (*field)(map_point(map, static_cast<int>(t), bary[k]));
      for (std::size_t i = 0; i < R; ++i)
        if (d < radii[i]) {
          ++hits[t][i];
          if (up[k]) ++hits_up[t][i];
        }
    }
  });
  const double n = static_cast<double>(bary.size());
  const double n_up = static_cast<double>(std::count(up.begin(), up.end(), 1));
  const double n_down = n - n_up;
  for (std::size_t i = 0; i < R; ++i) {
    double mass = 0.0, mass_up = 0.0, mass_down = 0.0;
    for (int t = 0; t < F; ++t) {
      mass += area[t] * hits[t][i] / n;
      mass_up += area[t] * hits_up[t][i] / n_up;
      if (n_down > 0) mass_down += area[t] * (hits[t][i] - hits_up[t][i]) / n_down;
    }
    const double denom = M_PI * radii[i] * radii[i];
    prof.theta.push_back(mass / denom);
    prof.stderr_.push_back(n_down > 0 ? 0.5 * std::abs(mass_up - mass_down) / denom : 0.0);
  }
  for (std::size_t i = 0; i + 1 < R; ++i)
    prof.monotonicity_defect = std::max(prof.monotonicity_defect, prof.theta[i] - prof.theta[i + 1]);
  std::vector<double> head(prof.theta.begin(), prof.theta.begin() + std::min<std::size_t>(3, R));
  std::sort(head.begin(), head.end());
  prof.theta_zero = head[head.size() / 2];
  prof.max_stderr = *std::max_element(prof.stderr_.begin(), prof.stderr_.end());
  return prof;
}

MonotonicityVerdict check_monotonicity(const DensityProfile& profile, double slack) {
  MonotonicityVerdict v;
  v.defect = profile.monotonicity_defect;
  v.slack = slack;
  v.estimator_error = profile.max_stderr;
  v.pass = v.defect <= slack;
  return v;
}

double pullback_distance(const PullbackMetric& pb, int ta, const Eigen::Vector3d& a, int tb,
                         const Eigen::Vector3d& b) {
  const auto f = pb.field_from_point(ta, a);
  return pb.complex().trace_sleeve(f, ta, pb.local(ta, a), tb, pb.local(tb, b)).length;
}

PreimageReport find_preimages(const MeshMap& map, const PullbackMetric& pb, const Point& p, double image_tol,
                              double cluster_tol) {
  map.space->validate(p);
  const auto field = map.space->distance_field(p);
  const auto bary = stratified_barycentric(4);
  const int F = map.mesh.triangle_count();
  std::vector<double> best(F, INFINITY);
  std::vector<Eigen::Vector3d> best_b(F);
  parallel_for(F, [&](std::size_t t) {
    for (const auto& b : bary) {
      const double d = (*field)(map_point(map, static_cast<int>(t), b));
      if (d < best[t]) best[t] = d, best_b[t] = b;
    }
  });
  std::vector<int> hit;
  for (int t = 0; t < F; ++t)
    if (best[t] <= image_tol) hit.push_back(t);

  const double accept = std::min(image_tol, 1e-6 * map.space->length_scale());
  const double h = map.mesh.mesh_size();
  const DomainEval eval{map};
  std::vector<Preimage> polished(hit.size());
  std::vector<char> ok(hit.size(), 0);
  parallel_for(hit.size(), [&](std::size_t i) {
    const int t = hit[i];
    double g = 0.0;
    const Vec2 x = pattern_search([&](const Vec2& y) { return (*field)(eval(y)); },
                                  domain_point(map.mesh, t, best_b[t]), 0.25 * h, 1e-13, 4000, &g);
    if (g > accept) return;
    const auto [tt, bb] = locate_domain(map.mesh, clamp_disc(x));
    polished[i] = {tt, bb, domain_point(map.mesh, tt, bb), g};
    ok[i] = 1;
  });
  std::vector<Preimage> pts;
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (ok[i]) pts.push_back(polished[i]);

  // Union-find at pull-back distance cluster_tol.
  std::vector<int> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int i) { return parent[i] == i ? i : parent[i] = root(parent[i]); };
  const auto& tc = pb.complex();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto f = pb.field_from_point(pts[i].tri, pts[i].bary);
    const Vec2 a = pb.local(pts[i].tri, pts[i].bary);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (root(static_cast<int>(i)) == root(static_cast<int>(j))) continue;
      double d = (pts[i].domain - pts[j].domain).norm();
      if (d > 1e-12) d = tc.trace_sleeve(f, pts[i].tri, a, pts[j].tri, pb.local(pts[j].tri, pts[j].bary)).length;
      if (d <= cluster_tol) parent[root(static_cast<int>(j))] = root(static_cast<int>(i));
    }
  }
  PreimageReport rep;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (root(static_cast<int>(i)) == static_cast<int>(i)) rep.points.push_back(pts[i]);
  rep.count = static_cast<int>(rep.points.size());
  return rep;
}

int count_preimages(const MeshMap& map, const Point& p, double image_tol, double cluster_tol) {
  const PullbackMetric pb = pullback_metric(map);
  return find_preimages(map, pb, p, image_tol, cluster_tol).count;
}

InjectivityReport injectivity_report(const MeshMap& map, double delta, double epsilon, int witnesses) {
  if (!(delta > 0) || !(epsilon >= 0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  const PullbackMetric pb = pullback_metric(map, 3);
  const auto& tc = pb.complex();
  const DiscMesh& mesh = map.mesh;
  const int V = mesh.vertex_count();

  // Targets: vertices, then edge midpoints.
  struct Target {
    int tri;
    Eigen::Vector3d bary;
    Point image;
  };
  std::vector<Target> targets;
  for (int v = 0; v < V; ++v) {
    const auto [t, b] = vertex_location(mesh, v);
    targets.push_back({t, b, map.images[v]});
  }
  {
    std::vector<char> seen(tc.edge_count(), 0);
    for (int t = 0; t < mesh.triangle_count(); ++t)
      for (int c = 0; c < 3; ++c) {
        const int e = tc.tri(t).edge[c];
        if (seen[e]) continue;
        seen[e] = 1;
        Eigen::Vector3d bc = Eigen::Vector3d::Zero();
        bc(c) = bc((c + 1) % 3) = 0.5;
        const Eigen::Vector3d b = complex_to_mesh(pb, t, bc);
        targets.push_back({t, b, map_point(map, t, b)});
      }
  }
  std::vector<Vec2> target_local(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) target_local[i] = pb.local(targets[i].tri, targets[i].bary);

  struct Cand {
    double ratio;
    int s, u;
    double dx, dz;
  };
  auto less = [](const Cand& a, const Cand& b) { return std::tie(a.ratio, a.s, a.u) < std::tie(b.ratio, b.s, b.u); };
  constexpr std::size_t kPerSource = 16;
  std::vector<std::vector<Cand>> kept(V);
  std::vector<double> rest(V, INFINITY);
  std::vector<long long> scanned(V, 0);
  parallel_for(V, [&](std::size_t si) {
    const int s = static_cast<int>(si);
    const auto f = pb.field_from_vertex(s);
    auto& K = kept[s];
    for (std::size_t u = 0; u < targets.size(); ++u) {
      if (u < static_cast<std::size_t>(V) && static_cast<int>(u) <= s) continue;
      const double dz = u < static_cast<std::size_t>(V) ? f.dist[u] : tc.evaluate(f, targets[u].tri, target_local[u]);
      if (dz < delta) continue;
      ++scanned[s];
      const double dx = map.space->distance(map.images[s], targets[u].image);
      const Cand c{dx / dz, s, static_cast<int>(u), dx, dz};
      if (K.size() < kPerSource) {
        K.insert(std::upper_bound(K.begin(), K.end(), c, less), c);
      } else if (less(c, K.back())) {
        rest[s] = std::min(rest[s], K.back().ratio);
        K.pop_back();
        K.insert(std::upper_bound(K.begin(), K.end(), c, less), c);
      } else {
        rest[s] = std::min(rest[s], c.ratio);
      }
    }
  });
  InjectivityReport rep;
  rep.delta = delta;
  rep.epsilon = epsilon;
  std::vector<Cand> all;
  double bound = INFINITY;
  for (int s = 0; s < V; ++s) {
    rep.pairs_scanned += scanned[s];
    all.insert(all.end(), kept[s].begin(), kept[s].end());
    bound = std::min(bound, rest[s]);
  }
  if (all.empty()) throw Error(ErrorCode::InvalidArgument, "no pair reaches the separation delta");
  std::sort(all.begin(), all.end(), less);
  constexpr std::size_t kExact = 256;
  if (all.size() > kExact) {
    bound = std::min(bound, all[kExact].ratio);
    all.resize(kExact);
  }

  // Exact pull-back distances, one field per source.
  std::map<int, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < all.size(); ++i) by_source[all[i].s].push_back(i);
  std::vector<std::pair<int, std::vector<std::size_t>>> groups(by_source.begin(), by_source.end());
  parallel_for(groups.size(), [&](std::size_t g) {
    const int s = groups[g].first;
    const auto f = pb.field_from_vertex(s);
    const auto [ts, xs] = vertex_seat(tc, s);
    for (std::size_t i : groups[g].second) {
      Cand& c = all[i];
      c.dz = tc.trace_sleeve(f, ts, xs, targets[c.u].tri, target_local[c.u]).length;
      c.ratio = c.dz >= delta ? c.dx / c.dz : INFINITY;
    }
  });
  std::sort(all.begin(), all.end(), less);
  while (!all.empty() && !std::isfinite(all.back().ratio)) all.pop_back();
  if (all.empty()) throw Error(ErrorCode::InvalidArgument, "no pair reaches the separation delta");
  rep.pairs_exact = static_cast<int>(all.size());

  // Polish the worst pairs: slide the second point towards a preimage of f(s).
  const std::size_t W = std::min<std::size_t>(std::max(1, witnesses), all.size());
  const DomainEval eval{map};
  const double h = mesh.mesh_size();
  std::vector<InjectivityWitness> wit(W);
  parallel_for(W, [&](std::size_t i) {
    const Cand& c = all[i];
    const auto [ta, ba] = vertex_location(mesh, c.s);
    InjectivityWitness w;
    w.tri_a = ta;
    w.bary_a = ba;
    w.domain_a = mesh.vertices[c.s];
    w.tri_b = targets[c.u].tri;
    w.bary_b = targets[c.u].bary;
    w.domain_b = domain_point(mesh, w.tri_b, w.bary_b);
    w.d_image = c.dx;
    w.d_pullback = c.dz;
    w.ratio = c.ratio;
    const auto field = map.space->distance_field(map.images[c.s]);
    double g = 0.0;
    const Vec2 x = pattern_search([&](const Vec2& y) { return (*field)(eval(y)); }, w.domain_b, 0.5 * h, 1e-12,
                                  2000, &g);
    const auto [tb, bb] = locate_domain(mesh, clamp_disc(x));
    const auto f = pb.field_from_vertex(c.s);
    const auto [ts, xs] = vertex_seat(tc, c.s);
    const double dz = tc.trace_sleeve(f, ts, xs, tb, pb.local(tb, bb)).length;
    if (dz >= delta && g / dz < w.ratio) {
      w.tri_b = tb;
      w.bary_b = bb;
      w.domain_b = domain_point(mesh, tb, bb);
      w.d_image = g;
      w.d_pullback = dz;
      w.ratio = g / dz;
    }
    wit[i] = w;
  });
  std::stable_sort(wit.begin(), wit.end(), [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
  rep.witnesses = wit;
  rep.min_ratio = wit.front().ratio;
  rep.unverified_bound = bound;
  rep.embedded = rep.min_ratio >= epsilon / delta;
  return rep;
}

VertexDistance::VertexDistance(const PullbackMetric& pb, int v) : pb_(pb) {
  const auto& tc = pb.complex();
  const auto f = pb.field_from_vertex(v);
  const auto [ts, xs] = vertex_seat(tc, v);
  const int F = tc.triangle_count();
  source_.assign(F, Vec2::Zero());
  offset_.assign(F, 0.0);
  parallel_for(F, [&](std::size_t ti) {
    const int t = static_cast<int>(ti);
    const auto& c = tc.tri(t).c;
    const Vec2 centroid = (c[0] + c[1] + c[2]) / 3.0;
    try {
      const auto s = tc.trace_sleeve(f, ts, xs, t, centroid);
      const int last = static_cast<int>(s.tris.size()) - 1;
      const Vec2 src = s.to_local(last, s.path[s.path.size() - 2]);
      source_[t] = src;
      offset_[t] = s.length - (centroid - src).norm();
    } catch (const Error&) {
      int node = -1;
      tc.evaluate(f, t, centroid, &node);
      for (const auto& [n, pos] : tc.tri_nodes(t))
        if (n == node) source_[t] = pos;
      offset_[t] = f.dist[node];
    }
  });
}

double bg_radius_limit(const PullbackMetric& pb, int p) { return pb.distance_to_boundary(p); }

BishopGromovSample check_bishop_gromov(const PullbackMetric& pb, int p, double r, int samples_per_triangle) {
  if (pb.boundary_vertex(p)) throw Error(ErrorCode::InvalidArgument, "Bishop-Gromov needs an interior vertex");
  if (!(r > 0) || !(r < bg_radius_limit(pb, p))) throw Error(ErrorCode::RadiusTooLarge, "ball reaches the boundary");
  const VertexDistance dist(pb, p);
  const int m = std::max(1, static_cast<int>(std::lround(std::sqrt(std::max(1, samples_per_triangle)))));
  const auto bary = stratified_barycentric(m);
  const int F = pb.mesh().triangle_count();
  std::vector<double> part(F, 0.0);
  parallel_for(F, [&](std::size_t t) {
    int inside = 0;
    for (const auto& b : bary)
      if (dist.at(static_cast<int>(t), b) < r) ++inside;
    part[t] = pb.triangle_area(static_cast<int>(t)) * inside / static_cast<double>(bary.size());
  });
  BishopGromovSample s;
  s.vertex = p;
  s.r = r;
  s.link = pb.angle_sum(p);
  s.ball_area = std::accumulate(part.begin(), part.end(), 0.0);
  s.defect = 0.5 * r * r * s.link - s.ball_area;
  return s;
}

ComparisonReport check_cn(const PullbackMetric& pb, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  const auto& tc = pb.complex();
  const int V = pb.mesh().vertex_count();
  if (V < 3) throw Error(ErrorCode::InvalidArgument, "mesh too small");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, V - 1);
  std::vector<std::array<int, 3>> triples(samples);
  for (auto& tr : triples) {
    do {
      tr = {pick(rng), pick(rng), pick(rng)};
    } while (tr[0] == tr[1] || tr[1] == tr[2] || tr[0] == tr[2]);
  }
  std::vector<double> defect(samples, 0.0);
  parallel_for(samples, [&](std::size_t i) {
    const auto [x, y, z] = triples[i];
    const auto fy = pb.field_from_vertex(y);
    const auto [ty, py] = vertex_seat(tc, y);
    const auto [tz, pz] = vertex_seat(tc, z);
    const auto syz = tc.trace_sleeve(fy, ty, py, tz, pz);
    Vec2 pm;
    const int tm = syz.tris[tc.sleeve_point(syz, 0.5 * syz.length, &pm)];
    const auto fx = pb.field_from_vertex(x);
    const auto [tx, px] = vertex_seat(tc, x);
    const double dxy = tc.trace_sleeve(fx, tx, px, ty, py).length;
    const double dxz = tc.trace_sleeve(fx, tx, px, tz, pz).length;
    const double dxm = tc.trace_sleeve(fx, tx, px, tm, pm).length;
    const double dyz = syz.length;
    defect[i] = std::max(0.0, dxm * dxm - 0.5 * dxy * dxy - 0.5 * dxz * dxz + 0.25 * dyz * dyz);
  });
  ComparisonReport rep;
  rep.cn_samples = samples;
  rep.cn_defect_max = *std::max_element(defect.begin(), defect.end());
  return rep;
}

ComparisonReport flatness_report(const PullbackMetric& pb, double tol, int max_cones, double cone_defect,
                                 double cone_tol) {
  ComparisonReport rep;
  rep.flat_tol = tol;
  const int V = pb.mesh().vertex_count();
  for (int v = 0; v < V; ++v) {
    if (pb.boundary_vertex(v)) continue;
    rep.angle_vertices.push_back(v);
    rep.angle_defects.push_back(2 * M_PI - pb.angle_sum(v));
  }
  const std::size_t n = rep.angle_defects.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rep.angle_defects[a] < rep.angle_defects[b]; });
  // Cone set: the most negative defects beyond tol, at most max_cones of them.
  std::vector<char> cone(n, 0);
  for (std::size_t i = 0; i < n && rep.cone_vertices < max_cones; ++i) {
    if (rep.angle_defects[order[i]] >= -tol) break;
    cone[order[i]] = 1;
    ++rep.cone_vertices;
    rep.cone_defect_sum += rep.angle_defects[order[i]];
  }
  double max_abs = 0.0;
  rep.max_other_defect = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    max_abs = std::max(max_abs, std::abs(rep.angle_defects[i]));
    if (cone[i]) continue;
    rep.max_other_defect = std::max(rep.max_other_defect, rep.angle_defects[i]);
    rep.max_abs_other_defect = std::max(rep.max_abs_other_defect, std::abs(rep.angle_defects[i]));
  }
  if (!std::isfinite(rep.max_other_defect)) rep.max_other_defect = 0.0;
  rep.flat = max_abs <= tol;
  rep.rigid_cone = rep.cone_vertices >= 1 && std::abs(rep.cone_defect_sum - cone_defect) <= cone_tol &&
                   rep.max_other_defect <= tol;
  return rep;
}

double isoperimetric_ratio(const MeshMap& map, const PolygonalCurve& curve) {
  const double L = curve.length();
  if (!(L > 0)) throw Error(ErrorCode::InvalidCurve, "curve has zero length");
  return map_area(map) / (L * L / (4 * M_PI));
}

}  // namespace plateau
