#include "plateau/piecewise_flat.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "plateau/error.hpp"
#include "plateau/space.hpp"

namespace plateau {

namespace {
inline double cross(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}
inline bool near(const Vec2& a, const Vec2& b) { return (a - b).squaredNorm() < 1e-28; }
}  // namespace

TriangleComplex::TriangleComplex(int nverts, const std::vector<std::array<int, 3>>& tris,
                                 const std::vector<std::array<Vec2, 3>>& corners, int subdivisions)
    : nverts_(nverts), sub_(std::max(0, subdivisions)) {
  if (tris.size() != corners.size()) throw Error(ErrorCode::InvalidArgument, "triangle/corner count mismatch");
  tris_.resize(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    Tri& T = tris_[t];
    T.v = tris[t];
    T.c = corners[t];
    if (cross(T.c[0], T.c[1], T.c[2]) < 0) {
      std::swap(T.v[1], T.v[2]);
      std::swap(T.c[1], T.c[2]);
    }
    T.nbr = {-1, -1, -1};
    T.nbr_side = {-1, -1, -1};
  }
  build_adjacency();
}

TriangleComplex TriangleComplex::from_lengths(int nverts, const std::vector<std::array<int, 3>>& tris,
                                              const std::function<double(int, int)>& length, int subdivisions) {
  std::vector<std::array<Vec2, 3>> corners(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& v = tris[t];
    const double l01 = length(v[0], v[1]), l02 = length(v[0], v[2]), l12 = length(v[1], v[2]);
    const double A = angle_from_sides(l01, l02, l12);
    corners[t] = {Vec2(0, 0), Vec2(l01, 0), Vec2(l02 * std::cos(A), l02 * std::sin(A))};
  }
  return TriangleComplex(nverts, tris, corners, subdivisions);
}

void TriangleComplex::build_adjacency() {
  std::unordered_map<long long, int> key_to_edge;
  edges_.clear();
  edge_tris_.clear();
  for (int t = 0; t < triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = tris_[t].v[k], b = tris_[t].v[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      const long long key = static_cast<long long>(a) * (nverts_ + 1) + b;
      auto it = key_to_edge.find(key);
      int e;
      if (it == key_to_edge.end()) {
        e = static_cast<int>(edges_.size());
        key_to_edge.emplace(key, e);
        edges_.push_back({a, b});
        edge_tris_.emplace_back();
      } else {
        e = it->second;
      }
      tris_[t].edge[k] = e;
      edge_tris_[e].push_back(t);
    }
  }
  for (int e = 0; e < edge_count(); ++e) {
    if (edge_tris_[e].size() < 2) continue;
    const int t0 = edge_tris_[e][0], t1 = edge_tris_[e][1];
    int k0 = 0, k1 = 0;
    while (tris_[t0].edge[k0] != e) ++k0;
    while (tris_[t1].edge[k1] != e) ++k1;
    tris_[t0].nbr[k0] = t1;
    tris_[t0].nbr_side[k0] = k1;
    tris_[t1].nbr[k1] = t0;
    tris_[t1].nbr_side[k1] = k0;
  }
  boundary_vertex_.assign(nverts_, false);
  for (int e = 0; e < edge_count(); ++e)
    if (edge_tris_[e].size() < 2) boundary_vertex_[edges_[e].first] = boundary_vertex_[edges_[e].second] = true;
  incident_.assign(nverts_, {});
  for (int t = 0; t < triangle_count(); ++t)
    for (int k = 0; k < 3; ++k) incident_[tris_[t].v[k]].push_back({t, k});

  tri_nodes_.assign(triangle_count(), {});
  node_tris_.assign(node_count(), {});
  for (int t = 0; t < triangle_count(); ++t) {
    const Tri& T = tris_[t];
    auto& nodes = tri_nodes_[t];
    for (int k = 0; k < 3; ++k) nodes.push_back({T.v[k], T.c[k]});
    for (int k = 0; k < 3; ++k) {
      const int e = T.edge[k];
      const bool forward = T.v[k] == edges_[e].first;
      const Vec2 from = forward ? T.c[k] : T.c[(k + 1) % 3];
      const Vec2 to = forward ? T.c[(k + 1) % 3] : T.c[k];
      for (int j = 0; j < sub_; ++j) {
        const double f = (j + 1.0) / (sub_ + 1.0);
        nodes.push_back({edge_node(e, j), from + f * (to - from)});
      }
    }
    for (const auto& [n, pos] : nodes) node_tris_[n].push_back(t);
  }
}

double TriangleComplex::side_length(int t, int k) const {
  return (tris_[t].c[(k + 1) % 3] - tris_[t].c[k]).norm();
}

double TriangleComplex::area(int t) const {
  return heron_area(side_length(t, 0), side_length(t, 1), side_length(t, 2));
}

double TriangleComplex::angle(int t, int k) const {
  const double a = side_length(t, k), b = side_length(t, (k + 2) % 3), c = side_length(t, (k + 1) % 3);
  return angle_from_sides(a, b, c);
}

double TriangleComplex::angle_sum(int v) const {
  double s = 0.0;
  for (const auto& [t, k] : incident_[v]) s += angle(t, k);
  return s;
}

TriangleComplex::Field TriangleComplex::dijkstra(const std::vector<std::pair<int, double>>& seeds,
                                                 const std::vector<int>& seed_tris) const {
  Field f;
  const int N = node_count();
  f.dist.assign(N, INFINITY);
  f.pred_node.assign(N, -1);
  f.pred_tri.assign(N, -1);
  f.seed_tri.assign(N, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& [n, d] = seeds[i];
    if (d < f.dist[n]) {
      f.dist[n] = d;
      f.seed_tri[n] = i < seed_tris.size() ? seed_tris[i] : -1;
      pq.push({d, n});
    }
  }
  while (!pq.empty()) {
    const auto [d, n] = pq.top();
    pq.pop();
    if (d > f.dist[n]) continue;
    for (int t : node_tris_[n]) {
      const auto& nodes = tri_nodes_[t];
      Vec2 pn;
      for (const auto& [m, pos] : nodes)
        if (m == n) pn = pos;
      for (const auto& [m, pos] : nodes) {
        if (m == n) continue;
        const double nd = d + (pos - pn).norm();
        if (nd < f.dist[m]) {
          f.dist[m] = nd;
          f.pred_node[m] = n;
          f.pred_tri[m] = t;
          f.seed_tri[m] = -1;
          pq.push({nd, m});
        }
      }
    }
  }
  return f;
}

std::vector<std::pair<int, double>> TriangleComplex::point_seeds(int t, const Vec2& x) const {
  std::vector<std::pair<int, double>> out;
  for (const auto& [n, pos] : tri_nodes_[t]) out.push_back({n, (x - pos).norm()});
  return out;
}

double TriangleComplex::evaluate(const Field& f, int t, const Vec2& x, int* best_node) const {
  double best = INFINITY;
  int bn = -1;
  for (const auto& [n, pos] : tri_nodes_[t]) {
    const double d = f.dist[n] + (x - pos).norm();
    if (d < best) best = d, bn = n;
  }
  if (best_node) *best_node = bn;
  return best;
}

Eigen::Vector3d TriangleComplex::barycentric(int t, const Vec2& x) const {
  const auto& c = tris_[t].c;
  const double A = cross(c[0], c[1], c[2]);
  if (A == 0) return Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3);
  return Eigen::Vector3d(cross(x, c[1], c[2]) / A, cross(c[0], x, c[2]) / A, cross(c[0], c[1], x) / A);
}

std::vector<int> TriangleComplex::fan(int v, int t0, int t1, int dir) const {
  std::vector<int> out;
  int t = t0;
  for (int guard = 0; guard < static_cast<int>(incident_[v].size()) + 1; ++guard) {
    const Tri& T = tris_[t];
    int k = 0;
    while (T.v[k] != v) ++k;
    const int side = dir > 0 ? k : (k + 2) % 3;
    const int nt = T.nbr[side];
    if (nt < 0 || nt == t0) return {};
    out.push_back(nt);
    if (nt == t1) return out;
    t = nt;
  }
  return {};
}

TriangleComplex::Sleeve TriangleComplex::pull_string(const std::vector<int>& tris, const Vec2& a,
                                                     const Vec2& b) const {
  Sleeve s;
  // Drop repeats and immediate backtracks A B A -> A.
  for (int t : tris) {
    if (!s.tris.empty() && s.tris.back() == t) continue;
    if (s.tris.size() >= 2 && s.tris[s.tris.size() - 2] == t) {
      s.tris.pop_back();
      continue;
    }
    s.tris.push_back(t);
  }
  const std::size_t m = s.tris.size();
  s.rot.assign(m, Eigen::Matrix2d::Identity());
  s.shift.assign(m, Vec2::Zero());
  std::vector<std::pair<Vec2, Vec2>> portals;  // (left, right)
  const Vec2 start = a;
  portals.push_back({start, start});
  for (std::size_t i = 1; i < m; ++i) {
    const Tri& P = tris_[s.tris[i - 1]];
    int k = 0;
    while (k < 3 && P.nbr[k] != s.tris[i]) ++k;
    if (k == 3) throw Error(ErrorCode::GeodesicNotResolved, "sleeve triangles are not adjacent");
    const int kk = P.nbr_side[k];
    const Tri& C = tris_[s.tris[i]];
    const Vec2 Pd = s.to_developed(static_cast<int>(i - 1), P.c[k]);
    const Vec2 Qd = s.to_developed(static_cast<int>(i - 1), P.c[(k + 1) % 3]);
    const Vec2 cp = C.c[(kk + 1) % 3], cq = C.c[kk];
    const Vec2 u = cq - cp, w = Qd - Pd;
    const double ang = std::atan2(w.y(), w.x()) - std::atan2(u.y(), u.x());
    Eigen::Matrix2d R;
    R << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    s.rot[i] = R;
    s.shift[i] = Pd - R * cp;
    portals.push_back({Qd, Pd});
  }
  const Vec2 end = s.to_developed(static_cast<int>(m - 1), b);
  portals.push_back({end, end});
  // An endpoint sitting on a corner shared by a run of triangles: start from
  // the last triangle of the leading run around that vertex, end at the first
  // triangle of the trailing run.
  auto corner_vertex = [&](int t, const Vec2& x) {
    for (int c = 0; c < 3; ++c)
      if ((tris_[t].c[c] - x).squaredNorm() < 1e-24) return tris_[t].v[c];
    return -1;
  };
  auto holds = [&](std::size_t i, int v) {
    const auto& T = tris_[s.tris[i]].v;
    return T[0] == v || T[1] == v || T[2] == v;
  };
  std::size_t first = 0, last = m - 1;
  const int va = corner_vertex(s.tris[0], a), vb = corner_vertex(s.tris[m - 1], b);
  if (va >= 0)
    while (first + 1 < m && holds(first + 1, va)) ++first;
  if (vb >= 0)
    while (last > first && holds(last - 1, vb)) --last;
  if (first > 0 || last + 1 < m) {
    const std::vector<int> sub(s.tris.begin() + first, s.tris.begin() + last + 1);
    auto corner_of = [&](int t, int v) {
      for (int c = 0; c < 3; ++c)
        if (tris_[t].v[c] == v) return tris_[t].c[c];
      return Vec2(0, 0);
    };
    return pull_string(sub, first > 0 ? corner_of(sub.front(), va) : a, last + 1 < m ? corner_of(sub.back(), vb) : b);
  }

  // Funnel (string pulling) over the portal list.
  std::vector<Vec2> path{start};
  Vec2 apex = start, left = portals[0].first, right = portals[0].second;
  std::size_t apex_i = 0, left_i = 0, right_i = 0;
  for (std::size_t i = 1; i < portals.size(); ++i) {
    const Vec2 L = portals[i].first, R = portals[i].second;
    if (cross(apex, right, R) >= 0) {
      if (near(apex, right) || near(apex, R) || cross(apex, left, R) < 0) {
        right = R;
        right_i = i;
      } else {
        path.push_back(left);
        apex = left;
        apex_i = left_i;
        right = left = apex;
        right_i = left_i = apex_i;
        i = apex_i;
        continue;
      }
    }
    if (cross(apex, left, L) <= 0) {
      if (near(apex, left) || near(apex, L) || cross(apex, right, L) > 0) {
        left = L;
        left_i = i;
      } else {
        path.push_back(right);
        apex = right;
        apex_i = right_i;
        right = left = apex;
        right_i = left_i = apex_i;
        i = apex_i;
        continue;
      }
    }
  }
  if (!near(path.back(), end)) path.push_back(end);
  // Drop interior points where the string runs straight through a vertex.
  s.path.clear();
  for (const Vec2& q : path) {
    if (!s.path.empty() && (q - s.path.back()).squaredNorm() < 1e-28) continue;
    if (s.path.size() >= 2) {
      const Vec2& o = s.path[s.path.size() - 2];
      const Vec2& m = s.path.back();
      const Vec2 u = m - o, w = q - m;
      if (std::abs(u.x() * w.y() - u.y() * w.x()) <= 1e-12 * u.norm() * w.norm() && u.dot(w) > 0) s.path.pop_back();
    }
    s.path.push_back(q);
  }
  path = s.path;
  s.start_local = a;
  s.end_local = b;
  s.length = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) s.length += (path[i] - path[i - 1]).norm();
  return s;
}

int TriangleComplex::sleeve_point(const Sleeve& s, double arc, Vec2* local) const {
  // Point on the path at the given arc length.
  double rest = arc;
  Vec2 dev = s.path.back();
  for (std::size_t k = 1; k < s.path.size(); ++k) {
    const double seg = (s.path[k] - s.path[k - 1]).norm();
    if (rest <= seg) {
      dev = s.path[k - 1] + (seg > 0 ? rest / seg : 0.0) * (s.path[k] - s.path[k - 1]);
      break;
    }
    rest -= seg;
  }
  // The path crosses the portals in order; find the last one crossed before arc.
  int idx = 0;
  std::size_t j = 1;
  double before = 0.0;
  for (std::size_t i = 1; i < s.tris.size(); ++i) {
    const Tri& P = tris_[s.tris[i - 1]];
    int k = 0;
    while (k < 3 && P.nbr[k] != s.tris[i]) ++k;
    const Vec2 A = s.to_developed(static_cast<int>(i - 1), P.c[k]);
    const Vec2 B = s.to_developed(static_cast<int>(i - 1), P.c[(k + 1) % 3]);
    bool crossed = false;
    double at = 0.0;
    for (; j < s.path.size(); ++j) {
      const Vec2 p0 = s.path[j - 1], e = s.path[j] - p0, f = B - A;
      const double seg = e.norm();
      const double den = e.x() * f.y() - e.y() * f.x();
      if (std::abs(den) > 1e-300) {
        const Vec2 w = A - p0;
        const double tp = (w.x() * f.y() - w.y() * f.x()) / den;
        const double up = (w.x() * e.y() - w.y() * e.x()) / den;
        if (tp >= -1e-9 && tp <= 1 + 1e-9 && up >= -1e-9 && up <= 1 + 1e-9) {
          crossed = true;
          at = before + std::clamp(tp, 0.0, 1.0) * seg;
          break;
        }
      }
      before += seg;
    }
    if (!crossed || at > arc) break;
    idx = static_cast<int>(i);
  }
  // Guard against missed crossings: prefer the nearest triangle in sleeve order that holds the point.
  const double scale = std::max(1.0, s.length);
  auto slack = [&](int i) {
    return barycentric(s.tris[i], s.to_local(i, dev)).minCoeff();
  };
  if (slack(idx) < -1e-9 * scale) {
    int best = idx;
    double best_slack = slack(idx);
    for (int off = 1; off < static_cast<int>(s.tris.size()); ++off) {
      for (int i : {idx - off, idx + off}) {
        if (i < 0 || i >= static_cast<int>(s.tris.size())) continue;
        const double v = slack(i);
        if (v > best_slack) best_slack = v, best = i;
      }
      if (best_slack >= -1e-9 * scale) break;
    }
    idx = best;
  }
  if (local) *local = s.to_local(idx, dev);
  return idx;
}

int TriangleComplex::sleeve_locate(const Sleeve& s, const Vec2& dev) const {
  int best = 0;
  double best_min = -INFINITY;
  for (std::size_t i = 0; i < s.tris.size(); ++i) {
    const Eigen::Vector3d b = barycentric(s.tris[i], s.to_local(static_cast<int>(i), dev));
    const double mn = b.minCoeff();
    if (mn >= -1e-12) return static_cast<int>(i);
    if (mn > best_min) best_min = mn, best = static_cast<int>(i);
  }
  return best;
}

TriangleComplex::Sleeve TriangleComplex::trace_sleeve(const Field& f, int t_src, const Vec2& src, int t_dst,
                                                      const Vec2& dst) const {
  if (t_src == t_dst) return pull_string({t_src}, src, dst);
  int n = -1;
  evaluate(f, t_dst, dst, &n);
  // Back-trace: (triangle, node where we leave it).
  std::vector<std::pair<int, int>> hops;
  hops.push_back({t_dst, -1});
  int guard = 0;
  while (n >= 0 && f.pred_node[n] >= 0 && guard++ < node_count()) {
    hops.push_back({f.pred_tri[n], n});
    n = f.pred_node[n];
  }
  hops.push_back({t_src, n});
  std::reverse(hops.begin(), hops.end());
  // hops[i] = (triangle, node shared with hops[i+1]) after reversal shift.
  std::vector<int> tris;
  std::vector<int> junction_node;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    const int t = hops[i].first;
    if (tris.empty() || tris.back() != t) {
      if (!tris.empty()) junction_node.push_back(hops[i - 1].second >= 0 ? hops[i - 1].second : -1);
      tris.push_back(t);
    }
  }
  // Expand junctions that are not side-adjacent into vertex fans; both turning
  // directions are candidates.
  struct Junction {
    std::vector<int> fan[2];
  };
  std::vector<Junction> junctions(tris.size() > 0 ? tris.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < tris.size(); ++i) {
    const int A = tris[i], B = tris[i + 1];
    const Tri& TA = tris_[A];
    if (TA.nbr[0] == B || TA.nbr[1] == B || TA.nbr[2] == B) {
      junctions[i].fan[0] = junctions[i].fan[1] = {B};
      continue;
    }
    int v = junction_node[i];
    if (v < 0 || v >= nverts_) {
      // Shared vertex by inspection.
      v = -1;
      for (int a : TA.v)
        for (int b : tris_[B].v)
          if (a == b) v = a;
    }
    if (v < 0) throw Error(ErrorCode::GeodesicNotResolved, "disconnected sleeve");
    junctions[i].fan[0] = fan(v, A, B, +1);
    junctions[i].fan[1] = fan(v, A, B, -1);
    if (junctions[i].fan[0].empty() && junctions[i].fan[1].empty())
      throw Error(ErrorCode::GeodesicNotResolved, "no fan around a path vertex");
  }
  std::vector<int> choice(junctions.size(), 0);
  for (std::size_t i = 0; i < junctions.size(); ++i) {
    const auto& J = junctions[i];
    if (J.fan[0].empty() || (!J.fan[1].empty() && J.fan[1].size() < J.fan[0].size())) choice[i] = 1;
  }
  auto assemble = [&]() {
    std::vector<int> seq{tris.front()};
    for (std::size_t i = 0; i < junctions.size(); ++i) {
      const auto& F = junctions[i].fan[choice[i]];
      seq.insert(seq.end(), F.begin(), F.end());
    }
    return seq;
  };
  Sleeve best = pull_string(assemble(), src, dst);
  for (int round = 0; round < 3; ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < junctions.size(); ++i) {
      const auto& J = junctions[i];
      if (J.fan[0] == J.fan[1] || J.fan[1 - choice[i]].empty()) continue;
      choice[i] = 1 - choice[i];
      Sleeve s = pull_string(assemble(), src, dst);
      if (s.length < best.length - 1e-15) {
        best = std::move(s);
        improved = true;
      } else {
        choice[i] = 1 - choice[i];
      }
    }
    if (!improved) break;
  }
  return straighten(std::move(best));
}

TriangleComplex::Sleeve TriangleComplex::straighten(Sleeve s) const {
  const int guard_max = 4 * static_cast<int>(s.tris.size()) + 8;
  for (int guard = 0; guard < guard_max; ++guard) {
    bool improved = false;
    for (std::size_t p = 1; p + 1 < s.path.size() && !improved; ++p) {
      // Vertex at this bend, and a sleeve triangle holding it.
      int v = -1, at = -1;
      for (std::size_t i = 0; i < s.tris.size() && v < 0; ++i)
        for (int c = 0; c < 3; ++c)
          if ((s.to_developed(static_cast<int>(i), tris_[s.tris[i]].c[c]) - s.path[p]).squaredNorm() < 1e-20) {
            v = tris_[s.tris[i]].v[c];
            at = static_cast<int>(i);
            break;
          }
      if (v < 0) continue;
      auto holds = [&](int i) {
        const auto& T = tris_[s.tris[i]].v;
        return T[0] == v || T[1] == v || T[2] == v;
      };
      int lo = at, hi = at;
      while (lo > 0 && holds(lo - 1)) --lo;
      while (hi + 1 < static_cast<int>(s.tris.size()) && holds(hi + 1)) ++hi;
      if (lo == hi) continue;
      const std::vector<int> current(s.tris.begin() + lo + 1, s.tris.begin() + hi + 1);
      for (int dir : {+1, -1}) {
        const auto other = fan(v, s.tris[lo], s.tris[hi], dir);
        if (other.empty() || other == current) continue;
        std::vector<int> seq(s.tris.begin(), s.tris.begin() + lo + 1);
        seq.insert(seq.end(), other.begin(), other.end());
        seq.insert(seq.end(), s.tris.begin() + hi + 1, s.tris.end());
        Sleeve alt = pull_string(seq, s.start_local, s.end_local);
        if (alt.length < s.length - 1e-14) {
          s = std::move(alt);
          improved = true;
          break;
        }
      }
    }
    if (!improved) break;
  }
  if (s.path.size() > 2) {
    Sleeve alt;
    if (walk_straight(s, alt) && alt.length < s.length - 1e-14) return alt;
  }
  return s;
}

bool TriangleComplex::walk_straight(const Sleeve& s, Sleeve& out) const {
  for (double shift : {0.0, 1e-7, -1e-7})
    if (walk_line(s, shift, out)) return true;
  return false;
}

bool TriangleComplex::walk_line(const Sleeve& s, double offset, Sleeve& out) const {
  const Vec2 a = s.path.front(), b = s.path.back();
  const double total = (b - a).norm();
  if (!(total > 0)) return false;
  const Vec2 dir_dev = (b - a) / total;
  const double eps = 1e-9 * total;
  // Start just off the first endpoint, in the sleeve triangle holding that point.
  const Vec2 perp(-dir_dev.y(), dir_dev.x());
  const Vec2 q = a + eps * dir_dev + offset * total * perp;
  // Start in the first sleeve triangle; overlapping developments rule out locating by position.
  int t = s.tris[0];
  Eigen::Matrix2d rot = s.rot[0];
  Vec2 shift = s.shift[0];
  if (barycentric(t, s.to_local(0, q)).minCoeff() < -1e-9) {
    const Tri& T0 = tris_[s.tris[0]];
    int v = -1;
    for (int c = 0; c < 3; ++c)
      if ((T0.c[c] - s.start_local).norm() < 1e-12) v = T0.v[c];
    if (v < 0) {
      // Start on a side: step across it.
      bool stepped = false;
      for (int side = 0; side < 3 && !stepped; ++side) {
        const Vec2 P = T0.c[side], Q = T0.c[(side + 1) % 3];
        const double off = std::abs(cross(P, Q, s.start_local)) / std::max((Q - P).norm(), 1e-300);
        if (off > 1e-12 * std::max(1.0, total) || T0.nbr[side] < 0) continue;
        const int nt = T0.nbr[side], kk = T0.nbr_side[side];
        const Tri& C = tris_[nt];
        const Vec2 Pd = s.rot[0] * P + s.shift[0], Qd = s.rot[0] * Q + s.shift[0];
        const Vec2 cp = C.c[(kk + 1) % 3], cq = C.c[kk];
        const double ang = std::atan2((Qd - Pd).y(), (Qd - Pd).x()) - std::atan2((cq - cp).y(), (cq - cp).x());
        Eigen::Matrix2d Rn;
        Rn << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
        const Vec2 shn = Pd - Rn * cp;
        if (barycentric(nt, Rn.transpose() * (q - shn)).minCoeff() >= -1e-9) {
          t = nt;
          rot = Rn;
          shift = shn;
          stepped = true;
        }
      }
      if (!stepped) return false;
    }
  }
  if (barycentric(t, rot.transpose() * (q - shift)).minCoeff() < -1e-9) {
    // Start on a vertex: unfold its star from the first triangle until q is covered.
    const Tri& T0 = tris_[s.tris[0]];
    int v = -1;
    for (int c = 0; c < 3; ++c)
      if ((T0.c[c] - s.start_local).norm() < 1e-12) v = T0.v[c];
    if (v < 0) return false;
    bool found = false;
    for (int dir : {+1, -1}) {
      int cur = s.tris[0];
      Eigen::Matrix2d R = s.rot[0];
      Vec2 sh = s.shift[0];
      for (std::size_t step = 0; step < incident_[v].size() && !found; ++step) {
        const Tri& T = tris_[cur];
        int k = 0;
        while (T.v[k] != v) ++k;
        const int side = dir > 0 ? k : (k + 2) % 3;
        const int nt = T.nbr[side];
        if (nt < 0) break;
        const int kk = T.nbr_side[side];
        const Tri& C = tris_[nt];
        const Vec2 Pd = R * T.c[side] + sh, Qd = R * T.c[(side + 1) % 3] + sh;
        const Vec2 cp = C.c[(kk + 1) % 3], cq = C.c[kk];
        const double ang = std::atan2((Qd - Pd).y(), (Qd - Pd).x()) - std::atan2((cq - cp).y(), (cq - cp).x());
        Eigen::Matrix2d Rn;
        Rn << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
        const Vec2 shn = Pd - Rn * cp;
        cur = nt;
        R = Rn;
        sh = shn;
        if (barycentric(nt, Rn.transpose() * (q - shn)).minCoeff() >= -1e-9) {
          found = true;
          t = nt;
          rot = Rn;
          shift = shn;
        }
      }
      if (found) break;
    }
    if (!found) return false;
  }
  Vec2 x = rot.transpose() * (q - shift);
  Vec2 d = rot.transpose() * dir_dev;
  const Vec2 start_local = rot.transpose() * (a - shift);
  // Overlapping developments can put q in a triangle that does not hold the start.
  if (barycentric(t, start_local).minCoeff() < -1e-9) return false;
  double remaining = total - eps;
  std::vector<int> seq{t};
  for (int guard = 0; guard < 4 * triangle_count(); ++guard) {
    const Tri& T = tris_[t];
    // Exit side: smallest positive ray parameter.
    int exit_side = -1;
    double exit_t = INFINITY;
    for (int k = 0; k < 3; ++k) {
      const Vec2 p0 = T.c[k], e = T.c[(k + 1) % 3] - p0;
      const double den = d.x() * e.y() - d.y() * e.x();
      if (std::abs(den) < 1e-300) continue;
      const Vec2 w = p0 - x;
      const double tr = (w.x() * e.y() - w.y() * e.x()) / den;
      const double u = (w.x() * d.y() - w.y() * d.x()) / den;
      if (tr > 1e-15 && u >= -1e-12 && u <= 1 + 1e-12 && tr < exit_t) exit_t = tr, exit_side = k;
    }
    if (exit_side < 0 || exit_t >= remaining) {
      const Vec2 end = x + remaining * d;
      const double tol = 1e-8 * std::max(1.0, total) + 2 * std::abs(offset) * total;
      if (barycentric(t, end).minCoeff() < -1e-6) return false;
      // The walk must land on the sleeve's end point.
      const int last = static_cast<int>(s.tris.size()) - 1;
      if (t == s.tris[last] && (end - s.end_local).norm() < tol) {
        out = pull_string(seq, start_local, s.end_local);
        return true;
      }
      for (int c = 0; c < 3; ++c)
        if ((s.end_local - tris_[s.tris[last]].c[c]).norm() < 1e-12)
          for (int cc = 0; cc < 3; ++cc)
            if (T.v[cc] == tris_[s.tris[last]].v[c] && (end - T.c[cc]).norm() < tol) {
              out = pull_string(seq, start_local, T.c[cc]);
              return true;
            }
      return false;
    }
    const int nt = T.nbr[exit_side];
    if (nt < 0) return false;
    const int kk = T.nbr_side[exit_side];
    const Tri& C = tris_[nt];
    // Rigid map from T's frame to C's frame along the shared side.
    const Vec2 P = T.c[exit_side], Q = T.c[(exit_side + 1) % 3];
    const Vec2 cp = C.c[(kk + 1) % 3], cq = C.c[kk];
    const double ang = std::atan2((cq - cp).y(), (cq - cp).x()) - std::atan2((Q - P).y(), (Q - P).x());
    Eigen::Matrix2d R;
    R << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    x = R * (x + exit_t * d - P) + cp;
    d = R * d;
    remaining -= exit_t;
    t = nt;
    seq.push_back(t);
  }
  return false;
}

}  // namespace plateau
