#include "plateau/flat_complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace plateau {

namespace {
struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};
}  // namespace

FlatComplex::FlatComplex(std::vector<std::vector<Vec2>> charts, std::vector<Gluing> gluings, int subdivisions)
    : charts_(std::move(charts)), gluings_(std::move(gluings)) {
  if (charts_.empty()) throw Error(ErrorCode::InvalidArgument, "complex needs at least one chart");
  std::vector<int> base(charts_.size() + 1, 0);
  for (std::size_t c = 0; c < charts_.size(); ++c) {
    const auto& P = charts_[c];
    if (P.size() < 3) throw Error(ErrorCode::InvalidArgument, "chart needs three corners");
    double A = 0;
    for (std::size_t i = 0; i < P.size(); ++i) {
      const Vec2 &a = P[i], &b = P[(i + 1) % P.size()], &d = P[(i + 2) % P.size()];
      const double turn = (b - a).x() * (d - b).y() - (b - a).y() * (d - b).x();
      if (turn < -1e-12) throw Error(ErrorCode::InvalidArgument, "chart " + std::to_string(c) + " is not convex CCW");
      A += a.x() * b.y() - a.y() * b.x();
    }
    chart_area_.push_back(0.5 * A);
    base[c + 1] = base[c] + static_cast<int>(P.size());
  }
  UnionFind uf(base.back());
  for (const Gluing& g : gluings_) {
    if (g.chart_a < 0 || g.chart_a >= chart_count() || g.chart_b < 0 || g.chart_b >= chart_count())
      throw Error(ErrorCode::InvalidChart, "gluing references a missing chart");
    const auto& A = charts_[g.chart_a];
    const auto& B = charts_[g.chart_b];
    const int na = static_cast<int>(A.size()), nb = static_cast<int>(B.size());
    if (g.edge_a < 0 || g.edge_a >= na || g.edge_b < 0 || g.edge_b >= nb)
      throw Error(ErrorCode::InvalidArgument, "gluing references a missing edge");
    const double la = (A[(g.edge_a + 1) % na] - A[g.edge_a]).norm();
    const double lb = (B[(g.edge_b + 1) % nb] - B[g.edge_b]).norm();
    if (std::abs(la - lb) > 1e-9 * std::max(1.0, la))
      throw Error(ErrorCode::InvalidArgument, "gluing is not length preserving");
    uf.unite(base[g.chart_a] + g.edge_a, base[g.chart_b] + (g.edge_b + 1) % nb);
    uf.unite(base[g.chart_a] + (g.edge_a + 1) % na, base[g.chart_b] + g.edge_b);
  }
  std::vector<int> remap(base.back(), -1);
  int nv = 0;
  corner_vertex_.resize(charts_.size());
  for (std::size_t c = 0; c < charts_.size(); ++c)
    for (std::size_t i = 0; i < charts_[c].size(); ++i) {
      const int root = uf.find(base[c] + static_cast<int>(i));
      if (remap[root] < 0) remap[root] = nv++;
      corner_vertex_[c].push_back(remap[root]);
    }
  std::vector<std::array<int, 3>> tris;
  std::vector<std::array<Vec2, 3>> corners;
  chart_tris_.resize(charts_.size());
  for (std::size_t c = 0; c < charts_.size(); ++c) {
    const auto& P = charts_[c];
    for (std::size_t i = 1; i + 1 < P.size(); ++i) {
      chart_tris_[c].push_back(static_cast<int>(tris.size()));
      tri_chart_.push_back(static_cast<int>(c));
      tris.push_back({corner_vertex_[c][0], corner_vertex_[c][i], corner_vertex_[c][i + 1]});
      corners.push_back({P[0], P[i], P[i + 1]});
    }
  }
  tc_ = TriangleComplex(nv, tris, corners, subdivisions);
  double diam = 0;
  for (const auto& P : charts_)
    for (const auto& a : P)
      for (const auto& b : P) diam = std::max(diam, (a - b).norm());
  set_length_scale(diam * std::max<std::size_t>(1, charts_.size()));
}

std::string FlatComplex::describe() const {
  std::ostringstream os;
  os << "PolyhedralComplex(" << charts_.size() << " charts, " << gluings_.size() << " gluings)";
  return os.str();
}

std::pair<int, Vec2> FlatComplex::locate(const Point& p) const {
  const Vec2 x = p.xy();
  int best = chart_tris_[p.chart].front();
  double best_min = -INFINITY;
  for (int t : chart_tris_[p.chart]) {
    const double mn = tc_.barycentric(t, x).minCoeff();
    if (mn > best_min) best_min = mn, best = t;
  }
  return {best, x};
}

void FlatComplex::validate(const Point& p) const {
  if (p.chart < 0 || p.chart >= chart_count()) throw Error(ErrorCode::InvalidChart, "missing chart in " + p.str());
  if (p.dim() != 2 || !p.coords.allFinite()) throw Error(ErrorCode::InvalidChart, "bad coordinates " + p.str());
  const auto& P = charts_[p.chart];
  const Vec2 x = p.xy();
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Vec2 &a = P[i], &b = P[(i + 1) % P.size()];
    const double s = ((b - a).x() * (x - a).y() - (b - a).y() * (x - a).x()) / std::max((b - a).norm(), 1e-300);
    if (s < -1e-9 * std::max(1.0, length_scale()))
      throw Error(ErrorCode::InvalidChart, "point outside its chart " + p.str());
  }
}

TriangleComplex::Sleeve FlatComplex::sleeve(const Point& p, const Point& q) const {
  validate(p);
  validate(q);
  const auto [tp, xp] = locate(p);
  const auto [tq, xq] = locate(q);
  if (p.chart == q.chart) {
    TriangleComplex::Sleeve s;
    s.tris = {tp};
    s.rot = {Eigen::Matrix2d::Identity()};
    s.shift = {Vec2::Zero()};
    s.path = {xp, xq};
    s.length = (xp - xq).norm();
    return s;
  }
  const auto field = tc_.dijkstra(tc_.point_seeds(tp, xp));
  const double graph = tc_.evaluate(field, tq, xq);
  if (!std::isfinite(graph)) throw Error(ErrorCode::GeodesicNotResolved, "points lie in different components");
  return tc_.trace_sleeve(field, tp, xp, tq, xq);
}

double FlatComplex::distance(const Point& p, const Point& q) const { return sleeve(p, q).length; }

Point FlatComplex::geodesic_point(const Point& p, const Point& q, double t) const {
  if (t <= 0) return p;
  if (t >= 1) return q;
  const auto s = sleeve(p, q);
  if (s.tris.size() == 1 && p.chart == q.chart) return Point::from(p.chart, (1 - t) * p.xy() + t * q.xy());
  Vec2 x;
  const int i = tc_.sleeve_point(s, t * s.length, &x);
  return Point::from(tri_chart_[s.tris[i]], x);
}

double FlatComplex::link_length(const Point& v) const {
  validate(v);
  const Vec2 x = v.xy();
  const auto& P = charts_[v.chart];
  const double tol = 1e-9 * std::max(1.0, length_scale());
  for (std::size_t i = 0; i < P.size(); ++i)
    if ((P[i] - x).norm() <= tol) return tc_.angle_sum(corner_vertex_[v.chart][i]);
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Vec2 &a = P[i], &b = P[(i + 1) % P.size()];
    const double s = std::abs((b - a).x() * (x - a).y() - (b - a).y() * (x - a).x()) / (b - a).norm();
    if (s <= tol) {
      const int va = corner_vertex_[v.chart][i], vb = corner_vertex_[v.chart][(i + 1) % P.size()];
      int shared = 0;
      for (const auto& [t, k] : tc_.incident(va))
        for (int j = 0; j < 3; ++j) shared += tc_.tri(t).v[j] == vb && tri_chart_[t] != v.chart ? 1 : 0;
      return shared ? 2 * M_PI : M_PI;
    }
  }
  return 2 * M_PI;
}

std::vector<Point> FlatComplex::singular_vertices() const {
  std::vector<Point> out;
  std::vector<bool> seen(tc_.vertex_count(), false);
  for (int c = 0; c < chart_count(); ++c)
    for (std::size_t i = 0; i < charts_[c].size(); ++i) {
      const int v = corner_vertex_[c][i];
      if (seen[v]) continue;
      seen[v] = true;
      if (tc_.boundary_vertex(v)) continue;
      if (std::abs(tc_.angle_sum(v) - 2 * M_PI) > 1e-9) out.push_back(Point::from(c, charts_[c][i]));
    }
  return out;
}

Point FlatComplex::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double total = std::accumulate(chart_area_.begin(), chart_area_.end(), 0.0);
  double pick = u(rng) * total;
  int c = 0;
  while (c + 1 < chart_count() && pick > chart_area_[c]) pick -= chart_area_[c++];
  std::vector<double> ta;
  for (int t : chart_tris_[c]) ta.push_back(tc_.area(t));
  double tp = u(rng) * std::accumulate(ta.begin(), ta.end(), 0.0);
  std::size_t k = 0;
  while (k + 1 < ta.size() && tp > ta[k]) tp -= ta[k++];
  const auto& T = tc_.tri(chart_tris_[c][k]);
  double a = u(rng), b = u(rng);
  if (a + b > 1) a = 1 - a, b = 1 - b;
  return Point::from(c, T.c[0] + a * (T.c[1] - T.c[0]) + b * (T.c[2] - T.c[0]));
}

}  // namespace plateau
