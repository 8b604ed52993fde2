#include "plateau/cone_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace plateau {

namespace {
constexpr double kPieceMax = M_PI / 2;
constexpr double kVertexEps = 1e-12;
}  // namespace

ConeSpace::ConeSpace(SpaceKind kind, double alpha, std::vector<Arc> arcs, int nverts)
    : kind_(kind), alpha_(alpha), arcs_(std::move(arcs)), nverts_(nverts) {
  for (int a = 0; a < static_cast<int>(arcs_.size()); ++a) {
    const double len = arcs_[a].len;
    const int m = std::max(1, static_cast<int>(std::ceil(len / kPieceMax - 1e-9)));
    for (int k = 0; k < m; ++k) {
      const double s0 = len * k / m, s1 = (k + 1 == m) ? len : len * (k + 1) / m;
      pieces_.push_back({a, s0, s1});
    }
  }
  vd_.assign(nverts_, std::vector<double>(nverts_, INFINITY));
  next_.assign(nverts_, std::vector<Hop>(nverts_));
  for (int v = 0; v < nverts_; ++v) vd_[v][v] = 0.0;
  for (int a = 0; a < static_cast<int>(arcs_.size()); ++a) {
    const Arc& e = arcs_[a];
    if (e.v0 == e.v1) continue;
    if (e.len < vd_[e.v0][e.v1]) {
      vd_[e.v0][e.v1] = vd_[e.v1][e.v0] = e.len;
      next_[e.v0][e.v1] = {a, true};
      next_[e.v1][e.v0] = {a, false};
    }
  }
  for (int k = 0; k < nverts_; ++k)
    for (int i = 0; i < nverts_; ++i)
      for (int j = 0; j < nverts_; ++j)
        if (vd_[i][k] + vd_[k][j] < vd_[i][j]) {
          vd_[i][j] = vd_[i][k] + vd_[k][j];
          next_[i][j] = next_[i][k];
        }
}

std::shared_ptr<ConeSpace> ConeSpace::euclidean_cone(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha))
    throw Error(ErrorCode::InvalidArgument, "EuclideanCone needs a positive cone angle");
  return std::shared_ptr<ConeSpace>(new ConeSpace(SpaceKind::EuclideanCone, alpha, {{0, 0, alpha, 0.0}}, 1));
}

std::shared_ptr<ConeSpace> ConeSpace::glued_planes(double alpha) {
  if (!(alpha > 0) || alpha > M_PI + 1e-12)
    throw Error(ErrorCode::InvalidArgument, "GluedPlanes needs 0 < alpha <= pi");
  const double rest = 2 * M_PI - alpha;
  // Vertex 0 is the ray at plane angle 0, vertex 1 the ray at plane angle alpha.
  return std::shared_ptr<ConeSpace>(new ConeSpace(
      SpaceKind::GluedPlanes, alpha, {{0, 1, alpha, 0.0}, {1, 0, rest, alpha}, {1, 0, rest, alpha}}, 2));
}

std::string ConeSpace::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind_ == SpaceKind::EuclideanCone ? "EuclideanCone(" : "GluedPlanes(") << alpha_ << ")";
  return os.str();
}

double ConeSpace::apex_link_length() const {
  double s = 0.0;
  for (const Arc& a : arcs_) s += a.len;
  return s;
}

double ConeSpace::chart_angle(int chart, const Vec2& y) const {
  const Piece& pc = pieces_[chart];
  const double off = arcs_[pc.arc].offset;
  const double mid = off + 0.5 * (pc.s0 + pc.s1);
  const double delta = std::remainder(std::atan2(y.y(), y.x()) - mid, 2 * M_PI);
  return std::clamp(mid + delta, off + pc.s0, off + pc.s1);
}

void ConeSpace::validate(const Point& p) const {
  if (p.chart < 0 || p.chart >= chart_count())
    throw Error(ErrorCode::InvalidChart, "missing chart in " + p.str());
  if (p.dim() != 2 || !p.coords.allFinite()) throw Error(ErrorCode::InvalidChart, "bad coordinates " + p.str());
  const Vec2 y = p.xy();
  const double r = y.norm();
  if (r <= kVertexEps * std::max(1.0, length_scale())) return;
  const Piece& pc = pieces_[p.chart];
  const double mid = arcs_[pc.arc].offset + 0.5 * (pc.s0 + pc.s1);
  const double delta = std::remainder(std::atan2(y.y(), y.x()) - mid, 2 * M_PI);
  if (std::abs(delta) > 0.5 * (pc.s1 - pc.s0) + 1e-9)
    throw Error(ErrorCode::InvalidChart, "coordinates outside the chart sector " + p.str());
}

ConeSpace::Polar ConeSpace::to_polar(const Point& p) const {
  validate(p);
  const Piece& pc = pieces_[p.chart];
  Polar out;
  out.pos.arc = pc.arc;
  const Vec2 y = p.xy();
  out.r = y.norm();
  out.pos.s = out.r == 0 ? pc.s0 : chart_angle(p.chart, y) - arcs_[pc.arc].offset;
  out.pos.s = std::clamp(out.pos.s, pc.s0, pc.s1);
  return out;
}

std::vector<int> ConeSpace::charts_at(const LinkPos& pos) const {
  std::vector<int> out;
  const Arc& a = arcs_[pos.arc];
  const bool at0 = pos.s <= kVertexEps, at1 = pos.s >= a.len - kVertexEps;
  if (!at0 && !at1) {
    for (int c = 0; c < chart_count(); ++c)
      if (pieces_[c].arc == pos.arc && pos.s >= pieces_[c].s0 - kVertexEps && pos.s <= pieces_[c].s1 + kVertexEps)
        out.push_back(c);
    return out;
  }
  const int v = at0 ? a.v0 : a.v1;
  for (int c = 0; c < chart_count(); ++c) {
    const Piece& pc = pieces_[c];
    const Arc& b = arcs_[pc.arc];
    if ((b.v0 == v && pc.s0 == 0.0) || (b.v1 == v && pc.s1 == b.len)) out.push_back(c);
  }
  return out;
}

Vec2 ConeSpace::chart_coords(int chart, const Polar& p) const {
  const Piece& pc = pieces_[chart];
  const Arc& a = arcs_[pc.arc];
  double s = p.pos.s;
  if (p.pos.arc != pc.arc) {
    const Arc& b = arcs_[p.pos.arc];
    const int v = p.pos.s <= 0.5 * b.len ? b.v0 : b.v1;
    s = (a.v0 == v && pc.s0 == 0.0) ? 0.0 : a.len;
  }
  const double ang = a.offset + std::clamp(s, pc.s0, pc.s1);
  return Vec2(p.r * std::cos(ang), p.r * std::sin(ang));
}

Point ConeSpace::from_polar(const Polar& p) const {
  if (!(p.r > 0)) return apex();
  const Arc& a = arcs_[p.pos.arc];
  LinkPos pos{p.pos.arc, std::clamp(p.pos.s, 0.0, a.len)};
  const std::vector<int> cs = charts_at(pos);
  const int chart = cs.empty() ? 0 : cs.front();
  return Point::from(chart, chart_coords(chart, {pos, p.r}));
}

Point ConeSpace::at_angle(double phi, double r) const {
  if (kind_ == SpaceKind::EuclideanCone) {
    double s = std::fmod(phi, alpha_);
    if (s < 0) s += alpha_;
    return from_polar({{0, s}, r});
  }
  // Walk around P1 for phi in [0, 2pi), P2 for [2pi, 4pi).
  double t = std::fmod(phi, 4 * M_PI);
  if (t < 0) t += 4 * M_PI;
  const int sheet = t < 2 * M_PI ? 1 : 2;
  const double a = std::fmod(t, 2 * M_PI);
  return plane_point(sheet, r * std::cos(a), r * std::sin(a));
}

Point ConeSpace::plane_point(int sheet, double x, double y) const {
  const double r = std::hypot(x, y);
  if (r == 0) return apex();
  double phi = std::atan2(y, x);
  if (phi < 0) phi += 2 * M_PI;
  if (kind_ == SpaceKind::EuclideanCone) return at_angle(phi + 2 * M_PI * (sheet - 1), r);
  if (sheet != 1 && sheet != 2) throw Error(ErrorCode::InvalidArgument, "GluedPlanes sheet must be 1 or 2");
  if (phi >= 2 * M_PI - 1e-15) phi = 0.0;
  if (phi <= alpha_) return from_polar({{0, phi}, r});
  return from_polar({{sheet, phi - alpha_}, r});
}

int ConeSpace::region(const Point& p) const {
  if (kind_ == SpaceKind::EuclideanCone) return 0;
  return pieces_[p.chart].arc;
}

double ConeSpace::vertex_to_pos(int v, const LinkPos& p) const {
  const Arc& a = arcs_[p.arc];
  return std::min(vd_[v][a.v0] + p.s, vd_[v][a.v1] + (a.len - p.s));
}

ConeSpace::Route ConeSpace::best_route(const LinkPos& p, const LinkPos& q) const {
  Route best{INFINITY, false, 0, 0};
  if (p.arc == q.arc) best = {std::abs(p.s - q.s), true, 0, 0};
  const Arc& a = arcs_[p.arc];
  const Arc& b = arcs_[q.arc];
  for (int e1 = 0; e1 < 2; ++e1) {
    const double c1 = e1 ? a.len - p.s : p.s;
    const int v = e1 ? a.v1 : a.v0;
    for (int e2 = 0; e2 < 2; ++e2) {
      const double c2 = e2 ? b.len - q.s : q.s;
      const int u = e2 ? b.v1 : b.v0;
      const double len = c1 + vd_[v][u] + c2;
      if (len < best.len) best = {len, false, e1, e2};
    }
  }
  return best;
}

double ConeSpace::link_distance(const LinkPos& a, const LinkPos& b) const { return best_route(a, b).len; }

ConeSpace::LinkPos ConeSpace::link_walk(const LinkPos& p, const LinkPos& q, double phi) const {
  const Route rt = best_route(p, q);
  phi = std::clamp(phi, 0.0, rt.len);
  if (rt.direct) return {p.arc, p.s + (q.s >= p.s ? phi : -phi)};
  const Arc& a = arcs_[p.arc];
  const double c1 = rt.e1 ? a.len - p.s : p.s;
  if (phi <= c1) return {p.arc, rt.e1 ? p.s + phi : p.s - phi};
  phi -= c1;
  int v = rt.e1 ? a.v1 : a.v0;
  const Arc& b = arcs_[q.arc];
  const int target = rt.e2 ? b.v1 : b.v0;
  while (v != target) {
    const Hop h = next_[v][target];
    const Arc& e = arcs_[h.arc];
    if (phi <= e.len) return {h.arc, h.forward ? phi : e.len - phi};
    phi -= e.len;
    v = h.forward ? e.v1 : e.v0;
  }
  phi = std::min(phi, rt.e2 ? b.len - q.s : q.s);
  return {q.arc, rt.e2 ? b.len - phi : phi};
}

double ConeSpace::distance(const Point& p, const Point& q) const {
  const Polar a = to_polar(p), b = to_polar(q);
  if (a.r == 0) return b.r;
  if (b.r == 0) return a.r;
  const double theta = link_distance(a.pos, b.pos);
  if (theta >= M_PI) return a.r + b.r;
  const double s = std::sin(0.5 * theta);
  const double dr = a.r - b.r;
  return std::sqrt(dr * dr + 4.0 * a.r * b.r * s * s);
}

Point ConeSpace::geodesic_point(const Point& p, const Point& q, double t) const {
  const Polar a = to_polar(p), b = to_polar(q);
  if (t <= 0) return p;
  if (t >= 1) return q;
  if (a.r == 0) return from_polar({b.pos, t * b.r});
  if (b.r == 0) return from_polar({a.pos, (1 - t) * a.r});
  const double theta = link_distance(a.pos, b.pos);
  if (theta >= M_PI) {
    const double s = t * (a.r + b.r);
    if (s <= a.r) return from_polar({a.pos, a.r - s});
    return from_polar({b.pos, s - a.r});
  }
  const Vec2 A(a.r, 0.0), B(b.r * std::cos(theta), b.r * std::sin(theta));
  const Vec2 X = (1 - t) * A + t * B;
  const double phi = std::clamp(std::atan2(X.y(), X.x()), 0.0, theta);
  return from_polar({link_walk(a.pos, b.pos, phi), X.norm()});
}

double ConeSpace::link_length(const Point& v) const {
  const Polar p = to_polar(v);
  if (p.r <= kVertexEps * std::max(1.0, length_scale())) return apex_link_length();
  const Arc& a = arcs_[p.pos.arc];
  const bool at0 = p.pos.s <= kVertexEps, at1 = p.pos.s >= a.len - kVertexEps;
  if (!at0 && !at1) return 2 * M_PI;
  const int vert = at0 ? a.v0 : a.v1;
  int degree = 0;
  for (const Arc& e : arcs_) degree += (e.v0 == vert) + (e.v1 == vert);
  return degree * M_PI;
}

std::vector<Point> ConeSpace::singular_vertices() const {
  std::vector<Point> out;
  if (std::abs(apex_link_length() - 2 * M_PI) > 1e-12) out.push_back(apex());
  for (int v = 0; v < nverts_; ++v) {
    int degree = 0, arc = -1;
    double s = 0;
    for (int a = 0; a < static_cast<int>(arcs_.size()); ++a) {
      degree += (arcs_[a].v0 == v) + (arcs_[a].v1 == v);
      if (arc < 0 && arcs_[a].v0 == v) arc = a, s = 0;
      if (arc < 0 && arcs_[a].v1 == v) arc = a, s = arcs_[a].len;
    }
    if (degree != 2) out.push_back(from_polar({{arc, s}, length_scale()}));
  }
  return out;
}

Point ConeSpace::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = length_scale() * std::sqrt(u(rng));
  double s = u(rng) * apex_link_length();
  int arc = 0;
  while (arc + 1 < static_cast<int>(arcs_.size()) && s > arcs_[arc].len) s -= arcs_[arc++].len;
  return from_polar({{arc, std::min(s, arcs_[arc].len)}, r});
}

std::optional<double> ConeSpace::exact_angle(const Point& q, const Point& x, const Point& y) const {
  const Polar pq = to_polar(q);
  if (pq.r > kVertexEps * std::max(1.0, length_scale())) return std::nullopt;
  const Polar px = to_polar(x), py = to_polar(y);
  if (px.r == 0 || py.r == 0) return std::nullopt;
  return std::min(link_distance(px.pos, py.pos), M_PI);
}

// ---- Frechet mean ---------------------------------------------------------

ConeSpace::Developed ConeSpace::develop(int chart, const Polar& p) const {
  const Piece& pc = pieces_[chart];
  const Arc& a = arcs_[pc.arc];
  Developed d{};
  d.r = p.r;
  d.n = 0;
  if (p.pos.arc == pc.arc) d.psi[d.n++] = a.offset + p.pos.s;
  d.psi[d.n++] = a.offset - vertex_to_pos(a.v0, p.pos);
  d.psi[d.n++] = a.offset + a.len + vertex_to_pos(a.v1, p.pos);
  return d;
}

namespace {
inline int nearest_route(double psi, const std::array<double, 3>& routes, int n, double& theta) {
  int k = 0;
  theta = std::abs(psi - routes[0]);
  for (int j = 1; j < n; ++j) {
    const double t = std::abs(psi - routes[j]);
    if (t < theta) theta = t, k = j;
  }
  return k;
}
}  // namespace

Vec2 ConeSpace::project(int chart, const Vec2& z) const {
  const Piece& pc = pieces_[chart];
  const double off = arcs_[pc.arc].offset;
  const double mid = off + 0.5 * (pc.s0 + pc.s1), half = 0.5 * (pc.s1 - pc.s0);
  if (z.squaredNorm() == 0) return z;
  const double delta = std::remainder(std::atan2(z.y(), z.x()) - mid, 2 * M_PI);
  if (std::abs(delta) <= half) return z;
  const double ang = delta > 0 ? off + pc.s1 : off + pc.s0;
  const Vec2 u(std::cos(ang), std::sin(ang));
  const double t = z.dot(u);
  return t > 0 ? Vec2(t * u) : Vec2(0, 0);
}

double ConeSpace::chart_objective(int chart, const Vec2& y, const std::vector<Developed>& dev,
                                  const std::vector<double>& w) const {
  const double ry = y.norm();
  const double psi = ry > 0 ? chart_angle(chart, y) : 0.0;
  double f = 0.0;
  for (std::size_t i = 0; i < dev.size(); ++i) {
    if (w[i] <= 0) continue;
    const Developed& d = dev[i];
    double d2;
    if (ry == 0 || d.r == 0) {
      d2 = (ry + d.r) * (ry + d.r);
    } else {
      double theta;
      nearest_route(psi, d.psi, d.n, theta);
      if (theta >= M_PI) {
        d2 = (ry + d.r) * (ry + d.r);
      } else {
        const double s = std::sin(0.5 * theta);
        d2 = (ry - d.r) * (ry - d.r) + 4 * ry * d.r * s * s;
      }
    }
    f += w[i] * d2;
  }
  return f;
}

Vec2 ConeSpace::chart_step(int chart, const Vec2& y, const std::vector<Developed>& dev,
                           const std::vector<double>& w, double W) const {
  const double ry = y.norm();
  if (ry == 0) {
    // Apex: best ray from sampled directions, then the exact 1-D minimizer on it.
    const Piece& pc = pieces_[chart];
    const double off = arcs_[pc.arc].offset;
    std::vector<double> cand;
    for (int j = 0; j <= 16; ++j) cand.push_back(off + pc.s0 + (pc.s1 - pc.s0) * j / 16.0);
    for (const Developed& d : dev)
      for (int k = 0; k < d.n; ++k) cand.push_back(std::clamp(d.psi[k], off + pc.s0, off + pc.s1));
    double best_g = 0.0, best_psi = 0.0;
    for (double psi : cand) {
      double g = 0.0;
      for (std::size_t i = 0; i < dev.size(); ++i) {
        if (w[i] <= 0 || dev[i].r == 0) continue;
        double theta;
        nearest_route(psi, dev[i].psi, dev[i].n, theta);
        g += w[i] * dev[i].r * std::cos(std::min(theta, M_PI));
      }
      if (g > best_g) best_g = g, best_psi = psi;
    }
    if (best_g <= 1e-14 * W * std::max(1.0, length_scale())) return Vec2(0, 0);
    return (best_g / W) * Vec2(std::cos(best_psi), std::sin(best_psi));
  }
  const Vec2 yhat = y / ry;
  const double psi = chart_angle(chart, y);
  Vec2 acc(0, 0);
  for (std::size_t i = 0; i < dev.size(); ++i) {
    if (w[i] <= 0 || dev[i].r == 0) continue;
    const Developed& d = dev[i];
    double theta;
    const int k = nearest_route(psi, d.psi, d.n, theta);
    if (theta < M_PI)
      acc += w[i] * d.r * Vec2(std::cos(d.psi[k]), std::sin(d.psi[k]));
    else
      acc -= w[i] * d.r * yhat;
  }
  return project(chart, acc / W);
}

Vec2 ConeSpace::chart_minimize(int chart, Vec2 y, const std::vector<Polar>& pts, const std::vector<double>& w,
                               double W, int& iterations, double& residual) const {
  std::vector<Developed> dev(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) dev[i] = develop(chart, pts[i]);
  const double tol = 1e-12 * std::max(1.0, length_scale());
  // Fixed-point step as a search direction with Armijo backtracking; the
  // objective has a |y| kink at the apex, where the plain step can cycle.
  auto descend = [&](Vec2 x, double& fx) {
    residual = INFINITY;
    for (int it = 0; it < 2000; ++it) {
      ++iterations;
      const Vec2 d = chart_step(chart, x, dev, w, W) - x;
      residual = d.norm();
      if (residual <= tol) break;
      bool moved = false;
      for (double t = 1.0; t > 1e-12; t *= 0.5) {
        const Vec2 c = x + t * d;
        const double fc = chart_objective(chart, c, dev, w);
        if (fc <= fx - 0.5 * W * t * residual * residual) {
          x = c;
          fx = fc;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    return x;
  };
  y = project(chart, y);
  double fy = chart_objective(chart, y, dev, w);
  y = descend(y, fy);
  const Vec2 z = chart_step(chart, Vec2(0, 0), dev, w, W);
  double fz = chart_objective(chart, z, dev, w);
  if (fz < fy) {
    const double keep = residual;
    const Vec2 y2 = descend(z, fz);
    if (fz < fy) return y2;
    residual = keep;
  }
  return y;
}

FrechetResult ConeSpace::frechet_mean(const std::vector<Point>& pts, const std::vector<double>& w,
                                      const Point* warm) const {
  if (pts.empty() || pts.size() != w.size())
    throw Error(ErrorCode::InvalidArgument, "frechet_mean: points and weights differ in size");
  double W = 0.0;
  int positive = 0, last = -1;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0) W += w[i], ++positive, last = static_cast<int>(i);
  if (!(W > 0)) throw Error(ErrorCode::InvalidArgument, "frechet_mean: no positive weight");
  FrechetResult res;
  if (positive == 1) {
    res.point = pts[last];
    res.converged = true;
    return res;
  }
  std::vector<Polar> pol(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pol[i] = to_polar(pts[i]);

  Point start = warm ? *warm : pts[last];
  const Polar sp = to_polar(start);
  int chart = start.chart;
  Vec2 y = chart_coords(chart, sp);
  double residual = INFINITY;
  int iterations = 0;
  y = chart_minimize(chart, y, pol, w, W, iterations, residual);
  std::vector<Developed> dev(pol.size());
  auto objective = [&](int c, const Vec2& v) {
    for (std::size_t i = 0; i < pol.size(); ++i) dev[i] = develop(c, pol[i]);
    return chart_objective(c, v, dev, w);
  };
  double F = objective(chart, y);
  const double scale = std::max(1.0, length_scale());
  for (int moves = 0; moves < 4 * chart_count() + 4; ++moves) {
    std::vector<int> nbrs;
    const double ry = y.norm();
    if (ry <= 1e-12 * scale) {
      for (int c = 0; c < chart_count(); ++c) nbrs.push_back(c);
    } else {
      const Piece& pc = pieces_[chart];
      const double s = chart_angle(chart, y) - arcs_[pc.arc].offset;
      if (s - pc.s0 <= 1e-10) {
        auto cs = charts_at({pc.arc, pc.s0});
        nbrs.insert(nbrs.end(), cs.begin(), cs.end());
      }
      if (pc.s1 - s <= 1e-10) {
        auto cs = charts_at({pc.arc, pc.s1});
        nbrs.insert(nbrs.end(), cs.begin(), cs.end());
      }
    }
    const Polar here{{pieces_[chart].arc, ry > 0 ? chart_angle(chart, y) - arcs_[pieces_[chart].arc].offset
                                                 : pieces_[chart].s0},
                     ry};
    int best_c = -1;
    Vec2 best_y;
    double best_F = F - 1e-13 * (1.0 + F), best_res = INFINITY;
    for (int c : nbrs) {
      if (c == chart) continue;
      double r2 = INFINITY;
      Vec2 y2 = chart_minimize(c, chart_coords(c, here), pol, w, W, iterations, r2);
      const double F2 = objective(c, y2);
      if (F2 < best_F) best_F = F2, best_c = c, best_y = y2, best_res = r2;
    }
    if (best_c < 0) break;
    chart = best_c;
    y = best_y;
    F = best_F;
    residual = best_res;
  }
  res.point = y.norm() <= 1e-300 ? apex() : Point::from(chart, y);
  res.objective = F;
  res.residual = residual;
  res.iterations = iterations;
  res.converged = residual <= mean_tolerance();
  // Never return something worse than an input point.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (w[i] <= 0) continue;
    const double f = frechet_objective(pts[i], pts, w);
    if (f < res.objective - 1e-12 * (1.0 + res.objective)) {
      res.objective = f;
      res.point = pts[i];
    }
  }
  return res;
}

}  // namespace plateau
