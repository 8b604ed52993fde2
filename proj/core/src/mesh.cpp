#include "plateau/mesh.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "plateau/parallel.hpp"
#include "plateau/report_io.hpp"
#include "plateau/space_io.hpp"

namespace plateau {

namespace {
double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
}  // namespace

double DiscMesh::triangle_area(int t) const {
  const auto& v = triangles[t];
  return 0.5 * cross2(vertices[v[1]] - vertices[v[0]], vertices[v[2]] - vertices[v[0]]);
}

double DiscMesh::area() const {
  double a = 0.0;
  for (int t = 0; t < triangle_count(); ++t) a += triangle_area(t);
  return a;
}

std::vector<std::pair<int, int>> DiscMesh::edges() const {
  std::vector<std::pair<int, int>> e;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) e.push_back(std::minmax(t[k], t[(k + 1) % 3]));
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

std::vector<std::vector<int>> DiscMesh::neighbors() const {
  std::vector<std::vector<int>> n(vertices.size());
  for (const auto& [a, b] : edges()) {
    n[a].push_back(b);
    n[b].push_back(a);
  }
  return n;
}

std::vector<bool> DiscMesh::boundary_mask() const {
  std::vector<bool> m(vertices.size(), false);
  for (int v : boundary_loop) m[v] = true;
  return m;
}

int DiscMesh::euler_characteristic() const {
  return vertex_count() - static_cast<int>(edges().size()) + triangle_count();
}

double DiscMesh::min_angle() const {
  double m = M_PI;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = vertices[t[(k + 1) % 3]] - vertices[t[k]];
      const Vec2 b = vertices[t[(k + 2) % 3]] - vertices[t[k]];
      m = std::min(m, std::atan2(std::abs(cross2(a, b)), a.dot(b)));
    }
  return m;
}

double DiscMesh::mesh_size() const {
  double h = 0.0;
  for (const auto& [a, b] : edges()) h = std::max(h, (vertices[a] - vertices[b]).norm());
  return h;
}

void DiscMesh::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, "mesh: " + m); };
  if (euler_characteristic() != 1) fail("not a combinatorial disc");
  const auto bm = boundary_mask();
  for (int v = 0; v < vertex_count(); ++v) {
    const double r = vertices[v].norm();
    if (bm[v] && std::abs(r - 1.0) > 1e-12) fail("boundary vertex off the unit circle");
    if (!bm[v] && r >= 1.0) fail("interior vertex not inside the disc");
  }
  for (int t = 0; t < triangle_count(); ++t)
    if (!(triangle_area(t) > 0)) fail("degenerate or clockwise triangle " + std::to_string(t));
  // Boundary edges of the triangulation must be exactly the loop.
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) ++count[std::minmax(t[k], t[(k + 1) % 3])];
  std::size_t boundary_edges = 0;
  for (const auto& [e, c] : count) {
    if (c > 2) fail("non-manifold edge");
    if (c == 1) {
      ++boundary_edges;
      if (!bm[e.first] || !bm[e.second]) fail("boundary edge off the loop");
    }
  }
  if (boundary_edges != boundary_loop.size()) fail("boundary loop does not match the triangulation");
}

int ring_vertex(int k, int j) {
  if (k == 0) return 0;
  const int m = 6 * k;
  j = ((j % m) + m) % m;
  return 1 + 3 * k * (k - 1) + j;
}

DiscMesh generate_disc_mesh(int rings) {
  if (rings < 1) throw Error(ErrorCode::InvalidArgument, "rings must be >= 1");
  DiscMesh m;
  m.rings = rings;
  m.vertices.emplace_back(0.0, 0.0);
  for (int k = 1; k <= rings; ++k)
    for (int j = 0; j < 6 * k; ++j) {
      const double a = 2 * M_PI * j / (6.0 * k);
      const double r = k == rings ? 1.0 : static_cast<double>(k) / rings;
      m.vertices.emplace_back(r * std::cos(a), r * std::sin(a));
    }
  for (int k = 0; k < rings; ++k)
    for (int s = 0; s < 6; ++s) {
      for (int i = 0; i <= k; ++i)
        m.triangles.push_back({ring_vertex(k + 1, s * (k + 1) + i), ring_vertex(k + 1, s * (k + 1) + i + 1),
                               ring_vertex(k, s * k + i)});
      for (int i = 0; i < k; ++i)
        m.triangles.push_back({ring_vertex(k, s * k + i), ring_vertex(k + 1, s * (k + 1) + i + 1),
                               ring_vertex(k, s * k + i + 1)});
    }
  for (int j = 0; j < 6 * rings; ++j) m.boundary_loop.push_back(ring_vertex(rings, j));
  return m;
}

CotanWeights cotan_weights(const DiscMesh& mesh) {
  CotanWeights cw;
  cw.edges = mesh.edges();
  std::map<std::pair<int, int>, double> w;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = mesh.vertices[t[(k + 1) % 3]] - mesh.vertices[t[k]];
      const Vec2 b = mesh.vertices[t[(k + 2) % 3]] - mesh.vertices[t[k]];
      w[std::minmax(t[(k + 1) % 3], t[(k + 2) % 3])] += 0.5 * a.dot(b) / std::abs(cross2(a, b));
    }
  cw.adjacency.resize(mesh.vertices.size());
  for (const auto& e : cw.edges) {
    const double x = w[e];
    cw.weight.push_back(x);
    cw.adjacency[e.first].push_back({e.second, x});
    cw.adjacency[e.second].push_back({e.first, x});
  }
  return cw;
}

PullbackForm pullback_form(const std::array<Vec2, 3>& x, const std::array<double, 3>& sq, double scale) {
  Eigen::Matrix3d A;
  Eigen::Vector3d b;
  std::array<Vec2, 3> e;
  for (int k = 0; k < 3; ++k) {
    e[k] = x[(k + 1) % 3] - x[k];
    A.row(k) << e[k].x() * e[k].x(), 2 * e[k].x() * e[k].y(), e[k].y() * e[k].y();
    b(k) = sq[k];
  }
  if (std::abs(cross2(e[0], -e[2])) <= 1e-300)
    throw Error(ErrorCode::SingularSystem, "degenerate domain triangle");
  const Eigen::Vector3d q = A.partialPivLu().solve(b);
  PullbackForm f;
  f.Q << q(0), q(1), q(1), q(2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(f.Q, Eigen::EigenvaluesOnly);
  f.lambda_min = es.eigenvalues()(0);
  f.lambda_max = es.eigenvalues()(1);
  f.psd = f.lambda_min >= -1e-10 * scale * scale;
  for (int k = 0; k < 3; ++k) f.residual = std::max(f.residual, std::abs(e[k].dot(f.Q * e[k]) - sq[k]));
  return f;
}

PullbackForm pullback_form(const MeshMap& map, int tri) {
  const auto& t = map.mesh.triangles[tri];
  std::array<Vec2, 3> x;
  std::array<double, 3> sq;
  for (int k = 0; k < 3; ++k) {
    x[k] = map.mesh.vertices[t[k]];
    const double d = map.space->distance(map.images[t[k]], map.images[t[(k + 1) % 3]]);
    sq[k] = d * d;
  }
  return pullback_form(x, sq, map.space->length_scale());
}

std::vector<PullbackForm> pullback_forms(const MeshMap& map) {
  std::vector<PullbackForm> out(map.mesh.triangles.size());
  parallel_for(out.size(), [&](std::size_t t) { out[t] = pullback_form(map, static_cast<int>(t)); });
  return out;
}

double ks_energy(const std::vector<PullbackForm>& forms, const DiscMesh& mesh) {
  double e = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) e += mesh.triangle_area(t) * forms[t].Q.trace();
  return e;
}

double ks_energy(const MeshMap& map) { return ks_energy(pullback_forms(map), map.mesh); }

double reshetnyak_energy(const MeshMap& map) {
  const auto forms = pullback_forms(map);
  double e = 0.0;
  for (int t = 0; t < map.mesh.triangle_count(); ++t) e += map.mesh.triangle_area(t) * forms[t].lambda_max;
  return e;
}

double map_area(const std::vector<PullbackForm>& forms, const DiscMesh& mesh) {
  double a = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    // Clamp negative eigenvalues to zero: degenerate seminorms carry no area.
    const double l0 = std::max(forms[t].lambda_min, 0.0), l1 = std::max(forms[t].lambda_max, 0.0);
    a += mesh.triangle_area(t) * std::sqrt(l0 * l1);
  }
  return a;
}

double map_area(const MeshMap& map) { return map_area(pullback_forms(map), map.mesh); }

std::vector<double> image_edge_lengths(const MeshMap& map) {
  const auto e = map.mesh.edges();
  std::vector<double> out(e.size());
  parallel_for(e.size(), [&](std::size_t i) {
    out[i] = map.space->distance(map.images[e[i].first], map.images[e[i].second]);
  });
  return out;
}

nlohmann::json mesh_to_json(const DiscMesh& mesh) {
  nlohmann::json v = nlohmann::json::array(), t = nlohmann::json::array();
  for (const Vec2& x : mesh.vertices) v.push_back({x.x(), x.y()});
  for (const auto& tr : mesh.triangles) t.push_back({tr[0], tr[1], tr[2]});
  return {{"vertices", v}, {"triangles", t}, {"boundary_loop", mesh.boundary_loop}, {"rings", mesh.rings}};
}

DiscMesh mesh_from_json(const nlohmann::json& j) {
  DiscMesh m;
  try {
    for (const auto& x : j.at("vertices")) m.vertices.emplace_back(x.at(0).get<double>(), x.at(1).get<double>());
    for (const auto& t : j.at("triangles")) m.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    m.boundary_loop = j.at("boundary_loop").get<std::vector<int>>();
    m.rings = j.value("rings", 0);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::SceneParseError, std::string("mesh: ") + e.what());
  }
  m.validate();
  return m;
}

nlohmann::json map_to_json(const MeshMap& map) {
  nlohmann::json im = nlohmann::json::array();
  for (const Point& p : map.images) im.push_back(point_to_json(p));
  return {{"mesh", mesh_to_json(map.mesh)}, {"images", im}};
}

MeshMap map_from_json(const nlohmann::json& j, SpacePtr space) {
  MeshMap m;
  m.mesh = mesh_from_json(j.at("mesh"));
  for (const auto& p : j.at("images")) m.images.push_back(point_from_json(*space, p));
  if (m.images.size() != m.mesh.vertices.size())
    throw Error(ErrorCode::SceneParseError, "map: image count differs from vertex count");
  m.space = std::move(space);
  return m;
}

std::string forms_csv(const MeshMap& map) {
  const auto forms = pullback_forms(map);
  std::ostringstream os;
  os << "triangle,area,trace,lambda_max,det\n";
  for (int t = 0; t < map.mesh.triangle_count(); ++t)
    os << t << ',' << fmt17(map.mesh.triangle_area(t)) << ',' << fmt17(forms[t].Q.trace()) << ','
       << fmt17(forms[t].lambda_max) << ',' << fmt17(forms[t].Q.determinant()) << '\n';
  return os.str();
}

}  // namespace plateau
