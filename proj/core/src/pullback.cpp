#include "plateau/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace plateau {

PullbackMetric::PullbackMetric(const DiscMesh& mesh, std::vector<double> edge_lengths, int subdivision)
    : mesh_(mesh), edges_(mesh.edges()), weights_(std::move(edge_lengths)) {
  if (weights_.size() != edges_.size()) throw Error(ErrorCode::InvalidArgument, "edge length count mismatch");
  for (double w : weights_)
    if (!(w >= 0)) throw Error(ErrorCode::InvalidArgument, "negative pull-back edge length");
  adj_.resize(mesh_.vertices.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    adj_[edges_[e].first].push_back({edges_[e].second, weights_[e]});
    adj_[edges_[e].second].push_back({edges_[e].first, weights_[e]});
  }
  boundary_ = mesh_.boundary_mask();
  tc_ = TriangleComplex::from_lengths(
      mesh_.vertex_count(), mesh_.triangles, [this](int a, int b) { return edge_length(a, b); }, subdivision);
  corner_of_.resize(mesh_.triangles.size());
  for (int t = 0; t < mesh_.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < 3; ++c)
        if (tc_.tri(t).v[c] == mesh_.triangles[t][k]) corner_of_[t][k] = c;
}

double PullbackMetric::edge_length(int a, int b) const {
  const auto key = std::minmax(a, b);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair<int, int>(key));
  if (it == edges_.end() || *it != std::pair<int, int>(key)) throw Error(ErrorCode::InvalidArgument, "not an edge");
  return weights_[it - edges_.begin()];
}

std::vector<double> PullbackMetric::graph_distances(int source) const {
  std::vector<double> d(mesh_.vertices.size(), INFINITY);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  d[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    const auto [dv, v] = pq.top();
    pq.pop();
    if (dv > d[v]) continue;
    for (const auto& [u, w] : adj_[v])
      if (dv + w < d[u]) {
        d[u] = dv + w;
        pq.push({d[u], u});
      }
  }
  return d;
}

TriangleComplex::Field PullbackMetric::field_from_vertex(int v) const { return tc_.dijkstra({{v, 0.0}}); }

Vec2 PullbackMetric::local(int t, const Eigen::Vector3d& bary) const {
  Vec2 x(0, 0);
  for (int k = 0; k < 3; ++k) x += bary(k) * tc_.tri(t).c[corner_of_[t][k]];
  return x;
}

TriangleComplex::Field PullbackMetric::field_from_point(int t, const Eigen::Vector3d& bary) const {
  return tc_.dijkstra(tc_.point_seeds(t, local(t, bary)));
}

double PullbackMetric::field_at(const TriangleComplex::Field& f, int t, const Eigen::Vector3d& bary) const {
  return tc_.evaluate(f, t, local(t, bary));
}

double PullbackMetric::distance_to_boundary(int v) const {
  const auto d = graph_distances(v);
  double best = INFINITY;
  for (int b : mesh_.boundary_loop) best = std::min(best, d[b]);
  return best;
}

PullbackMetric pullback_metric(const MeshMap& map, int subdivision) {
  return PullbackMetric(map.mesh, image_edge_lengths(map), subdivision);
}

}  // namespace plateau
