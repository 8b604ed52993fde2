#pragma once

#include <vector>

#include "plateau/mesh.hpp"
#include "plateau/piecewise_flat.hpp"

namespace plateau {

// Piecewise-flat metric on the domain mesh with edge lengths d(f(a), f(b)).
// Each triangle is laid out flat from its three lengths; distances come from
// the refined-graph field (subdivision nodes per edge plus straight
// segments inside triangles).
class PullbackMetric {
 public:
  PullbackMetric(const DiscMesh& mesh, std::vector<double> edge_lengths, int subdivision);

  const DiscMesh& mesh() const { return mesh_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<double>& weights() const { return weights_; }
  const TriangleComplex& complex() const { return tc_; }
  double edge_length(int a, int b) const;

  // Shortest paths in the 1-skeleton (vertices only).
  std::vector<double> graph_distances(int source) const;
  // Refined-graph field from a vertex, or from a point given by barycentric
  // coordinates in mesh triangle t.
  TriangleComplex::Field field_from_vertex(int v) const;
  TriangleComplex::Field field_from_point(int t, const Eigen::Vector3d& bary) const;
  // Field value at barycentric coordinates in mesh triangle t.
  double field_at(const TriangleComplex::Field& f, int t, const Eigen::Vector3d& bary) const;
  // Local coordinates (in the flat layout of complex triangle t) of a barycentric point.
  Vec2 local(int t, const Eigen::Vector3d& bary) const;
  double triangle_area(int t) const { return tc_.area(t); }
  double angle_sum(int v) const { return tc_.angle_sum(v); }
  bool boundary_vertex(int v) const { return boundary_[v]; }
  // Smallest graph distance from v to the boundary loop.
  double distance_to_boundary(int v) const;

 private:
  DiscMesh mesh_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<double> weights_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<bool> boundary_;
  TriangleComplex tc_;
  std::vector<std::array<int, 3>> corner_of_;  // mesh corner k -> complex corner
};

PullbackMetric pullback_metric(const MeshMap& map, int subdivision = 3);

}  // namespace plateau
