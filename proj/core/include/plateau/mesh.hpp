#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "plateau/space.hpp"

namespace plateau {

// Triangulated closed unit disc. Triangles are counter-clockwise.
struct DiscMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_loop;  // counter-clockwise
  int rings = 0;                   // ring count for generated meshes, 0 otherwise

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  double triangle_area(int t) const;
  double area() const;
  std::vector<std::pair<int, int>> edges() const;  // sorted pairs (a < b)
  std::vector<std::vector<int>> neighbors() const;
  std::vector<bool> boundary_mask() const;
  int euler_characteristic() const;
  double min_angle() const;
  // Longest domain edge.
  double mesh_size() const;
  // Throws InvalidArgument when an invariant fails.
  void validate() const;
};

// Concentric rings: ring k has 6k vertices at radius k/rings. Vertex (k, j) has
// index 1 + 3k(k-1) + j. Meshes for rings n and 2n are nested.
DiscMesh generate_disc_mesh(int rings);
int ring_vertex(int k, int j);

// Symmetric cotangent weights w_ab = (cot a + cot b)/2 of the domain, so that
// sum_T |T| tr Q_T = sum_edges w_ab d(f(a), f(b))^2.
struct CotanWeights {
  std::vector<std::pair<int, int>> edges;
  std::vector<double> weight;
  // adjacency[v] = (neighbour, weight)
  std::vector<std::vector<std::pair<int, double>>> adjacency;
};
CotanWeights cotan_weights(const DiscMesh& mesh);

struct MeshMap {
  DiscMesh mesh;
  std::vector<Point> images;
  SpacePtr space;
};

struct PullbackForm {
  Eigen::Matrix2d Q = Eigen::Matrix2d::Zero();
  bool psd = true;
  double lambda_min = 0.0, lambda_max = 0.0;
  double residual = 0.0;  // max |e^T Q e - d^2| over the three edges
};

// Q with e^T Q e = image length^2 on the three domain edge vectors.
PullbackForm pullback_form(const MeshMap& map, int tri);
PullbackForm pullback_form(const std::array<Vec2, 3>& domain, const std::array<double, 3>& sq_lengths,
                           double scale = 1.0);
std::vector<PullbackForm> pullback_forms(const MeshMap& map);

double ks_energy(const MeshMap& map);
double ks_energy(const std::vector<PullbackForm>& forms, const DiscMesh& mesh);
double reshetnyak_energy(const MeshMap& map);
double map_area(const MeshMap& map);
double map_area(const std::vector<PullbackForm>& forms, const DiscMesh& mesh);

// Image edge lengths per mesh edge (same order as DiscMesh::edges()).
std::vector<double> image_edge_lengths(const MeshMap& map);

nlohmann::json mesh_to_json(const DiscMesh& mesh);
DiscMesh mesh_from_json(const nlohmann::json& j);
nlohmann::json map_to_json(const MeshMap& map);
MeshMap map_from_json(const nlohmann::json& j, SpacePtr space);
// Columns: triangle, area, trace, lambda_max, det.
std::string forms_csv(const MeshMap& map);

}  // namespace plateau
