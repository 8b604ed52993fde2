#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "plateau/point.hpp"

namespace plateau {

// Flat triangles glued along sides that share a vertex pair. Each triangle
// keeps its own corner coordinates (counter-clockwise). This backs the
// polyhedral target spaces, the pull-back metric and the funnel.
class TriangleComplex {
 public:
  struct Tri {
    std::array<int, 3> v;
    std::array<Vec2, 3> c;
    std::array<int, 3> nbr;       // triangle across side k = (v[k], v[k+1]), -1 on the boundary
    std::array<int, 3> nbr_side;  // matching side index in nbr
    std::array<int, 3> edge;      // undirected edge id of side k
  };

  TriangleComplex() = default;
  TriangleComplex(int nverts, const std::vector<std::array<int, 3>>& tris,
                  const std::vector<std::array<Vec2, 3>>& corners, int subdivisions = 3);
  // Lays out every triangle from its three side lengths.
  static TriangleComplex from_lengths(int nverts, const std::vector<std::array<int, 3>>& tris,
                                      const std::function<double(int, int)>& length, int subdivisions = 3);

  int vertex_count() const { return nverts_; }
  int triangle_count() const { return static_cast<int>(tris_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Tri& tri(int t) const { return tris_[t]; }
  const std::pair<int, int>& edge(int e) const { return edges_[e]; }
  double side_length(int t, int k) const;
  double area(int t) const;
  double angle(int t, int k) const;
  double angle_sum(int v) const;
  bool boundary_vertex(int v) const { return boundary_vertex_[v]; }
  bool boundary_edge(int e) const { return edge_tris_[e].size() < 2; }
  const std::vector<std::pair<int, int>>& incident(int v) const { return incident_[v]; }

  // ---- refined graph: vertex nodes plus `subdivisions` nodes per edge ----
  int subdivisions() const { return sub_; }
  int node_count() const { return nverts_ + edge_count() * sub_; }
  int edge_node(int e, int j) const { return nverts_ + e * sub_ + j; }
  // Local position of every boundary node of triangle t.
  const std::vector<std::pair<int, Vec2>>& tri_nodes(int t) const { return tri_nodes_[t]; }

  struct Field {
    std::vector<double> dist;
    std::vector<int> pred_node;  // -1 for seeds
    std::vector<int> pred_tri;   // triangle used for the last hop
    std::vector<int> seed_tri;   // for seeds from a point: its triangle, else -1
  };
  Field dijkstra(const std::vector<std::pair<int, double>>& seeds, const std::vector<int>& seed_tris = {}) const;
  // Seeds for a source point at local coords x of triangle t.
  std::vector<std::pair<int, double>> point_seeds(int t, const Vec2& x) const;
  // min over boundary nodes n of t of dist[n] + |x - n|.
  double evaluate(const Field& f, int t, const Vec2& x, int* best_node = nullptr) const;

  // ---- exact paths inside a triangle strip ----
  struct Sleeve {
    std::vector<int> tris;
    std::vector<Eigen::Matrix2d> rot;
    std::vector<Vec2> shift;
    std::vector<Vec2> path;  // developed polyline
    double length = 0.0;
    Vec2 start_local = Vec2::Zero();  // endpoints in the frames of tris.front() and tris.back()
    Vec2 end_local = Vec2::Zero();
    Vec2 to_developed(int i, const Vec2& local) const { return rot[i] * local + shift[i]; }
    Vec2 to_local(int i, const Vec2& dev) const { return rot[i].transpose() * (dev - shift[i]); }
  };
  // Shortest path from `a` (local coords of tris.front()) to `b` (local coords of
  // tris.back()) that stays in the strip. Consecutive triangles must be adjacent.
  Sleeve pull_string(const std::vector<int>& tris, const Vec2& a, const Vec2& b) const;
  // Which sleeve triangle holds the developed point; returns index into tris.
  int sleeve_locate(const Sleeve& s, const Vec2& dev) const;
  // Sleeve index and local coordinates of the path point at arc length `arc`;
  // unambiguous where the development overlaps itself.
  int sleeve_point(const Sleeve& s, double arc, Vec2* local) const;

  // Triangle strip from a Dijkstra back-trace; alternate fans around vertex
  // nodes are explored greedily. Returns the shortest strip found.
  Sleeve trace_sleeve(const Field& f, int t_src, const Vec2& src, int t_dst, const Vec2& dst) const;
  // Re-routes the sleeve around bend vertices while that shortens the pulled string.
  Sleeve straighten(Sleeve s) const;
  // Strip swept by the straight developed segment between the sleeve's end
  // points; false unless the walk lands on the end point.
  bool walk_straight(const Sleeve& s, Sleeve& out) const;
  bool walk_line(const Sleeve& s, double offset, Sleeve& out) const;

  // Barycentric coordinates of x in triangle t.
  Eigen::Vector3d barycentric(int t, const Vec2& x) const;
  // Triangles around vertex v from t0 to t1 going one way (dir = +1 or -1); empty if blocked.
  std::vector<int> fan(int v, int t0, int t1, int dir) const;

 private:
  void build_adjacency();
  std::vector<std::vector<int>> sleeve_candidates(const std::vector<int>& raw) const;

  int nverts_ = 0;
  int sub_ = 3;
  std::vector<Tri> tris_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> edge_tris_;
  std::vector<bool> boundary_vertex_;
  std::vector<std::vector<std::pair<int, int>>> incident_;
  std::vector<std::vector<std::pair<int, Vec2>>> tri_nodes_;
  std::vector<std::vector<int>> node_tris_;
};

}  // namespace plateau
