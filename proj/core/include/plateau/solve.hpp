#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "plateau/curve.hpp"
#include "plateau/mesh.hpp"

namespace plateau {

enum class BoundaryMode { Fixed, Sliding };

struct SolverConfig {
  int rings = 16;
  int max_sweeps = 4000;
  double tol_energy = 1e-8;  // relative trace-energy decrease per sweep
  BoundaryMode boundary_mode = BoundaryMode::Sliding;
  std::array<double, 3> pinned = {0.0, 1.0 / 3.0, 2.0 / 3.0};
  std::uint64_t seed = 1;
  int refinement_levels = 0;  // extra ring doublings after the main solve
  int slide_every = 4;
  double over_relaxation = 1.6;  // used in Euclidean targets only
  bool continuation = true;      // solve on halved ring counts first
  std::optional<Point> center;   // radial initialization center

  void validate() const;
};

struct SolveResult {
  MeshMap map;
  std::vector<double> energy_trace;
  double area = 0.0;
  bool converged = false;
  std::vector<double> boundary_params;  // per boundary-loop vertex
  int sweeps = 0;
  PolygonalCurve curve;
  SolverConfig config;
};

SolveResult solve_plateau(SpacePtr space, const PolygonalCurve& curve, const SolverConfig& cfg);

// p-radial extension: domain ray at angle phi goes at constant speed from p to
// the curve point with arc-length parameter phi / 2pi.
MeshMap radial_cone_fill(SpacePtr space, const Point& p, const PolygonalCurve& curve, int rings);

// Doubles the ring count `levels` times, interpolating images along
// geodesics, and relaxes again after each doubling.
SolveResult refine_and_resolve(const SolveResult& result, int levels);

// Weighted Frechet mean of the curve vertices (weights = half adjacent edge lengths).
Point curve_center(const MetricSpace& space, const PolygonalCurve& curve);

}  // namespace plateau
