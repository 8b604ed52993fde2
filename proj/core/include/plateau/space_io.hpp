#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "plateau/curve.hpp"
#include "plateau/space.hpp"

namespace plateau {

using Json = nlohmann::json;

// Reads a JSON file; SceneParseError on missing files or bad syntax.
Json load_json(const std::string& path);
// Writes with two-space indent and a trailing newline.
void save_json(const std::string& path, const Json& j);

// Space description:
//   {"kind": "euclidean", "dimension": n}
//   {"kind": "euclidean_cone", "cone_angle": a}        (or "cone_angle_over_pi")
//   {"kind": "glued_planes", "cone_angle": a}
//   {"kind": "polyhedral_complex", "charts": [[[x, y], ...], ...],
//    "gluings": [[chart_a, edge_a, chart_b, edge_b], ...], "subdivisions": 3}
SpacePtr space_from_json(const Json& j);
Json space_to_json(const MetricSpace& space);

// Point: {"chart": c, "coords": [...]} everywhere; [x, y, ...] in Euclidean
// spaces; {"sheet": k, "xy": [x, y]} or {"angle": phi, "r": r} in cone spaces.
Point point_from_json(const MetricSpace& space, const Json& j);
Json point_to_json(const Point& p);

// Curve: {"vertices": [point, ...]} or {"generator": {"type": ..., ...}} with
// types circle (n, radius), cone_circle (n, radius), random_polygon (n, seed,
// wobble), trefoil (n), example52.
PolygonalCurve curve_from_json(const MetricSpace& space, const Json& j);
Json curve_to_json(const PolygonalCurve& c);

}  // namespace plateau
