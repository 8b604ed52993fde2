#include "plateau/space_io.hpp"

#include <fstream>
#include <sstream>

#include "plateau/cone_space.hpp"
#include "plateau/euclidean_space.hpp"
#include "plateau/flat_complex.hpp"

namespace plateau {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::SceneParseError, msg); }

double cone_angle_of(const Json& j) {
  if (j.contains("cone_angle")) return j.at("cone_angle").get<double>();
  if (j.contains("cone_angle_over_pi")) return M_PI * j.at("cone_angle_over_pi").get<double>();
  bad("cone space needs cone_angle");
}

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    bad(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << j.dump(2) << "\n";
}

SpacePtr space_from_json(const Json& j) {
  return guarded("space", [&]() -> SpacePtr {
    const std::string kind = j.at("kind").get<std::string>();
    SpacePtr out;
    if (kind == "euclidean") {
      out = std::make_shared<EuclideanSpace>(j.value("dimension", 2));
    } else if (kind == "euclidean_cone") {
      out = ConeSpace::euclidean_cone(cone_angle_of(j));
    } else if (kind == "glued_planes") {
      out = ConeSpace::glued_planes(cone_angle_of(j));
    } else if (kind == "polyhedral_complex") {
      std::vector<std::vector<Vec2>> charts;
      for (const Json& c : j.at("charts")) {
        std::vector<Vec2> poly;
        for (const Json& v : c) poly.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        charts.push_back(std::move(poly));
      }
      std::vector<FlatComplex::Gluing> gl;
      for (const Json& g : j.value("gluings", Json::array()))
        gl.push_back({g.at(0).get<int>(), g.at(1).get<int>(), g.at(2).get<int>(), g.at(3).get<int>()});
      out = std::make_shared<FlatComplex>(std::move(charts), std::move(gl), j.value("subdivisions", 3));
    } else {
      bad("unknown space kind '" + kind + "'");
    }
    if (j.contains("length_scale"))
      std::const_pointer_cast<MetricSpace>(out)->set_length_scale(j.at("length_scale").get<double>());
    return out;
  });
}

Json space_to_json(const MetricSpace& space) {
  Json j;
  switch (space.kind()) {
    case SpaceKind::Euclidean:
      j = {{"kind", "euclidean"}, {"dimension", space.dimension()}};
      break;
    case SpaceKind::EuclideanCone:
    case SpaceKind::GluedPlanes: {
      const auto& c = dynamic_cast<const ConeSpace&>(space);
      j = {{"kind", space.kind() == SpaceKind::EuclideanCone ? "euclidean_cone" : "glued_planes"},
           {"cone_angle", c.cone_angle()}};
      break;
    }
    case SpaceKind::PolyhedralComplex: {
      const auto& f = dynamic_cast<const FlatComplex&>(space);
      Json charts = Json::array(), gl = Json::array();
      for (const auto& c : f.charts()) {
        Json poly = Json::array();
        for (const Vec2& v : c) poly.push_back({v.x(), v.y()});
        charts.push_back(poly);
      }
      for (const auto& g : f.gluings()) gl.push_back({g.chart_a, g.edge_a, g.chart_b, g.edge_b});
      j = {{"kind", "polyhedral_complex"}, {"charts", charts}, {"gluings", gl}};
      break;
    }
    case SpaceKind::FunnelExtension:
      j = {{"kind", "funnel_extension"}, {"description", space.describe()}};
      break;
  }
  return j;
}

Point point_from_json(const MetricSpace& space, const Json& j) {
  Point p = guarded("point", [&]() -> Point {
    if (j.is_array()) {
      if (space.kind() != SpaceKind::Euclidean) bad("raw coordinates need a Euclidean space");
      Coords c(static_cast<int>(j.size()));
      for (std::size_t i = 0; i < j.size(); ++i) c(static_cast<int>(i)) = j[i].get<double>();
      return Point(0, c);
    }
    if (j.contains("sheet") || j.contains("angle")) {
      const auto* cone = dynamic_cast<const ConeSpace*>(&space);
      if (!cone) bad("sheet/angle points need a cone space");
      if (j.contains("sheet"))
        return cone->plane_point(j.at("sheet").get<int>(), j.at("xy").at(0).get<double>(),
                                 j.at("xy").at(1).get<double>());
      return cone->at_angle(j.at("angle").get<double>(), j.at("r").get<double>());
    }
    const Json& cs = j.at("coords");
    Coords c(static_cast<int>(cs.size()));
    for (std::size_t i = 0; i < cs.size(); ++i) c(static_cast<int>(i)) = cs[i].get<double>();
    return Point(j.value("chart", 0), c);
  });
  space.validate(p);
  return p;
}

Json point_to_json(const Point& p) {
  Json c = Json::array();
  for (int i = 0; i < p.dim(); ++i) c.push_back(p.coords(i));
  return {{"chart", p.chart}, {"coords", c}};
}

PolygonalCurve curve_from_json(const MetricSpace& space, const Json& j) {
  return guarded("curve", [&]() -> PolygonalCurve {
    if (j.contains("generator")) {
      const Json& g = j.at("generator");
      const std::string type = g.at("type").get<std::string>();
      const int n = g.value("n", 64);
      if (type == "circle") return regular_polygon(space, n, g.value("radius", 1.0));
      if (type == "cone_circle") return cone_circle(space, n, g.value("radius", 1.0));
      if (type == "random_polygon")
        return random_polygon(space, n, g.value("seed", std::uint64_t{1}), g.value("wobble", 0.35));
      if (type == "trefoil") return inscribe(space, trefoil_sampler(space), n);
      if (type == "example52") return example52_curve(space);
      bad("unknown curve generator '" + type + "'");
    }
    std::vector<Point> v;
    for (const Json& p : j.at("vertices")) v.push_back(point_from_json(space, p));
    if (!j.value("closed", true)) bad("curves must be closed");
    if (v.size() < 3) throw Error(ErrorCode::InvalidCurve, "a closed polygon needs at least three vertices");
    return make_curve(space, std::move(v), true);
  });
}

Json curve_to_json(const PolygonalCurve& c) {
  Json v = Json::array();
  for (const Point& p : c.vertices) v.push_back(point_to_json(p));
  return {{"closed", c.closed}, {"vertices", v}};
}

}  // namespace plateau
