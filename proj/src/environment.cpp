#include "fasttrack/environment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fasttrack/classes.hpp"
#include "fasttrack/errors.hpp"
#include "json.hpp"

namespace fasttrack {

RegionKind region_kind_from_string(const std::string& s) {
  if (s == "one_way_road") return RegionKind::one_way_road;
  if (s == "two_way_road") return RegionKind::two_way_road;
  if (s == "crosswalk") return RegionKind::crosswalk;
  throw ValidationError("unknown region kind: " + s);
}

std::string to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::one_way_road: return "one_way_road";
    case RegionKind::two_way_road: return "two_way_road";
    case RegionKind::crosswalk: return "crosswalk";
  }
  return "one_way_road";
}

double cone_opening_angle(const Region& r) {
  Point e1 = r.quad.edge_start(r.entrance_edge);
  Point e2 = r.quad.edge_end(r.entrance_edge);
  Point o1 = r.quad.edge_start(r.exit_edge);
  Point o2 = r.quad.edge_end(r.exit_edge);
  // pair endpoints so the diagonals E1->O2 and E2->O1 cross
  if (!segments_intersect(e1, o2, e2, o1)) std::swap(o1, o2);
  const Point d1 = o2 - e1;
  const Point d2 = o1 - e2;
  const double n1 = d1.norm();
  const double n2 = d2.norm();
  if (n1 <= 0.0 || n2 <= 0.0)
    throw std::runtime_error("region " + r.id + ": zero-length cone diagonal");
  const double c = std::clamp(d1.dot(d2) / (n1 * n2), -1.0, 1.0);
  return std::acos(c);
}

double dominant_flow(const Region& r) {
  const Point d = r.quad.edge_midpoint(r.exit_edge) - r.quad.edge_midpoint(r.entrance_edge);
  if (d.norm() <= 0.0)
    throw std::runtime_error("region " + r.id + ": coincident entrance/exit midpoints");
  return std::atan2(d.y(), d.x());
}

const Region* region_lookup(const EnvironmentMap& m, const Point& p, int class_id) {
  for (const Region& r : m.regions) {
    if (r.admits(class_id) && point_in_polygon(p, r.quad)) return &r;
  }
  return nullptr;
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

Point project_to_cone(const Point& displacement, double mu, double theta, bool two_way) {
  const double mag = displacement.norm();
  if (mag == 0.0) return displacement;
  const double phi = std::atan2(displacement.y(), displacement.x());

  double best_center = mu;
  double best_delta = wrap_angle(phi - mu);
  if (two_way) {
    const double delta_rev = wrap_angle(phi - (mu + M_PI));
    if (std::abs(delta_rev) < std::abs(best_delta)) {
      best_center = mu + M_PI;
      best_delta = delta_rev;
    }
  }
  if (std::abs(best_delta) <= theta / 2.0) return displacement;
  const double angle = best_center + std::clamp(best_delta, -theta / 2.0, theta / 2.0);
  return {mag * std::cos(angle), mag * std::sin(angle)};
}

KalmanState clamp_to_roi(const KalmanState& s, const Region& r) {
  const Point c = s.center();
  if (point_in_polygon(c, r.quad)) return s;
  double best_dist = std::numeric_limits<double>::infinity();
  Point best = c;
  for (int i = 0; i < 4; ++i) {
    const Point q = closest_point_on_segment(c, r.quad.edge_start(i), r.quad.edge_end(i));
    const double d = (c - q).norm();
    if (d < best_dist) {
      best_dist = d;
      best = q;
    }
  }
  // nudge off the boundary toward the centroid; at a sharp corner that can
  // step outside again, in which case the boundary point itself (inclusive
  // containment) is the answer
  const Point inward = r.quad.centroid() - best;
  if (inward.norm() > 0.0) {
    const Point nudged = best + 1e-6 * inward.normalized();
    if (point_in_polygon(nudged, r.quad)) best = nudged;
  }
  KalmanState out = s;
  out.set_center(best);
  return out;
}

namespace {

std::set<int> parse_classes(const nlohmann::json& arr) {
  std::set<int> out;
  for (const auto& e : arr) {
    if (e.is_number_integer()) {
      out.insert(e.get<int>());
    } else {
      const auto& table = default_class_table();
      const auto it = table.find(e.get<std::string>());
      if (it == table.end())
        throw ValidationError("unknown class name in map: " + e.get<std::string>());
      out.insert(it->second);
    }
  }
  return out;
}

}  // namespace

EnvironmentMap parse_map(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("map: ") + e.what());
  }
  EnvironmentMap m;
  try {
  if (doc.contains("image_size")) {
    m.image_width = doc["image_size"][0].get<double>();
    m.image_height = doc["image_size"][1].get<double>();
  }
  std::set<std::string> seen_ids;
  for (const auto& jr : doc.value("regions", nlohmann::json::array())) {
    Region r;
    r.id = jr.at("id").get<std::string>();
    if (!seen_ids.insert(r.id).second)
      throw ValidationError("duplicate region id: " + r.id);
    r.kind = region_kind_from_string(jr.at("kind").get<std::string>());
    const auto& verts = jr.at("vertices");
    if (verts.size() != 4)
      throw ValidationError("region " + r.id + ": expected exactly 4 vertices");
    for (size_t i = 0; i < 4; ++i)
      r.quad.vertices[i] = {verts[i][0].get<double>(), verts[i][1].get<double>()};
    r.entrance_edge = jr.at("entrance_edge").get<int>();
    r.exit_edge = jr.at("exit_edge").get<int>();
    if (jr.contains("classes")) {
      r.applicable_classes = parse_classes(jr["classes"]);
    } else if (r.kind == RegionKind::crosswalk) {
      r.applicable_classes = {kClassPedestrian};
    } else {
      r.applicable_classes = default_vehicle_classes();
    }
    if (!r.valid())
      throw ValidationError("region " + r.id + ": invalid quadrilateral or edges");
    m.regions.push_back(std::move(r));
  }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("map: ") + e.what());
  }
  return m;
}

EnvironmentMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open map file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str());
}

std::string map_to_json(const EnvironmentMap& m) {
  nlohmann::json doc;
  doc["image_size"] = {m.image_width, m.image_height};
  doc["regions"] = nlohmann::json::array();
  for (const Region& r : m.regions) {
    nlohmann::json jr;
    jr["id"] = r.id;
    jr["kind"] = to_string(r.kind);
    jr["vertices"] = nlohmann::json::array();
    for (const Point& v : r.quad.vertices) jr["vertices"].push_back({v.x(), v.y()});
    jr["entrance_edge"] = r.entrance_edge;
    jr["exit_edge"] = r.exit_edge;
    jr["classes"] = r.applicable_classes;
    doc["regions"].push_back(std::move(jr));
  }
  return doc.dump(2) + "\n";
}

}  // namespace fasttrack
