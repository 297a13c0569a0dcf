#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fasttrack/geometry.hpp"
#include "fasttrack/motion.hpp"

namespace fasttrack {

enum class RegionKind { one_way_road, two_way_road, crosswalk };

RegionKind region_kind_from_string(const std::string& s);
std::string to_string(RegionKind kind);

/// A quadrilateral scene zone with entrance/exit edges defining the motion
/// cone. An empty class set admits every class.
struct Region {
  std::string id;
  RegionKind kind = RegionKind::one_way_road;
  Quadrilateral quad;
  int entrance_edge = 0;  // edge index 0-3
  int exit_edge = 2;
  std::set<int> applicable_classes;  // empty = all

  bool admits(int class_id) const {
    return applicable_classes.empty() || applicable_classes.count(class_id) > 0;
  }
  bool valid() const {
    return quad.valid() && entrance_edge != exit_edge &&
           entrance_edge >= 0 && entrance_edge < 4 &&
           exit_edge >= 0 && exit_edge < 4;
  }
};

struct EnvironmentMap {
  std::vector<Region> regions;
  double image_width = 0.0;
  double image_height = 0.0;

  bool empty() const { return regions.empty(); }
};

/// Cone opening angle from the crossing diagonals of the entrance and exit
/// edges. Endpoints are paired so the two diagonals cross; if the declared
/// vertex order yields non-crossing segments the exit endpoints are swapped.
/// Throws std::runtime_error on a zero-length diagonal.
double cone_opening_angle(const Region& r);

/// Direction of the entrance-edge midpoint -> exit-edge midpoint vector.
/// Throws std::runtime_error when the midpoints coincide.
double dominant_flow(const Region& r);

/// First region (declaration order) containing p that admits class_id.
const Region* region_lookup(const EnvironmentMap& m, const Point& p, int class_id);

/// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

/// Rotate the displacement onto the nearest cone boundary when its direction
/// falls outside mu +/- theta/2; magnitude is preserved. Two-way regions test
/// both the mu and mu+pi cones and the nearest one wins. Zero displacement is
/// returned unchanged.
Point project_to_cone(const Point& displacement, double mu, double theta,
                      bool two_way = false);

/// Move the state center to the nearest point on the region boundary (plus a
/// 1e-6 inward nudge) when it lies outside; everything else is untouched.
KalmanState clamp_to_roi(const KalmanState& s, const Region& r);

/// Load the environment map JSON document. Throws on malformed input.
EnvironmentMap load_map(const std::string& path);
EnvironmentMap parse_map(const std::string& json_text);
std::string map_to_json(const EnvironmentMap& m);

}  // namespace fasttrack
