#pragma once

#include <map>
#include <set>
#include <string>

namespace fasttrack {

/// Default class-name table covering the common traffic classes; the map and
/// config files may reference classes by these names or by raw ids.
inline const std::map<std::string, int>& default_class_table() {
  static const std::map<std::string, int> table = {
      {"pedestrian", 1}, {"car", 2}, {"truck", 3}, {"bus", 4}, {"motorcycle", 5},
  };
  return table;
}

inline constexpr int kClassPedestrian = 1;
inline constexpr int kClassCar = 2;

inline std::set<int> default_vehicle_classes() { return {2, 3, 4, 5}; }

}  // namespace fasttrack
