#pragma once

#include <string>
#include <vector>

#include "fasttrack/environment.hpp"
#include "fasttrack/mot_io.hpp"

namespace fasttrack {

enum class ScenarioName { crossing_occlusion, platoon, intersection_flow, dropout };

ScenarioName scenario_from_string(const std::string& s);
std::string to_string(ScenarioName name);

struct OcclusionWindow {
  int occluder_id = 0;
  int occluded_id = 0;
  int start_frame = 1;  // inclusive
  int end_frame = 1;    // inclusive
};

/// Seeded synthetic traffic-scene description.
struct ScenarioSpec {
  ScenarioName name = ScenarioName::crossing_occlusion;
  int n_objects = 2;
  int n_frames = 60;
  double image_width = 1920.0;
  double image_height = 1080.0;
  /// Detection-suppression windows (confidence-decay windows for dropout).
  /// Empty = scenario default.
  std::vector<OcclusionWindow> occlusions;
  double center_jitter = 0.5;   // detection center noise std, pixels
  double extent_jitter = 0.5;   // detection extent noise std, pixels
  unsigned long long seed = 1;
};

struct GeneratedScenario {
  std::vector<Detection> detections;
  std::vector<GroundTruthBox> ground_truth;
  EnvironmentMap map;
};

/// Deterministically generate gt trajectories, jittered detections with
/// scripted occlusions, and a lane-consistent environment map. Throws
/// ValidationError when an occlusion window's geometry cannot reach
/// coverage >= 0.7 at its start frame.
GeneratedScenario generate(const ScenarioSpec& spec);

/// Generate and write det.txt, gt.txt and map.json into out_dir.
void generate_files(const ScenarioSpec& spec, const std::string& out_dir);

/// Deterministic spec family cycling through all scenario names with
/// densities growing up to 50 objects per frame.
std::vector<ScenarioSpec> scenario_suite(unsigned long long seed_base, int count);

}  // namespace fasttrack
