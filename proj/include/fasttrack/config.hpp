#pragma once

#include <map>
#include <string>

#include "fasttrack/motion.hpp"

namespace fasttrack {

/// Every threshold of the per-frame pipeline, with the published defaults.
struct TrackerConfig {
  double tau_high = 0.65;       // high-confidence threshold (inclusive)
  double tau_low = 0.2;         // low-confidence floor (inclusive)
  double iou_stage1 = 0.5;      // stage-1 association IoU gate
  double iou_stage2 = 0.6;      // stage-2 association IoU gate (stricter)
  double cp_min = 0.7;          // coverage threshold for occlusion
  double k_init = 0.8;          // max IoU vs live tracks to spawn a tracklet
  int t_occ = 30;               // occlusion tolerance window, frames
  int direction_window_n = 5;   // displacement window for motion direction
  double ema_alpha = 0.8;       // extent-measurement smoothing momentum
  double nms_iou = 0.75;        // ingest-time NMS threshold
  bool nms_enabled = false;     // published detection files are pre-suppressed
  int grace_frames = 0;         // extra survival for unmatched active tracks

  std::map<int, ClassMotionProfile> class_profiles;

  TrackerConfig();

  const ClassMotionProfile& profile_for(int class_id) const;
  /// Throws ValidationError naming the offending key.
  void validate() const;
};

/// Parse a tracker-config JSON document; absent keys keep their defaults.
TrackerConfig parse_config(const std::string& json_text);
TrackerConfig load_config(const std::string& path);

}  // namespace fasttrack
