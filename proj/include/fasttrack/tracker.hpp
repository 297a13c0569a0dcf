#pragma once

#include <deque>
#include <vector>

#include "fasttrack/association.hpp"
#include "fasttrack/config.hpp"
#include "fasttrack/environment.hpp"
#include "fasttrack/mot_io.hpp"

namespace fasttrack {

enum class TrackStatus { active, occluded };

/// One tracked identity: filter state, class, status and bookkeeping ages.
struct Tracklet {
  int id = 0;
  int class_id = 1;
  KalmanState state;
  TrackStatus status = TrackStatus::active;
  int occ_age = 0;                                 // frames occluded so far
  int miss_age = 0;                                // frames since last match
  std::vector<std::pair<int, Point>> history;      // (frame, center) ring
  double last_confidence = 0.0;
  int last_update_frame = 0;
};

struct FrameOutput {
  int frame = 0;
  std::vector<TrackRecord> records;  // active tracklets only, id-sorted
};

/// Split detections into the high band (conf >= tau_high) and the low band
/// (tau_low <= conf < tau_high); everything below tau_low is discarded.
std::pair<std::vector<Detection>, std::vector<Detection>> classify_detections(
    const std::vector<Detection>& dets, const TrackerConfig& cfg);

/// Greedy confidence-ordered NMS at the configured IoU, per class.
std::vector<Detection> suppress_detections(std::vector<Detection> dets, double nms_iou);

/// Indices of leftover boxes whose coverage against any matched box meets
/// cp_min (inclusive).
std::vector<int> detect_occlusions(const std::vector<Box>& leftovers,
                                   const std::vector<Box>& matched, double cp_min);

/// Online per-frame pipeline: prediction with map constraints, two-stage
/// confidence-cascaded association, coverage-based occlusion handling,
/// deletion, and overlap-gated initialization. Single-threaded per instance.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg, EnvironmentMap map = {});

  /// Process one frame; frames must be strictly increasing.
  FrameOutput step(int frame, const std::vector<Detection>& dets);

  const std::vector<Tracklet>& tracklets() const { return tracks_; }
  int next_id() const { return next_id_; }

 private:
  TrackerConfig cfg_;
  EnvironmentMap map_;
  std::vector<Tracklet> tracks_;
  int next_id_ = 1;
  int last_frame_ = 0;

  void predict_and_constrain(int frame);
  std::vector<int> match_stage(const std::vector<int>& candidates,
                               const std::vector<Detection>& dets, double min_iou,
                               int frame, std::vector<int>* matched_det_indices);
  void absorb_detection(Tracklet& t, const Detection& d, int frame);
};

/// Run a full detection stream through a fresh tracker.
std::vector<TrackRecord> run_sequence(const DetectionStream& det_stream,
                                      const EnvironmentMap& map,
                                      const TrackerConfig& cfg);

}  // namespace fasttrack
