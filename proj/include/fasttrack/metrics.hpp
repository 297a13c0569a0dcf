#pragma once

#include <map>
#include <string>
#include <vector>

#include "fasttrack/mot_io.hpp"

namespace fasttrack {

struct EvalReport {
  double mota = 0.0;
  long fp = 0;
  long fn_ = 0;
  long idsw = 0;
  double idf1 = 0.0;
  long gt_total = 0;
  /// per-frame (frame, gt id, pred id) match trace
  std::vector<std::tuple<int, int, int>> match_trace;

  std::string to_text() const;
  std::string to_json() const;
};

struct FrameMatchResult {
  std::vector<std::pair<int, int>> matches;  // (gt index, pred index)
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_pred;
};

/// CLEAR per-frame correspondence: previous-frame gt<->pred pairings are kept
/// while still above the IoU threshold, then the remainder is resolved by
/// minimum-cost assignment on 1 - IoU.
FrameMatchResult match_frame(const std::vector<GroundTruthBox>& gt_boxes,
                             const std::vector<TrackRecord>& pred_boxes,
                             double iou_threshold,
                             const std::map<int, int>& previous_gt_to_pred);

/// CLEAR accumulation (MOTA, FP, FN, IDSW) over loaded streams.
EvalReport clear_metrics(const GroundTruthStream& gt, const std::vector<TrackRecord>& res,
                         double iou_threshold = 0.5);

/// Global identity matching F1: 2*IDTP / (2*IDTP + IDFP + IDFN).
double idf1(const GroundTruthStream& gt, const std::vector<TrackRecord>& res,
            double iou_threshold = 0.5);

/// Full report (CLEAR + IDF1) from files.
EvalReport evaluate_files(const std::string& gt_path, const std::string& res_path,
                          double iou_threshold = 0.5);
EvalReport evaluate(const GroundTruthStream& gt, const std::vector<TrackRecord>& res,
                    double iou_threshold = 0.5);

}  // namespace fasttrack
