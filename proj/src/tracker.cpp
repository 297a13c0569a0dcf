#include "fasttrack/tracker.hpp"

#include <algorithm>

#include "fasttrack/errors.hpp"

namespace fasttrack {

std::pair<std::vector<Detection>, std::vector<Detection>> classify_detections(
    const std::vector<Detection>& dets, const TrackerConfig& cfg) {
  std::vector<Detection> high, low;
  for (const Detection& d : dets) {
    if (d.confidence >= cfg.tau_high) {
      high.push_back(d);
    } else if (d.confidence >= cfg.tau_low) {
      low.push_back(d);
    }
  }
  return {std::move(high), std::move(low)};
}

std::vector<Detection> suppress_detections(std::vector<Detection> dets, double nms_iou) {
  std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
    return a.confidence > b.confidence;
  });
  std::vector<Detection> kept;
  for (const Detection& d : dets) {
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (k.class_id == d.class_id && iou(k.box, d.box) >= nms_iou) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

Tracker::Tracker(TrackerConfig cfg, EnvironmentMap map)
    : cfg_(std::move(cfg)), map_(std::move(map)) {
  cfg_.validate();
}

void Tracker::predict_and_constrain(int frame) {
  for (Tracklet& t : tracks_) {
    const ClassMotionProfile& profile = cfg_.profile_for(t.class_id);
    const Point before = t.state.center();
    t.state = predict(t.state, profile);
    if (map_.empty()) continue;
    const Region* region = region_lookup(map_, t.state.center(), t.class_id);
    // a prediction that stepped out of its region is still that region's
    // problem: fall back to the pre-prediction center
    if (region == nullptr) region = region_lookup(map_, before, t.class_id);
    if (region == nullptr) continue;
    // cone constraint needs a direction reference N frames back
    const int target = frame - cfg_.direction_window_n;
    const std::pair<int, Point>* ref = nullptr;
    for (const auto& entry : t.history) {
      if (entry.first > target) break;
      ref = &entry;
    }
    if (ref != nullptr) {
      const Point d = t.state.center() - ref->second;
      if (d.norm() > 0.0) {
        const double mu = dominant_flow(*region);
        const double theta = cone_opening_angle(*region);
        const Point constrained =
            project_to_cone(d, mu, theta, region->kind == RegionKind::two_way_road);
        t.state.set_center(ref->second + constrained);
      }
    }
    t.state = clamp_to_roi(t.state, *region);
  }
}

void Tracker::absorb_detection(Tracklet& t, const Detection& d, int frame) {
  if (t.status == TrackStatus::occluded) {
    // revert to active; re-measure extents, undoing the enlargement
    t.status = TrackStatus::active;
    t.occ_age = 0;
    t.state.mean(2) = d.box.width;
    t.state.mean(3) = d.box.height;
  }
  t.miss_age = 0;
  const ClassMotionProfile& profile = cfg_.profile_for(t.class_id);
  Box z = d.box;
  // extent measurements are EMA-smoothed against the current state
  const double sw = ema(t.state.w(), d.box.width, cfg_.ema_alpha);
  const double sh = ema(t.state.h(), d.box.height, cfg_.ema_alpha);
  z = Box::from_center(d.box.center(), sw, sh);
  t.state = update(t.state, z, profile);
  t.last_confidence = d.confidence;
  t.last_update_frame = frame;
}

std::vector<int> Tracker::match_stage(const std::vector<int>& candidates,
                                      const std::vector<Detection>& dets, double min_iou,
                                      int frame, std::vector<int>* matched_det_indices) {
  std::vector<int> matched;
  if (candidates.empty() || dets.empty()) return matched;
  std::vector<ClassedBox> track_boxes, det_boxes;
  track_boxes.reserve(candidates.size());
  for (int idx : candidates)
    track_boxes.push_back({tracks_[static_cast<size_t>(idx)].state.box(),
                           tracks_[static_cast<size_t>(idx)].class_id});
  det_boxes.reserve(dets.size());
  for (const Detection& d : dets) det_boxes.push_back({d.box, d.class_id});

  const AssociationResult res = associate(track_boxes, det_boxes, min_iou);
  for (const auto& [ti, dj] : res.matches) {
    const int idx = candidates[static_cast<size_t>(ti)];
    absorb_detection(tracks_[static_cast<size_t>(idx)], dets[static_cast<size_t>(dj)], frame);
    matched.push_back(idx);
    if (matched_det_indices) matched_det_indices->push_back(dj);
  }
  return matched;
}

std::vector<int> detect_occlusions(const std::vector<Box>& leftovers,
                                   const std::vector<Box>& matched, double cp_min) {
  std::vector<int> occluded;
  for (size_t i = 0; i < leftovers.size(); ++i) {
    for (const Box& m : matched) {
      if (coverage(leftovers[i], m) >= cp_min) {
        occluded.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return occluded;
}

FrameOutput Tracker::step(int frame, const std::vector<Detection>& dets_in) {
  if (frame <= last_frame_)
    throw ValidationError("tracker: non-monotonic frame index " + std::to_string(frame) +
                          " after " + std::to_string(last_frame_));
  last_frame_ = frame;

  const std::vector<Detection> dets =
      cfg_.nms_enabled ? suppress_detections(dets_in, cfg_.nms_iou) : dets_in;
  auto [d_high, d_low] = classify_detections(dets, cfg_);

  predict_and_constrain(frame);
  std::vector<Box> predicted_boxes;
  predicted_boxes.reserve(tracks_.size());
  for (const Tracklet& t : tracks_) predicted_boxes.push_back(t.state.box());

  // stage 1: every live tracklet (occluded ones included) vs high band
  std::vector<int> all_indices(tracks_.size());
  for (size_t i = 0; i < tracks_.size(); ++i) all_indices[i] = static_cast<int>(i);
  std::vector<int> matched_high_dets;
  std::vector<int> matched1 =
      match_stage(all_indices, d_high, cfg_.iou_stage1, frame, &matched_high_dets);

  // stage 2: leftovers vs low band
  std::vector<int> remaining;
  {
    std::vector<char> is_matched(tracks_.size(), 0);
    for (int idx : matched1) is_matched[static_cast<size_t>(idx)] = 1;
    for (int idx : all_indices)
      if (!is_matched[static_cast<size_t>(idx)]) remaining.push_back(idx);
  }
  std::vector<int> matched2 = match_stage(remaining, d_low, cfg_.iou_stage2, frame, nullptr);

  std::vector<char> matched_mask(tracks_.size(), 0);
  for (int idx : matched1) matched_mask[static_cast<size_t>(idx)] = 1;
  for (int idx : matched2) matched_mask[static_cast<size_t>(idx)] = 1;

  // occlusion handling on leftover tracklets, coverage vs matched predictions
  std::vector<char> doomed(tracks_.size(), 0);
  for (size_t i = 0; i < tracks_.size(); ++i) {
    if (matched_mask[i]) continue;
    Tracklet& t = tracks_[i];
    if (t.status == TrackStatus::occluded) {
      t.occ_age += 1;
      if (t.occ_age > cfg_.t_occ) doomed[i] = 1;
      continue;
    }
    bool covered = false;
    for (size_t j = 0; j < tracks_.size(); ++j) {
      if (!matched_mask[j]) continue;
      if (coverage(predicted_boxes[i], predicted_boxes[j]) >= cfg_.cp_min) {
        covered = true;
        break;
      }
    }
    if (covered) {
      const ClassMotionProfile& profile = cfg_.profile_for(t.class_id);
      t.status = TrackStatus::occluded;
      t.occ_age = 1;
      t.state = dampen_velocity(t.state, profile);
      t.state = enlarge_box(t.state, profile);
    } else {
      t.miss_age += 1;
      if (t.miss_age > cfg_.grace_frames) doomed[i] = 1;
    }
  }

  // deletion
  {
    std::vector<Tracklet> kept;
    kept.reserve(tracks_.size());
    for (size_t i = 0; i < tracks_.size(); ++i)
      if (!doomed[i]) kept.push_back(std::move(tracks_[i]));
    tracks_ = std::move(kept);
  }

  // initialization from unmatched high-confidence detections
  {
    std::vector<char> det_used(d_high.size(), 0);
    for (int dj : matched_high_dets) det_used[static_cast<size_t>(dj)] = 1;
    for (size_t dj = 0; dj < d_high.size(); ++dj) {
      if (det_used[dj]) continue;
      const Detection& d = d_high[dj];
      double max_iou = 0.0;
      for (const Tracklet& t : tracks_)
        max_iou = std::max(max_iou, iou(d.box, t.state.box()));
      if (max_iou < cfg_.k_init) {
        Tracklet t;
        t.id = next_id_++;
        t.class_id = d.class_id;
        t.state = KalmanState::from_box(d.box, cfg_.profile_for(d.class_id));
        t.status = TrackStatus::active;
        t.last_confidence = d.confidence;
        t.last_update_frame = frame;
        tracks_.push_back(std::move(t));
      }
    }
  }

  // history push for direction estimation
  const size_t history_cap = static_cast<size_t>(cfg_.direction_window_n) + 2;
  for (Tracklet& t : tracks_) {
    t.history.emplace_back(frame, t.state.center());
    if (t.history.size() > history_cap)
      t.history.erase(t.history.begin(), t.history.end() - static_cast<long>(history_cap));
  }

  FrameOutput out;
  out.frame = frame;
  std::vector<const Tracklet*> active;
  for (const Tracklet& t : tracks_)
    if (t.status == TrackStatus::active) active.push_back(&t);
  std::sort(active.begin(), active.end(),
            [](const Tracklet* a, const Tracklet* b) { return a->id < b->id; });
  for (const Tracklet* t : active) {
    TrackRecord r;
    r.frame = frame;
    r.id = t->id;
    r.box = t->state.box();
    r.confidence = t->last_confidence;
    r.class_id = t->class_id;
    out.records.push_back(r);
  }
  return out;
}

std::vector<TrackRecord> run_sequence(const DetectionStream& det_stream,
                                      const EnvironmentMap& map,
                                      const TrackerConfig& cfg) {
  std::vector<TrackRecord> records;
  if (det_stream.empty()) return records;
  Tracker tracker(cfg, map);
  const int first = det_stream.begin()->first;
  const int last = det_stream.rbegin()->first;
  static const std::vector<Detection> kNone;
  for (int frame = first; frame <= last; ++frame) {
    const auto it = det_stream.find(frame);
    const FrameOutput out = tracker.step(frame, it != det_stream.end() ? it->second : kNone);
    records.insert(records.end(), out.records.begin(), out.records.end());
  }
  return records;
}

}  // namespace fasttrack
