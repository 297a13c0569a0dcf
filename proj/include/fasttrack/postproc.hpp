#pragma once

#include <vector>

#include "fasttrack/mot_io.hpp"

namespace fasttrack {

struct SmoothParams {
  int max_gap = 20;            // longest interpolated gap, frames
  double length_scale = 10.0;  // squared-exponential kernel scale, frames
  double noise = 2.0;          // observation noise std, pixels
};

/// Gaussian-process regression (squared-exponential kernel over the frame
/// index, independent per coordinate) of one identity's boxes. Observed
/// frames are smoothed in place and gaps of at most max_gap frames are
/// filled; longer gaps stay open. Throws std::runtime_error on a singular
/// kernel system.
std::vector<TrackRecord> gsp_smooth(const std::vector<TrackRecord>& track,
                                    const SmoothParams& params);

/// Smooth every identity of a result set.
std::vector<TrackRecord> gsp_smooth_all(const std::vector<TrackRecord>& records,
                                        const SmoothParams& params);

struct LinkParams {
  int max_gap = 15;        // temporal gate, frames
  double max_dist = 70.0;  // endpoint distance gate, pixels
  double min_score = 0.5;  // motion-consistency acceptance threshold
};

struct LinkCandidate {
  int earlier_id = 0;
  int later_id = 0;
  int gap = 0;
  double endpoint_distance = 0.0;
  double score = 0.0;
};

/// Gated candidate pairs between same-class tracklets, scored by motion
/// consistency: exp(-|predicted crossing point - actual start| / max_dist)
/// * exp(-gap / max_gap).
std::vector<LinkCandidate> link_candidates(const std::vector<TrackRecord>& records,
                                           const LinkParams& params);

/// Greedy highest-score-first linking; the later tracklet inherits the
/// earlier id. Pure relabeling: box count is preserved and (frame, id)
/// pairs stay unique.
std::vector<TrackRecord> link_tracklets(const std::vector<TrackRecord>& records,
                                        const LinkParams& params);

}  // namespace fasttrack
