#pragma once

#include <map>
#include <string>
#include <vector>

#include "fasttrack/geometry.hpp"

namespace fasttrack {

/// One detector output box for a single frame.
struct Detection {
  int frame = 1;  // 1-based
  Box box;
  double confidence = 0.0;  // clamped to [0,1] on ingest
  int class_id = 1;
};

/// One output row: the unit of result files and metric evaluation.
struct TrackRecord {
  int frame = 1;  // 1-based
  int id = 0;
  Box box;
  double confidence = 0.0;
  int class_id = 1;
};

/// Per-frame labeled ground-truth box.
struct GroundTruthBox {
  int frame = 1;
  int id = 0;
  Box box;
  int class_id = 1;
  double visibility = 1.0;
};

using DetectionStream = std::map<int, std::vector<Detection>>;
using GroundTruthStream = std::map<int, std::vector<GroundTruthBox>>;

/// Parse a MOTChallenge detection CSV (`frame,id,left,top,w,h,conf[,class,...]`)
/// grouped by frame. Rows with nonpositive extents are skipped and reported in
/// `diagnostics` (when given); malformed rows raise ValidationError naming the
/// line. A missing file raises IoError.
DetectionStream parse_detections(const std::string& path,
                                 std::vector<std::string>* diagnostics = nullptr);
DetectionStream parse_detections_text(const std::string& text,
                                      std::vector<std::string>* diagnostics = nullptr);

/// Parse a MOTChallenge ground-truth CSV; rows with flag column 0 are excluded.
GroundTruthStream parse_ground_truth(const std::string& path,
                                     std::vector<std::string>* diagnostics = nullptr);
GroundTruthStream parse_ground_truth_text(const std::string& text,
                                          std::vector<std::string>* diagnostics = nullptr);

/// Parse a result file back into records.
std::vector<TrackRecord> parse_results(const std::string& path);
std::vector<TrackRecord> parse_results_text(const std::string& text);

/// Byte-deterministic result rows `frame,id,l,t,w,h,conf,-1,-1,-1` with
/// 2-decimal coordinates. Records are written frame-sorted, id-sorted.
std::string format_results(std::vector<TrackRecord> records);
void write_results(const std::vector<TrackRecord>& records, const std::string& path);

/// Ground-truth rows `frame,id,l,t,w,h,1,class,vis`.
std::string format_ground_truth(std::vector<GroundTruthBox> rows);
void write_ground_truth(const std::vector<GroundTruthBox>& rows, const std::string& path);

/// Detection rows `frame,-1,l,t,w,h,conf,class,-1,-1`.
std::string format_detections(std::vector<Detection> rows);
void write_detections(const std::vector<Detection>& rows, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fasttrack
