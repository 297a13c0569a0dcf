#include "fasttrack/metrics.hpp"

#include <algorithm>
#include <set>

#include "fasttrack/association.hpp"
#include "json.hpp"

namespace fasttrack {

FrameMatchResult match_frame(const std::vector<GroundTruthBox>& gt_boxes,
                             const std::vector<TrackRecord>& pred_boxes,
                             double iou_threshold,
                             const std::map<int, int>& previous_gt_to_pred) {
  FrameMatchResult result;
  std::vector<char> gt_done(gt_boxes.size(), 0);
  std::vector<char> pred_done(pred_boxes.size(), 0);

  // continuity: keep last frame's pairing while still above threshold
  for (size_t i = 0; i < gt_boxes.size(); ++i) {
    const auto it = previous_gt_to_pred.find(gt_boxes[i].id);
    if (it == previous_gt_to_pred.end()) continue;
    for (size_t j = 0; j < pred_boxes.size(); ++j) {
      if (pred_done[j] || pred_boxes[j].id != it->second) continue;
      if (iou(gt_boxes[i].box, pred_boxes[j].box) >= iou_threshold) {
        result.matches.emplace_back(static_cast<int>(i), static_cast<int>(j));
        gt_done[i] = 1;
        pred_done[j] = 1;
      }
      break;
    }
  }

  // remainder: minimum-cost assignment on 1 - IoU, gated at the threshold
  std::vector<int> gt_rest, pred_rest;
  for (size_t i = 0; i < gt_boxes.size(); ++i)
    if (!gt_done[i]) gt_rest.push_back(static_cast<int>(i));
  for (size_t j = 0; j < pred_boxes.size(); ++j)
    if (!pred_done[j]) pred_rest.push_back(static_cast<int>(j));

  if (!gt_rest.empty() && !pred_rest.empty()) {
    Eigen::MatrixXd costs(gt_rest.size(), pred_rest.size());
    for (size_t a = 0; a < gt_rest.size(); ++a)
      for (size_t b = 0; b < pred_rest.size(); ++b)
        costs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            1.0 - iou(gt_boxes[static_cast<size_t>(gt_rest[a])].box,
                      pred_boxes[static_cast<size_t>(pred_rest[b])].box);
    const AssociationResult ar = solve_assignment(costs, 1.0 - iou_threshold);
    for (const auto& [a, b] : ar.matches) {
      result.matches.emplace_back(gt_rest[static_cast<size_t>(a)],
                                  pred_rest[static_cast<size_t>(b)]);
      gt_done[static_cast<size_t>(gt_rest[static_cast<size_t>(a)])] = 1;
      pred_done[static_cast<size_t>(pred_rest[static_cast<size_t>(b)])] = 1;
    }
  }

  for (size_t i = 0; i < gt_boxes.size(); ++i)
    if (!gt_done[i]) result.unmatched_gt.push_back(static_cast<int>(i));
  for (size_t j = 0; j < pred_boxes.size(); ++j)
    if (!pred_done[j]) result.unmatched_pred.push_back(static_cast<int>(j));
  std::sort(result.matches.begin(), result.matches.end());
  return result;
}

namespace {

std::map<int, std::vector<TrackRecord>> group_by_frame(const std::vector<TrackRecord>& res) {
  std::map<int, std::vector<TrackRecord>> out;
  for (const TrackRecord& r : res) out[r.frame].push_back(r);
  return out;
}

}  // namespace

EvalReport clear_metrics(const GroundTruthStream& gt, const std::vector<TrackRecord>& res,
                         double iou_threshold) {
  EvalReport report;
  const std::map<int, std::vector<TrackRecord>> res_by_frame = group_by_frame(res);

  std::set<int> frames;
  for (const auto& [f, boxes] : gt) frames.insert(f);
  for (const auto& [f, boxes] : res_by_frame) frames.insert(f);

  static const std::vector<GroundTruthBox> kNoGt;
  static const std::vector<TrackRecord> kNoPred;
  std::map<int, int> prev_map;        // gt id -> pred id, previous frame
  std::map<int, int> last_matched;    // gt id -> pred id, last matched frame ever

  for (int frame : frames) {
    const auto git = gt.find(frame);
    const auto rit = res_by_frame.find(frame);
    const auto& gt_boxes = git != gt.end() ? git->second : kNoGt;
    const auto& pred_boxes = rit != res_by_frame.end() ? rit->second : kNoPred;
    report.gt_total += static_cast<long>(gt_boxes.size());

    const FrameMatchResult m = match_frame(gt_boxes, pred_boxes, iou_threshold, prev_map);
    report.fp += static_cast<long>(m.unmatched_pred.size());
    report.fn_ += static_cast<long>(m.unmatched_gt.size());

    std::map<int, int> current;
    for (const auto& [gi, pj] : m.matches) {
      const int gid = gt_boxes[static_cast<size_t>(gi)].id;
      const int pid = pred_boxes[static_cast<size_t>(pj)].id;
      const auto lit = last_matched.find(gid);
      if (lit != last_matched.end() && lit->second != pid) report.idsw += 1;
      last_matched[gid] = pid;
      current[gid] = pid;
      report.match_trace.emplace_back(frame, gid, pid);
    }
    prev_map = std::move(current);
  }

  if (report.gt_total > 0) {
    report.mota =
        1.0 - static_cast<double>(report.fp + report.fn_ + report.idsw) /
                  static_cast<double>(report.gt_total);
  } else {
    report.mota = (report.fp + report.idsw == 0) ? 1.0 : 0.0;
  }
  return report;
}

double idf1(const GroundTruthStream& gt, const std::vector<TrackRecord>& res,
            double iou_threshold) {
  const std::map<int, std::vector<TrackRecord>> res_by_frame = group_by_frame(res);

  std::map<int, long> gt_len, pred_len;
  std::map<std::pair<int, int>, long> overlap;
  for (const auto& [frame, boxes] : gt)
    for (const GroundTruthBox& g : boxes) gt_len[g.id] += 1;
  for (const TrackRecord& r : res) pred_len[r.id] += 1;

  for (const auto& [frame, gt_boxes] : gt) {
    const auto rit = res_by_frame.find(frame);
    if (rit == res_by_frame.end()) continue;
    for (const GroundTruthBox& g : gt_boxes)
      for (const TrackRecord& p : rit->second)
        if (iou(g.box, p.box) >= iou_threshold) overlap[{g.id, p.id}] += 1;
  }

  long gt_frames_total = 0, pred_frames_total = 0;
  for (const auto& [id, n] : gt_len) gt_frames_total += n;
  for (const auto& [id, n] : pred_len) pred_frames_total += n;
  if (gt_frames_total == 0 && pred_frames_total == 0) return 1.0;
  if (gt_frames_total == 0 || pred_frames_total == 0) return 0.0;

  std::vector<int> gt_ids, pred_ids;
  for (const auto& [id, n] : gt_len) gt_ids.push_back(id);
  for (const auto& [id, n] : pred_len) pred_ids.push_back(id);

  // maximize total identity overlap via min-cost assignment
  const double cmax = static_cast<double>(std::max(gt_frames_total, pred_frames_total));
  Eigen::MatrixXd costs(gt_ids.size(), pred_ids.size());
  for (size_t a = 0; a < gt_ids.size(); ++a) {
    for (size_t b = 0; b < pred_ids.size(); ++b) {
      const auto it = overlap.find({gt_ids[a], pred_ids[b]});
      const double m = it != overlap.end() ? static_cast<double>(it->second) : 0.0;
      costs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = cmax - m;
    }
  }
  const AssociationResult ar = solve_assignment(costs, cmax);
  long idtp = 0;
  for (const auto& [a, b] : ar.matches) {
    const auto it = overlap.find({gt_ids[static_cast<size_t>(a)],
                                  pred_ids[static_cast<size_t>(b)]});
    if (it != overlap.end()) idtp += it->second;
  }
  const long idfn = gt_frames_total - idtp;
  const long idfp = pred_frames_total - idtp;
  if (idtp == 0) return 0.0;
  return 2.0 * static_cast<double>(idtp) /
         static_cast<double>(2 * idtp + idfp + idfn);
}

EvalReport evaluate(const GroundTruthStream& gt, const std::vector<TrackRecord>& res,
                    double iou_threshold) {
  EvalReport report = clear_metrics(gt, res, iou_threshold);
  report.idf1 = idf1(gt, res, iou_threshold);
  return report;
}

EvalReport evaluate_files(const std::string& gt_path, const std::string& res_path,
                          double iou_threshold) {
  return evaluate(parse_ground_truth(gt_path), parse_results(res_path), iou_threshold);
}

std::string EvalReport::to_text() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "MOTA     %8.4f\n"
                "IDF1     %8.4f\n"
                "FP       %8ld\n"
                "FN       %8ld\n"
                "IDSW     %8ld\n"
                "GT       %8ld\n"
                "HOTA     not computed (out of scope for this harness)\n",
                mota, idf1, fp, fn_, idsw, gt_total);
  return buf;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["mota"] = mota;
  j["fp"] = fp;
  j["fn"] = fn_;
  j["idsw"] = idsw;
  j["idf1"] = idf1;
  j["gt_total"] = gt_total;
  return j.dump(2) + "\n";
}

}  // namespace fasttrack
