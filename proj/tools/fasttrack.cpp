// fasttrack command-line driver: track / eval / synth / smooth / link / overlay.

#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fasttrack/config.hpp"
#include "fasttrack/environment.hpp"
#include "fasttrack/errors.hpp"
#include "fasttrack/metrics.hpp"
#include "fasttrack/mot_io.hpp"
#include "fasttrack/postproc.hpp"
#include "fasttrack/synth.hpp"
#include "fasttrack/tracker.hpp"

namespace {

namespace ft = fasttrack;

struct TrackArgs {
  std::vector<std::string> det_paths;
  std::string config_path;
  std::string map_path;
  std::string out_path;
  int jobs = 1;
  // optional threshold overrides; flag > config file > default
  std::optional<double> tau_high, tau_low, iou_stage1, iou_stage2;
  std::optional<double> cp_min, k_init, ema_alpha, nms_iou;
  std::optional<int> t_occ, direction_window_n, grace_frames;
  bool nms = false;
};

ft::TrackerConfig resolve_config(const TrackArgs& a) {
  ft::TrackerConfig cfg;
  if (!a.config_path.empty()) cfg = ft::load_config(a.config_path);
  if (a.tau_high) cfg.tau_high = *a.tau_high;
  if (a.tau_low) cfg.tau_low = *a.tau_low;
  if (a.iou_stage1) cfg.iou_stage1 = *a.iou_stage1;
  if (a.iou_stage2) cfg.iou_stage2 = *a.iou_stage2;
  if (a.cp_min) cfg.cp_min = *a.cp_min;
  if (a.k_init) cfg.k_init = *a.k_init;
  if (a.ema_alpha) cfg.ema_alpha = *a.ema_alpha;
  if (a.nms_iou) cfg.nms_iou = *a.nms_iou;
  if (a.t_occ) cfg.t_occ = *a.t_occ;
  if (a.direction_window_n) cfg.direction_window_n = *a.direction_window_n;
  if (a.grace_frames) cfg.grace_frames = *a.grace_frames;
  if (a.nms) cfg.nms_enabled = true;
  cfg.validate();
  return cfg;
}

int run_track(const TrackArgs& a) {
  const ft::TrackerConfig cfg = resolve_config(a);
  ft::EnvironmentMap map;
  if (!a.map_path.empty()) map = ft::load_map(a.map_path);

  if (a.det_paths.size() == 1) {
    const ft::DetectionStream dets = ft::parse_detections(a.det_paths.front());
    ft::write_results(ft::run_sequence(dets, map, cfg), a.out_path);
    return 0;
  }

  // several sequences: --out names a directory, one result file per input
  std::filesystem::create_directories(a.out_path);
  std::vector<std::future<void>> pending;
  const size_t width = static_cast<size_t>(std::max(a.jobs, 1));
  for (size_t i = 0; i < a.det_paths.size(); ++i) {
    if (pending.size() >= width) {
      pending.front().get();
      pending.erase(pending.begin());
    }
    pending.push_back(std::async(std::launch::async, [&, i]() {
      const ft::DetectionStream dets = ft::parse_detections(a.det_paths[i]);
      const std::string name = std::filesystem::path(a.det_paths[i]).stem().string();
      ft::write_results(ft::run_sequence(dets, map, cfg),
                        (std::filesystem::path(a.out_path) / (name + "_res.txt")).string());
    }));
  }
  for (auto& f : pending) f.get();
  return 0;
}

int run_overlay(const std::string& res_path, const std::string& gt_path,
                const std::string& out_path) {
  std::string csv = "frame,source,id,cx,cy,w,h\n";
  char buf[160];
  for (const auto& [frame, boxes] : ft::parse_ground_truth(gt_path))
    for (const ft::GroundTruthBox& g : boxes) {
      const ft::Point c = g.box.center();
      std::snprintf(buf, sizeof(buf), "%d,gt,%d,%.2f,%.2f,%.2f,%.2f\n", frame, g.id,
                    c.x(), c.y(), g.box.width, g.box.height);
      csv += buf;
    }
  for (const ft::TrackRecord& r : ft::parse_results(res_path)) {
    const ft::Point c = r.box.center();
    std::snprintf(buf, sizeof(buf), "%d,res,%d,%.2f,%.2f,%.2f,%.2f\n", r.frame, r.id,
                  c.x(), c.y(), r.box.width, r.box.height);
    csv += buf;
  }
  ft::write_text_file(out_path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fasttrack: online multi-object tracking for traffic scenes"};
  app.require_subcommand(1);

  TrackArgs ta;
  CLI::App* track = app.add_subcommand("track", "Run the online tracker over detections");
  track->add_option("--det", ta.det_paths, "Detection file(s), MOTChallenge CSV")
      ->required()
      ->envname("FASTTRACK_DET");
  track->add_option("--config", ta.config_path, "Tracker config JSON")
      ->envname("FASTTRACK_CONFIG");
  track->add_option("--map", ta.map_path, "Environment map JSON")->envname("FASTTRACK_MAP");
  track->add_option("--out", ta.out_path, "Result file (directory with several --det)")
      ->required()
      ->envname("FASTTRACK_OUT");
  track->add_option("--jobs", ta.jobs, "Parallel sequences (default 1)")
      ->envname("FASTTRACK_JOBS");
  track->add_option("--tau-high", ta.tau_high,
                    "High-confidence threshold (default 0.65, config key tau_high)")
      ->envname("FASTTRACK_TAU_HIGH");
  track->add_option("--tau-low", ta.tau_low,
                    "Low-confidence floor (default 0.2, config key tau_low)")
      ->envname("FASTTRACK_TAU_LOW");
  track->add_option("--iou-stage1", ta.iou_stage1,
                    "Stage-1 IoU gate (default 0.5, config key iou_stage1)")
      ->envname("FASTTRACK_IOU_STAGE1");
  track->add_option("--iou-stage2", ta.iou_stage2,
                    "Stage-2 IoU gate (default 0.6, config key iou_stage2)")
      ->envname("FASTTRACK_IOU_STAGE2");
  track->add_option("--cp-min", ta.cp_min,
                    "Occlusion coverage threshold (default 0.7, config key cp_min)")
      ->envname("FASTTRACK_CP_MIN");
  track->add_option("--k-init", ta.k_init,
                    "Init overlap suppression (default 0.8, config key k_init)")
      ->envname("FASTTRACK_K_INIT");
  track->add_option("--t-occ", ta.t_occ,
                    "Occlusion tolerance, frames (default 30, config key t_occ)")
      ->envname("FASTTRACK_T_OCC");
  track->add_option("--direction-window", ta.direction_window_n,
                    "Direction history window, frames (default 5, config key "
                    "direction_window_n)")
      ->envname("FASTTRACK_DIRECTION_WINDOW_N");
  track->add_option("--ema-alpha", ta.ema_alpha,
                    "Extent smoothing momentum (default 0.8, config key ema_alpha)")
      ->envname("FASTTRACK_EMA_ALPHA");
  track->add_option("--nms-iou", ta.nms_iou,
                    "Ingest NMS IoU (default 0.75, config key nms_iou)")
      ->envname("FASTTRACK_NMS_IOU");
  track->add_flag("--nms", ta.nms, "Enable ingest NMS (default off, config key nms_enabled)")
      ->envname("FASTTRACK_NMS");
  track->add_option("--grace-frames", ta.grace_frames,
                    "Unmatched survival, frames (default 0, config key grace_frames)")
      ->envname("FASTTRACK_GRACE_FRAMES");

  std::string eval_gt, eval_res;
  bool eval_json = false;
  double eval_iou = 0.5;
  CLI::App* eval = app.add_subcommand("eval", "Score a result file against ground truth");
  eval->add_option("--gt", eval_gt, "Ground-truth file")->required();
  eval->add_option("--res", eval_res, "Result file")->required();
  eval->add_option("--iou", eval_iou, "Match IoU threshold (default 0.5)");
  eval->add_flag("--json", eval_json, "Emit the report as JSON");

  std::string synth_scenario = "crossing_occlusion", synth_out;
  unsigned long long synth_seed = 1;
  int synth_objects = 0, synth_frames = 0;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
  synth->add_option("--scenario", synth_scenario,
                    "crossing_occlusion | platoon | intersection_flow | dropout")
      ->required();
  synth->add_option("--seed", synth_seed, "Generator seed (default 1)");
  synth->add_option("--out", synth_out, "Output directory (det.txt, gt.txt, map.json)")
      ->required();
  synth->add_option("--objects", synth_objects, "Object count (scenario default if 0)");
  synth->add_option("--frames", synth_frames, "Frame count (default 60)");

  std::string sm_res, sm_out;
  int sm_max_gap = 20;
  double sm_length_scale = 10.0, sm_noise = 2.0;
  CLI::App* smooth = app.add_subcommand("smooth", "Gaussian-process trajectory smoothing");
  smooth->add_option("--res", sm_res, "Result file to smooth")->required();
  smooth->add_option("--out", sm_out, "Smoothed result file")->required();
  smooth->add_option("--max-gap", sm_max_gap, "Longest filled gap, frames (default 20)");
  smooth->add_option("--length-scale", sm_length_scale, "Kernel scale, frames (default 10)");
  smooth->add_option("--noise", sm_noise, "Observation noise std, px (default 2)");

  std::string lk_res, lk_out;
  int lk_max_gap = 15;
  double lk_max_dist = 70.0, lk_min_score = 0.5;
  CLI::App* link = app.add_subcommand("link", "Motion-consistent tracklet linking");
  link->add_option("--res", lk_res, "Result file to link")->required();
  link->add_option("--out", lk_out, "Linked result file")->required();
  link->add_option("--max-gap", lk_max_gap, "Temporal gate, frames (default 15)");
  link->add_option("--max-dist", lk_max_dist, "Endpoint distance gate, px (default 70)");
  link->add_option("--min-score", lk_min_score, "Acceptance threshold (default 0.5)");

  std::string ov_res, ov_gt, ov_out;
  CLI::App* overlay = app.add_subcommand("overlay", "Export a trajectory CSV for plotting");
  overlay->add_option("--res", ov_res, "Result file")->required();
  overlay->add_option("--gt", ov_gt, "Ground-truth file")->required();
  overlay->add_option("--out", ov_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (track->parsed()) return run_track(ta);
    if (eval->parsed()) {
      const ft::EvalReport report = ft::evaluate_files(eval_gt, eval_res, eval_iou);
      std::fputs((eval_json ? report.to_json() : report.to_text()).c_str(), stdout);
      return 0;
    }
    if (synth->parsed()) {
      ft::ScenarioSpec spec;
      spec.name = ft::scenario_from_string(synth_scenario);
      spec.seed = synth_seed;
      if (synth_objects > 0) spec.n_objects = synth_objects;
      if (synth_frames > 0) spec.n_frames = synth_frames;
      ft::generate_files(spec, synth_out);
      return 0;
    }
    if (smooth->parsed()) {
      ft::SmoothParams p;
      p.max_gap = sm_max_gap;
      p.length_scale = sm_length_scale;
      p.noise = sm_noise;
      ft::write_results(ft::gsp_smooth_all(ft::parse_results(sm_res), p), sm_out);
      return 0;
    }
    if (link->parsed()) {
      ft::LinkParams p;
      p.max_gap = lk_max_gap;
      p.max_dist = lk_max_dist;
      p.min_score = lk_min_score;
      ft::write_results(ft::link_tracklets(ft::parse_results(lk_res), p), lk_out);
      return 0;
    }
    if (overlay->parsed()) return run_overlay(ov_res, ov_gt, ov_out);
  } catch (const ft::IoError& e) {
    std::fprintf(stderr, "fasttrack: %s\n", e.what());
    return 2;
  } catch (const ft::ValidationError& e) {
    std::fprintf(stderr, "fasttrack: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fasttrack: %s\n", e.what());
    return 1;
  }
  return 1;
}
