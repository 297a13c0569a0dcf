#include "fasttrack/config.hpp"

#include <fstream>
#include <sstream>

#include "fasttrack/classes.hpp"
#include "fasttrack/errors.hpp"
#include "json.hpp"

namespace fasttrack {

namespace {

ClassMotionProfile pedestrian_profile() {
  ClassMotionProfile p;
  p.class_id = kClassPedestrian;
  p.process_noise_pos = 1.0;
  p.process_noise_vel = 0.5;
  p.measurement_noise = 1.0;
  p.gamma_velo = 0.9;
  p.delta_reset = 3;
  p.beta_enlarge = 1.1;
  return p;
}

ClassMotionProfile vehicle_profile(int class_id) {
  ClassMotionProfile p;
  p.class_id = class_id;
  p.process_noise_pos = 1.0;
  p.process_noise_vel = 1.5;  // 3x the pedestrian value
  p.measurement_noise = 1.0;
  p.gamma_velo = 0.75;
  p.delta_reset = 4;
  p.beta_enlarge = 1.2;
  return p;
}

}  // namespace

TrackerConfig::TrackerConfig() {
  class_profiles[kClassPedestrian] = pedestrian_profile();
  for (int c : default_vehicle_classes()) class_profiles[c] = vehicle_profile(c);
}

const ClassMotionProfile& TrackerConfig::profile_for(int class_id) const {
  const auto it = class_profiles.find(class_id);
  if (it != class_profiles.end()) return it->second;
  return class_profiles.at(kClassPedestrian);
}

void TrackerConfig::validate() const {
  auto ratio = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!ratio(tau_low) || !ratio(tau_high) || tau_low >= tau_high)
    throw ValidationError("config: require 0 <= tau_low < tau_high <= 1");
  if (!ratio(iou_stage1)) throw ValidationError("config: iou_stage1 must be in [0,1]");
  if (!ratio(iou_stage2)) throw ValidationError("config: iou_stage2 must be in [0,1]");
  if (k_init < 0.0) throw ValidationError("config: k_init must be >= 0");
  if (cp_min < 0.0) throw ValidationError("config: cp_min must be >= 0");
  if (t_occ < 1) throw ValidationError("config: t_occ must be >= 1");
  if (direction_window_n < 1)
    throw ValidationError("config: direction_window_n must be >= 1");
  if (!ratio(ema_alpha)) throw ValidationError("config: ema_alpha must be in [0,1]");
  if (!ratio(nms_iou)) throw ValidationError("config: nms_iou must be in [0,1]");
  if (grace_frames < 0) throw ValidationError("config: grace_frames must be >= 0");
  for (const auto& [cid, p] : class_profiles) {
    if (!p.valid())
      throw ValidationError("config: class_profiles[" + std::to_string(cid) +
                            "] violates 0 < gamma_velo < 1, beta_enlarge >= 1, "
                            "delta_reset >= 0, positive noise");
  }
}

TrackerConfig parse_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  TrackerConfig cfg;
  auto get = [&doc](const char* key, auto& field) {
    if (doc.contains(key)) field = doc[key].get<std::decay_t<decltype(field)>>();
  };
  get("tau_high", cfg.tau_high);
  get("tau_low", cfg.tau_low);
  get("iou_stage1", cfg.iou_stage1);
  get("iou_stage2", cfg.iou_stage2);
  get("cp_min", cfg.cp_min);
  get("k_init", cfg.k_init);
  get("t_occ", cfg.t_occ);
  get("direction_window_n", cfg.direction_window_n);
  get("ema_alpha", cfg.ema_alpha);
  get("nms_iou", cfg.nms_iou);
  get("nms_enabled", cfg.nms_enabled);
  get("grace_frames", cfg.grace_frames);

  if (doc.contains("class_profiles")) {
    for (const auto& [key, jp] : doc["class_profiles"].items()) {
      int cid;
      try {
        cid = std::stoi(key);
      } catch (...) {
        const auto& table = default_class_table();
        const auto it = table.find(key);
        if (it == table.end())
          throw ValidationError("config: unknown class in class_profiles: " + key);
        cid = it->second;
      }
      ClassMotionProfile p = cfg.profile_for(cid);
      p.class_id = cid;
      auto getp = [&jp](const char* k, auto& field) {
        if (jp.contains(k)) field = jp[k].get<std::decay_t<decltype(field)>>();
      };
      getp("process_noise_pos", p.process_noise_pos);
      getp("process_noise_vel", p.process_noise_vel);
      getp("measurement_noise", p.measurement_noise);
      getp("gamma_velo", p.gamma_velo);
      getp("delta_reset", p.delta_reset);
      getp("beta_enlarge", p.beta_enlarge);
      cfg.class_profiles[cid] = p;
    }
  }
  cfg.validate();
  return cfg;
}

TrackerConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fasttrack
