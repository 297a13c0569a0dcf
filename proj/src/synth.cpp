#include "fasttrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>

#include "fasttrack/classes.hpp"
#include "fasttrack/errors.hpp"
#include "fasttrack/geometry.hpp"

namespace fasttrack {

ScenarioName scenario_from_string(const std::string& s) {
  if (s == "crossing_occlusion") return ScenarioName::crossing_occlusion;
  if (s == "platoon") return ScenarioName::platoon;
  if (s == "intersection_flow") return ScenarioName::intersection_flow;
  if (s == "dropout") return ScenarioName::dropout;
  throw ValidationError("unknown scenario name: " + s);
}

std::string to_string(ScenarioName name) {
  switch (name) {
    case ScenarioName::crossing_occlusion: return "crossing_occlusion";
    case ScenarioName::platoon: return "platoon";
    case ScenarioName::intersection_flow: return "intersection_flow";
    case ScenarioName::dropout: return "dropout";
  }
  return "crossing_occlusion";
}

namespace {

struct ObjState {
  int id = 0;
  int cls = 1;
  Point center{0.0, 0.0};
  double w = 0.0;
  double h = 0.0;
};

struct Layout {
  std::vector<std::vector<ObjState>> frames;  // frames[f-1]
  EnvironmentMap map;
  std::vector<OcclusionWindow> suppress;  // detections removed
  std::vector<OcclusionWindow> decay;     // confidence pushed into the low band
};

Region axis_rect_region(const std::string& id, RegionKind kind, double x1, double y1,
                        double x2, double y2, int entrance, int exit,
                        std::set<int> classes) {
  Region r;
  r.id = id;
  r.kind = kind;
  r.quad.vertices = {Point{x1, y1}, Point{x2, y1}, Point{x2, y2}, Point{x1, y2}};
  r.entrance_edge = entrance;  // 0 top, 1 right, 2 bottom, 3 left
  r.exit_edge = exit;
  r.applicable_classes = std::move(classes);
  return r;
}

// signed floor division wrap: returns (position, cycle index)
std::pair<double, long> wrap_position(double raw, double cycle) {
  const long k = static_cast<long>(std::floor(raw / cycle));
  return {raw - static_cast<double>(k) * cycle, k};
}

Layout layout_crossing(const ScenarioSpec& spec) {
  Layout lay;
  lay.frames.resize(static_cast<size_t>(spec.n_frames));
  const int pairs = std::max(1, spec.n_objects / 2);
  const int default_start = std::max(2, spec.n_frames / 2 - 5);

  for (int p = 0; p < pairs; ++p) {
    const double ay = 200.0 + 120.0 * p;
    const double ax0 = 60.0 + 40.0 * p;
    const int occluder_id = 2 * p + 1;
    const int occluded_id = 2 * p + 2;

    OcclusionWindow win{occluder_id, occluded_id, default_start,
                        std::min(default_start + 9, spec.n_frames)};
    for (const OcclusionWindow& w : spec.occlusions)
      if (w.occluded_id == occluded_id) win = w;
    lay.suppress.push_back(win);

    const double bx = ax0 + 6.0 * (win.start_frame - 1);
    for (int f = 1; f <= spec.n_frames; ++f) {
      auto& objs = lay.frames[static_cast<size_t>(f - 1)];
      objs.push_back({occluder_id, kClassCar,
                      Point{ax0 + 6.0 * (f - 1), ay}, 120.0, 100.0});
      objs.push_back({occluded_id, kClassPedestrian,
                      Point{bx, ay + 3.0 * (f - win.start_frame)}, 60.0, 60.0});
    }

    lay.map.regions.push_back(axis_rect_region(
        "lane" + std::to_string(p), RegionKind::one_way_road, 0.0, ay - 55.0,
        spec.image_width, ay + 55.0, 3, 1, default_vehicle_classes()));
    lay.map.regions.push_back(axis_rect_region(
        "cross" + std::to_string(p), RegionKind::crosswalk, bx - 70.0, 0.0,
        bx + 70.0, spec.image_height, 0, 2, {kClassPedestrian}));
  }
  return lay;
}

Layout layout_platoon(const ScenarioSpec& spec, bool dropout) {
  Layout lay;
  lay.frames.resize(static_cast<size_t>(spec.n_frames));
  const int n = std::max(1, spec.n_objects);
  const int n_lanes = (n + 9) / 10;
  const double cycle = spec.image_width + 200.0;

  for (int i = 0; i < n; ++i) {
    const int lane = i / 10;
    const int slot = i % 10;
    const double y = 100.0 + 90.0 * lane;
    const double x0 = 40.0 + 180.0 * slot;
    for (int f = 1; f <= spec.n_frames; ++f) {
      const auto [pos, k] = wrap_position(x0 + 100.0 + 4.0 * (f - 1), cycle);
      lay.frames[static_cast<size_t>(f - 1)].push_back(
          {1 + i + static_cast<int>(k) * n, kClassCar, Point{pos - 100.0, y}, 60.0,
           60.0});
    }
  }

  lay.map.regions.push_back(axis_rect_region(
      "road", RegionKind::one_way_road, 0.0, 60.0, spec.image_width,
      140.0 + 90.0 * (n_lanes - 1), 3, 1, default_vehicle_classes()));

  if (dropout) {
    if (spec.occlusions.empty()) {
      const int s = std::max(2, spec.n_frames / 2 - 4);
      const int e = std::min(s + 9, spec.n_frames);
      for (int i = 0; i < n; i += 2) lay.decay.push_back({0, 1 + i, s, e});
    } else {
      lay.decay = spec.occlusions;
    }
  } else {
    lay.suppress = spec.occlusions;
  }
  return lay;
}

Layout layout_intersection(const ScenarioSpec& spec) {
  Layout lay;
  lay.frames.resize(static_cast<size_t>(spec.n_frames));
  const int n = std::max(2, spec.n_objects);
  const int n_ped = n / 3;
  const int n_veh = n - n_ped;
  const double h_cycle = spec.image_width + 200.0;
  const double v_cycle = spec.image_height + 200.0;

  for (int i = 0; i < n_veh; ++i) {
    const int lane = i / 8;
    const int slot = i % 8;
    const double y = 420.0 + 50.0 * lane;
    const double x0 = 60.0 + 230.0 * slot;
    const double speed = (lane % 2 == 0) ? 6.0 : -6.0;
    for (int f = 1; f <= spec.n_frames; ++f) {
      const auto [pos, k] = wrap_position(x0 + 100.0 + speed * (f - 1), h_cycle);
      lay.frames[static_cast<size_t>(f - 1)].push_back(
          {1 + i + static_cast<int>(std::labs(k)) * n, kClassCar,
           Point{pos - 100.0, y}, 60.0, 50.0});
    }
  }
  for (int i = 0; i < n_ped; ++i) {
    const double x = 820.0 + 40.0 * (i % 8);
    const double y0 = 30.0 + 150.0 * (i / 8);
    for (int f = 1; f <= spec.n_frames; ++f) {
      const auto [pos, k] = wrap_position(y0 + 100.0 + 3.0 * (f - 1), v_cycle);
      lay.frames[static_cast<size_t>(f - 1)].push_back(
          {1 + n_veh + i + static_cast<int>(std::labs(k)) * n, kClassPedestrian,
           Point{x, pos - 100.0}, 50.0, 50.0});
    }
  }

  const int veh_lanes = (n_veh + 7) / 8;
  lay.map.regions.push_back(axis_rect_region(
      "road", RegionKind::two_way_road, 0.0, 400.0, spec.image_width,
      460.0 + 50.0 * (veh_lanes - 1), 3, 1, default_vehicle_classes()));
  lay.map.regions.push_back(axis_rect_region(
      "crosswalk", RegionKind::crosswalk, 800.0, 0.0, 1120.0, spec.image_height, 0,
      2, {kClassPedestrian}));
  lay.suppress = spec.occlusions;
  return lay;
}

bool in_window(const std::vector<OcclusionWindow>& wins, int id, int frame) {
  for (const OcclusionWindow& w : wins)
    if (w.occluded_id == id && frame >= w.start_frame && frame <= w.end_frame)
      return true;
  return false;
}

}  // namespace

GeneratedScenario generate(const ScenarioSpec& spec) {
  if (spec.n_frames < 1 || spec.n_objects < 1)
    throw ValidationError("scenario: n_frames and n_objects must be >= 1");
  for (const OcclusionWindow& w : spec.occlusions) {
    if (w.start_frame < 1 || w.end_frame > spec.n_frames || w.start_frame > w.end_frame)
      throw ValidationError("scenario: occlusion window outside [1, n_frames]");
    if (w.occluder_id == w.occluded_id && w.occluder_id != 0)
      throw ValidationError("scenario: occluder and occluded must differ");
  }

  Layout lay;
  switch (spec.name) {
    case ScenarioName::crossing_occlusion: lay = layout_crossing(spec); break;
    case ScenarioName::platoon: lay = layout_platoon(spec, false); break;
    case ScenarioName::intersection_flow: lay = layout_intersection(spec); break;
    case ScenarioName::dropout: lay = layout_platoon(spec, true); break;
  }
  lay.map.image_width = spec.image_width;
  lay.map.image_height = spec.image_height;

  // the occluder must actually cover the occluded box when the window opens
  for (const OcclusionWindow& w : lay.suppress) {
    const auto& objs = lay.frames[static_cast<size_t>(w.start_frame - 1)];
    const ObjState* occluder = nullptr;
    const ObjState* occluded = nullptr;
    for (const ObjState& o : objs) {
      if (o.id == w.occluder_id) occluder = &o;
      if (o.id == w.occluded_id) occluded = &o;
    }
    if (occluder == nullptr || occluded == nullptr ||
        coverage(Box::from_center(occluded->center, occluded->w, occluded->h),
                 Box::from_center(occluder->center, occluder->w, occluder->h)) < 0.7)
      throw ValidationError("scenario: occlusion window " +
                            std::to_string(w.occluded_id) +
                            " cannot reach coverage 0.7 at frame " +
                            std::to_string(w.start_frame));
  }

  GeneratedScenario out;
  out.map = std::move(lay.map);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int f = 1; f <= spec.n_frames; ++f) {
    for (const ObjState& o : lay.frames[static_cast<size_t>(f - 1)]) {
      GroundTruthBox g;
      g.frame = f;
      g.id = o.id;
      g.box = Box::from_center(o.center, o.w, o.h);
      g.class_id = o.cls;
      g.visibility = 1.0;
      out.ground_truth.push_back(g);

      if (in_window(lay.suppress, o.id, f)) continue;  // fully occluded

      Detection d;
      d.frame = f;
      d.class_id = o.cls;
      Point c = o.center;
      double w = o.w, h = o.h;
      if (spec.center_jitter > 0.0) {
        std::normal_distribution<double> cj(0.0, spec.center_jitter);
        c.x() += cj(rng);
        c.y() += cj(rng);
      }
      if (spec.extent_jitter > 0.0) {
        std::normal_distribution<double> ej(0.0, spec.extent_jitter);
        w = std::max(1.0, w + ej(rng));
        h = std::max(1.0, h + ej(rng));
      }
      d.box = Box::from_center(c, w, h);
      if (in_window(lay.decay, o.id, f)) {
        d.confidence = 0.25 + 0.35 * unit(rng);  // low band
      } else {
        d.confidence = 0.7 + 0.29 * unit(rng);  // high band
      }
      out.detections.push_back(d);
    }
  }
  return out;
}

void generate_files(const ScenarioSpec& spec, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const GeneratedScenario g = generate(spec);
  write_detections(g.detections, out_dir + "/det.txt");
  write_ground_truth(g.ground_truth, out_dir + "/gt.txt");
  write_text_file(out_dir + "/map.json", map_to_json(g.map));
}

std::vector<ScenarioSpec> scenario_suite(unsigned long long seed_base, int count) {
  if (count < 1) throw ValidationError("scenario_suite: count must be >= 1");
  static const ScenarioName names[4] = {
      ScenarioName::crossing_occlusion, ScenarioName::platoon,
      ScenarioName::intersection_flow, ScenarioName::dropout};
  std::vector<ScenarioSpec> specs;
  for (int i = 0; i < count; ++i) {
    ScenarioSpec s;
    s.name = names[i % 4];
    const int n = count > 1 ? 2 + (48 * i) / (count - 1) : 50;
    s.n_objects = s.name == ScenarioName::crossing_occlusion
                      ? std::clamp((n / 2) * 2, 2, 16)
                      : n;
    s.n_frames = 60;
    s.seed = seed_base + static_cast<unsigned long long>(i);
    specs.push_back(s);
  }
  return specs;
}

}  // namespace fasttrack
