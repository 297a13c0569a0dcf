#include "fasttrack/postproc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fasttrack {

namespace {

// least-squares linear trend a + b*t per channel; the GP regresses residuals
struct Trend {
  double a = 0.0;
  double b = 0.0;
  double at(double t) const { return a + b * t; }
};

Trend fit_trend(const Eigen::VectorXd& t, const Eigen::VectorXd& y) {
  const double n = static_cast<double>(t.size());
  const double st = t.sum(), sy = y.sum();
  const double stt = t.dot(t), sty = t.dot(y);
  const double denom = n * stt - st * st;
  Trend tr;
  if (std::abs(denom) < 1e-12) {
    tr.a = sy / n;
    tr.b = 0.0;
  } else {
    tr.b = (n * sty - st * sy) / denom;
    tr.a = (sy - tr.b * st) / n;
  }
  return tr;
}

}  // namespace

std::vector<TrackRecord> gsp_smooth(const std::vector<TrackRecord>& track,
                                    const SmoothParams& params) {
  std::vector<TrackRecord> obs = track;
  std::sort(obs.begin(), obs.end(),
            [](const TrackRecord& a, const TrackRecord& b) { return a.frame < b.frame; });
  if (obs.size() < 2) return obs;

  const Eigen::Index n = static_cast<Eigen::Index>(obs.size());
  Eigen::VectorXd t(n);
  Eigen::MatrixXd y(n, 4);  // cx, cy, w, h
  for (Eigen::Index i = 0; i < n; ++i) {
    const TrackRecord& r = obs[static_cast<size_t>(i)];
    t(i) = static_cast<double>(r.frame);
    const Point c = r.box.center();
    y(i, 0) = c.x();
    y(i, 1) = c.y();
    y(i, 2) = r.box.width;
    y(i, 3) = r.box.height;
  }

  const double l2 = 2.0 * params.length_scale * params.length_scale;
  const double sigma2 = params.noise > 0.0 ? params.noise * params.noise : 1e-9;
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = t(i) - t(j);
      gram(i, j) = std::exp(-d * d / l2);
    }
  gram.diagonal().array() += sigma2;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
    throw std::runtime_error("gsp_smooth: singular kernel matrix");

  std::array<Trend, 4> trends;
  Eigen::MatrixXd residuals(n, 4);
  for (int c = 0; c < 4; ++c) {
    trends[static_cast<size_t>(c)] = fit_trend(t, y.col(c));
    for (Eigen::Index i = 0; i < n; ++i)
      residuals(i, c) = y(i, c) - trends[static_cast<size_t>(c)].at(t(i));
  }
  const Eigen::MatrixXd alpha = ldlt.solve(residuals);

  // targets: observed frames plus gaps of at most max_gap missing frames
  std::vector<std::pair<int, const TrackRecord*>> targets;
  for (Eigen::Index i = 0; i < n; ++i) {
    const TrackRecord& r = obs[static_cast<size_t>(i)];
    targets.emplace_back(r.frame, &r);
    if (i + 1 < n) {
      const int missing = obs[static_cast<size_t>(i + 1)].frame - r.frame - 1;
      if (missing >= 1 && missing <= params.max_gap)
        for (int f = r.frame + 1; f < obs[static_cast<size_t>(i + 1)].frame; ++f)
          targets.emplace_back(f, &r);
    }
  }

  std::vector<TrackRecord> out;
  out.reserve(targets.size());
  Eigen::RowVectorXd kstar(n);
  for (const auto& [frame, src] : targets) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = static_cast<double>(frame) - t(i);
      kstar(i) = std::exp(-d * d / l2);
    }
    const Eigen::RowVector4d pred = kstar * alpha;
    TrackRecord r = *src;
    r.frame = frame;
    const double cx = trends[0].at(frame) + pred(0);
    const double cy = trends[1].at(frame) + pred(1);
    const double w = std::max(1.0, trends[2].at(frame) + pred(2));
    const double h = std::max(1.0, trends[3].at(frame) + pred(3));
    r.box = Box::from_center({cx, cy}, w, h);
    out.push_back(r);
  }
  return out;
}

std::vector<TrackRecord> gsp_smooth_all(const std::vector<TrackRecord>& records,
                                        const SmoothParams& params) {
  std::map<int, std::vector<TrackRecord>> by_id;
  for (const TrackRecord& r : records) by_id[r.id].push_back(r);
  std::vector<TrackRecord> out;
  for (const auto& [id, track] : by_id) {
    const std::vector<TrackRecord> s = gsp_smooth(track, params);
    out.insert(out.end(), s.begin(), s.end());
  }
  std::sort(out.begin(), out.end(), [](const TrackRecord& a, const TrackRecord& b) {
    return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
  });
  return out;
}

namespace {

struct TrackletSummary {
  int id = 0;
  int class_id = 1;
  int first_frame = 0, last_frame = 0;
  Point first_center{0, 0}, last_center{0, 0};
  Point end_velocity{0, 0};
};

std::vector<TrackletSummary> summarize(const std::vector<TrackRecord>& records) {
  std::map<int, std::vector<TrackRecord>> by_id;
  for (const TrackRecord& r : records) by_id[r.id].push_back(r);
  std::vector<TrackletSummary> out;
  for (auto& [id, track] : by_id) {
    std::sort(track.begin(), track.end(),
              [](const TrackRecord& a, const TrackRecord& b) { return a.frame < b.frame; });
    TrackletSummary s;
    s.id = id;
    s.class_id = track.front().class_id;
    s.first_frame = track.front().frame;
    s.last_frame = track.back().frame;
    s.first_center = track.front().box.center();
    s.last_center = track.back().box.center();
    // endpoint velocity from the last few observations
    const size_t lookback = std::min<size_t>(track.size() - 1, 5);
    if (lookback > 0) {
      const TrackRecord& ref = track[track.size() - 1 - lookback];
      const double dt = static_cast<double>(s.last_frame - ref.frame);
      if (dt > 0) s.end_velocity = (s.last_center - ref.box.center()) / dt;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<LinkCandidate> link_candidates(const std::vector<TrackRecord>& records,
                                           const LinkParams& params) {
  const std::vector<TrackletSummary> tracks = summarize(records);
  std::vector<LinkCandidate> out;
  for (const TrackletSummary& a : tracks) {
    for (const TrackletSummary& b : tracks) {
      if (a.id == b.id || a.class_id != b.class_id) continue;
      const int gap = b.first_frame - a.last_frame;
      if (gap < 1 || gap > params.max_gap) continue;
      const double dist = (b.first_center - a.last_center).norm();
      if (dist > params.max_dist) continue;
      const Point predicted = a.last_center + static_cast<double>(gap) * a.end_velocity;
      const double miss = (predicted - b.first_center).norm();
      LinkCandidate c;
      c.earlier_id = a.id;
      c.later_id = b.id;
      c.gap = gap;
      c.endpoint_distance = dist;
      c.score = std::exp(-miss / params.max_dist) *
                std::exp(-static_cast<double>(gap) / params.max_gap);
      out.push_back(c);
    }
  }
  return out;
}

std::vector<TrackRecord> link_tracklets(const std::vector<TrackRecord>& records,
                                        const LinkParams& params) {
  std::vector<LinkCandidate> cands = link_candidates(records, params);
  std::sort(cands.begin(), cands.end(), [](const LinkCandidate& a, const LinkCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.earlier_id != b.earlier_id) return a.earlier_id < b.earlier_id;
    return a.later_id < b.later_id;
  });

  std::map<int, int> successor_taken;   // earlier id -> later id
  std::map<int, int> predecessor;       // later id -> earlier id
  for (const LinkCandidate& c : cands) {
    if (c.score <= params.min_score) continue;
    if (successor_taken.count(c.earlier_id) || predecessor.count(c.later_id)) continue;
    successor_taken[c.earlier_id] = c.later_id;
    predecessor[c.later_id] = c.earlier_id;
  }

  // follow predecessor chains to the root id
  auto root_of = [&predecessor](int id) {
    int cur = id;
    auto it = predecessor.find(cur);
    while (it != predecessor.end()) {
      cur = it->second;
      it = predecessor.find(cur);
    }
    return cur;
  };

  std::vector<TrackRecord> out = records;
  for (TrackRecord& r : out) r.id = root_of(r.id);
  return out;
}

}  // namespace fasttrack
