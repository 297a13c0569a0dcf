#include "fasttrack/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fasttrack {

double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.left, b.left);
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.top, b.top);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double coverage(const Box& target, const Box& occluder) {
  const double ta = target.area();
  if (ta <= 0.0) return 0.0;
  return intersection_area(target, occluder) / ta;
}

double Quadrilateral::signed_area() const {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point& a = vertices[static_cast<size_t>(i)];
    const Point& b = vertices[(static_cast<size_t>(i) + 1) % 4];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * s;
}

Point Quadrilateral::centroid() const {
  Point c = Point::Zero();
  for (const Point& v : vertices) c += v;
  return c / 4.0;
}

namespace {

double cross2(const Point& o, const Point& a, const Point& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

int orientation_sign(const Point& o, const Point& a, const Point& b) {
  const double c = cross2(o, a, b);
  if (c > 0.0) return 1;
  if (c < 0.0) return -1;
  return 0;
}

bool on_segment_collinear(const Point& p, const Point& a, const Point& b) {
  return p.x() >= std::min(a.x(), b.x()) && p.x() <= std::max(a.x(), b.x()) &&
         p.y() >= std::min(a.y(), b.y()) && p.y() <= std::max(a.y(), b.y());
}

}  // namespace

bool Quadrilateral::valid() const {
  if (std::abs(signed_area()) <= 0.0) return false;
  // simple polygon: non-adjacent edges must not intersect
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (j == i + 1 || (i == 0 && j == 3)) continue;
      if (segments_intersect(edge_start(i), edge_end(i), edge_start(j), edge_end(j)))
        return false;
    }
  }
  return true;
}

bool segments_intersect(const Point& a1, const Point& a2, const Point& b1, const Point& b2) {
  const int d1 = orientation_sign(a1, a2, b1);
  const int d2 = orientation_sign(a1, a2, b2);
  const int d3 = orientation_sign(b1, b2, a1);
  const int d4 = orientation_sign(b1, b2, a2);
  if (d1 != d2 && d3 != d4) return true;
  if (d1 == 0 && on_segment_collinear(b1, a1, a2)) return true;
  if (d2 == 0 && on_segment_collinear(b2, a1, a2)) return true;
  if (d3 == 0 && on_segment_collinear(a1, b1, b2)) return true;
  if (d4 == 0 && on_segment_collinear(a2, b1, b2)) return true;
  return false;
}

Point closest_point_on_segment(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  return (p - closest_point_on_segment(p, a, b)).norm();
}

bool point_in_polygon(const Point& p, const Quadrilateral& q) {
  constexpr double kBoundaryEps = 1e-9;
  for (int i = 0; i < 4; ++i) {
    if (point_segment_distance(p, q.edge_start(i), q.edge_end(i)) <= kBoundaryEps)
      return true;
  }
  // crossing-number ray cast along +x
  bool inside = false;
  for (int i = 0; i < 4; ++i) {
    const Point a = q.edge_start(i);
    const Point b = q.edge_end(i);
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x_hit = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x_hit) inside = !inside;
    }
  }
  return inside;
}

}  // namespace fasttrack
