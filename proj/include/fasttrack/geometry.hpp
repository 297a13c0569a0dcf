#pragma once

#include <Eigen/Dense>
#include <array>

namespace fasttrack {

using Point = Eigen::Vector2d;

/// Axis-aligned box in continuous pixel coordinates, origin top-left.
struct Box {
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;   // > 0
  double height = 0.0;  // > 0

  double right() const { return left + width; }
  double bottom() const { return top + height; }
  double area() const { return width * height; }
  Point center() const { return {left + width / 2.0, top + height / 2.0}; }
  bool valid() const { return width > 0.0 && height > 0.0; }

  static Box from_center(const Point& c, double w, double h) {
    return {c.x() - w / 2.0, c.y() - h / 2.0, w, h};
  }
};

/// Intersection area of two boxes; 0 when disjoint.
double intersection_area(const Box& a, const Box& b);

/// Intersection over union, symmetric, in [0, 1].
double iou(const Box& a, const Box& b);

/// Fraction of the target box covered by the occluder:
/// area(target ∩ occluder) / area(target). Asymmetric; 1 iff target ⊆ occluder.
double coverage(const Box& target, const Box& occluder);

/// Simple quadrilateral given as 4 vertices in consistent winding order.
struct Quadrilateral {
  std::array<Point, 4> vertices;

  double signed_area() const;
  Point centroid() const;
  /// Edge i runs from vertex i to vertex (i + 1) mod 4.
  Point edge_start(int i) const { return vertices[static_cast<size_t>(i) % 4]; }
  Point edge_end(int i) const { return vertices[(static_cast<size_t>(i) + 1) % 4]; }
  Point edge_midpoint(int i) const { return 0.5 * (edge_start(i) + edge_end(i)); }
  bool valid() const;
};

/// Boundary-inclusive point containment test (ray casting).
bool point_in_polygon(const Point& p, const Quadrilateral& q);

/// Distance from p to the closed segment [a, b].
double point_segment_distance(const Point& p, const Point& a, const Point& b);

/// Closest point on the closed segment [a, b] to p.
Point closest_point_on_segment(const Point& p, const Point& a, const Point& b);

/// True if segments [a1,a2] and [b1,b2] intersect (including touching).
bool segments_intersect(const Point& a1, const Point& a2, const Point& b1, const Point& b2);

}  // namespace fasttrack
