#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace cv2x {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double Distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned rectangle, min corner inclusive.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool Contains(const Vec2& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  bool ContainsStrict(const Vec2& p) const {
    return p.x > x_min && p.x < x_max && p.y > y_min && p.y < y_max;
  }
};

/// True if the open segment a-b passes through the interior of r.
/// Touching the boundary does not count as blockage.
bool SegmentIntersectsRect(const Vec2& a, const Vec2& b, const Rect& r);

/// One directed lane centerline; vehicles travel from a to b.
struct Lane {
  Vec2 a;
  Vec2 b;
  double Length() const { return Distance(a, b); }
};

/// Road network geometry shared by the channel model and the mobility
/// scenarios. An empty block list means an open playground (everything
/// line-of-sight).
struct StreetMap {
  std::vector<Rect> blocks;
  std::vector<Lane> lanes;
  Rect extent;
};

}  // namespace cv2x
