#include "cv2x/geometry.h"

namespace cv2x {

bool SegmentIntersectsRect(const Vec2& a, const Vec2& b, const Rect& r) {
  // Liang-Barsky clip of the parametric segment against the rectangle.
  // The segment blocks only if a part of it with positive length lies
  // strictly inside, so boundary grazing is rejected via the interval
  // width check at the end.
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;

  // Shrink the rectangle by a hair so edge-collinear segments (pure
  // boundary contact) do not register as blockage.
  constexpr double kShrink = 1e-9;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - (r.x_min + kShrink), (r.x_max - kShrink) - a.x,
                       a.y - (r.y_min + kShrink), (r.y_max - kShrink) - a.y};

  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) {
        return false;  // parallel and fully outside this slab
      }
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      if (t > t1) return false;
      t0 = std::max(t0, t);
    } else {
      if (t < t0) return false;
      t1 = std::min(t1, t);
    }
  }
  constexpr double kEps = 1e-9;
  return t1 - t0 > kEps;
}

}  // namespace cv2x
