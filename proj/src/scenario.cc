#include "cv2x/scenario.h"

#include <array>
#include <cmath>

namespace cv2x {

namespace {

class StaticPlacement final : public MobilityModel {
 public:
  explicit StaticPlacement(std::vector<Vec2> positions)
      : m_positions(std::move(positions)) {}

  void Advance(uint64_t, Rng&) override {}
  Vec2 Position(uint32_t node) const override { return m_positions[node]; }
  uint32_t NodeCount() const override {
    return static_cast<uint32_t>(m_positions.size());
  }
  bool IsStatic() const override { return true; }

 private:
  std::vector<Vec2> m_positions;
};

// Manhattan grid constants. Three 250 m x 433 m blocks per axis; street
// grid lines at the block boundaries, lanes offset for right-hand traffic.
constexpr double kBlockW = 250.0;
constexpr double kBlockH = 433.0;
constexpr int kBlocksPerAxis = 3;
constexpr double kExtentX = kBlocksPerAxis * kBlockW;   // 750
constexpr double kExtentY = kBlocksPerAxis * kBlockH;   // 1299
constexpr double kHalfStreet = 3.5;  // building setback from the grid line
constexpr double kLaneOffset = 1.75;

double GridCoord(bool vertical_axis, int line) {
  return vertical_axis ? line * kBlockW : line * kBlockH;
}

class ManhattanMobility final : public MobilityModel {
 public:
  ManhattanMobility(int n_ues, double speed_mps, Rng& rng)
      : m_speed_per_ms(speed_mps / 1000.0), m_vehicles(n_ues) {
    // Spawn uniformly over the driveable length: 4 vertical lines of
    // kExtentY plus 4 horizontal lines of kExtentX, two directions each.
    for (Vehicle& v : m_vehicles) {
      const double len_v = 4.0 * kExtentY;
      const double len_h = 4.0 * kExtentX;
      const double u = rng.NextDouble() * (len_v + len_h);
      if (u < len_v) {
        v.on_vertical = true;
        v.line = static_cast<int>(rng.UniformInt(0, kBlocksPerAxis));
        v.pos = rng.NextDouble() * kExtentY;
      } else {
        v.on_vertical = false;
        v.line = static_cast<int>(rng.UniformInt(0, kBlocksPerAxis));
        v.pos = rng.NextDouble() * kExtentX;
      }
      v.dir = rng.Bernoulli(0.5) ? 1 : -1;
    }
  }

  void Advance(uint64_t, Rng& rng) override {
    // The first call defines t = 0 at the spawn positions.
    if (!m_started) {
      m_started = true;
      return;
    }
    for (Vehicle& v : m_vehicles) {
      Step(v, m_speed_per_ms, rng);
    }
  }

  Vec2 Position(uint32_t node) const override {
    const Vehicle& v = m_vehicles[node];
    const double line_coord = GridCoord(v.on_vertical, v.line);
    // Right-hand traffic: the lane sits kLaneOffset to the right of the
    // travel direction, clamped so boundary streets stay on the map.
    if (v.on_vertical) {
      const double x = std::clamp(line_coord + v.dir * kLaneOffset, 0.0,
                                  kExtentX);
      return Vec2{x, v.pos};
    }
    const double y =
        std::clamp(line_coord - v.dir * kLaneOffset, 0.0, kExtentY);
    return Vec2{v.pos, y};
  }

  uint32_t NodeCount() const override {
    return static_cast<uint32_t>(m_vehicles.size());
  }

 private:
  struct Vehicle {
    bool on_vertical = true;  // moving along y on a vertical street
    int line = 0;             // grid line index, 0..3
    int dir = 1;              // +1 or -1 along the travel axis
    double pos = 0.0;         // coordinate along the travel axis
  };

  // Candidate heading after reaching the intersection (vx_line, hy_line).
  struct Heading {
    bool on_vertical;
    int dir;
  };

  void Step(Vehicle& v, double remaining, Rng& rng) {
    while (remaining > 0.0) {
      const double limit = v.on_vertical ? kExtentY : kExtentX;
      const double block = v.on_vertical ? kBlockH : kBlockW;
      double next_cross;
      if (v.dir > 0) {
        next_cross = std::min(limit, (std::floor(v.pos / block) + 1) * block);
      } else {
        const double f = std::ceil(v.pos / block - 1) * block;
        next_cross = std::max(0.0, f);
      }
      const double dist = std::abs(next_cross - v.pos);
      if (dist > remaining) {
        v.pos += v.dir * remaining;
        return;
      }
      v.pos = next_cross;
      remaining -= dist;
      Turn(v, rng);
    }
  }

  void Turn(Vehicle& v, Rng& rng) {
    // Intersection of vertical line vx and horizontal line hy.
    const int vx = v.on_vertical
                       ? v.line
                       : static_cast<int>(std::lround(v.pos / kBlockW));
    const int hy = v.on_vertical
                       ? static_cast<int>(std::lround(v.pos / kBlockH))
                       : v.line;
    const Heading reverse{v.on_vertical, -v.dir};
    std::array<Heading, 4> all = {Heading{true, 1}, Heading{true, -1},
                                  Heading{false, 1}, Heading{false, -1}};
    std::array<Heading, 4> options{};
    size_t n = 0;
    for (const Heading& h : all) {
      if (h.on_vertical == reverse.on_vertical && h.dir == reverse.dir) {
        continue;
      }
      // Stay on the map: moving in h.dir must leave room ahead.
      if (h.on_vertical) {
        if ((h.dir > 0 && hy >= kBlocksPerAxis) || (h.dir < 0 && hy <= 0)) {
          continue;
        }
      } else {
        if ((h.dir > 0 && vx >= kBlocksPerAxis) || (h.dir < 0 && vx <= 0)) {
          continue;
        }
      }
      options[n++] = h;
    }
    Heading chosen = reverse;  // dead end: u-turn (cannot happen on 3x3)
    if (n > 0) {
      chosen = options[rng.UniformIndex(n)];
    }
    v.on_vertical = chosen.on_vertical;
    v.dir = chosen.dir;
    if (chosen.on_vertical) {
      v.line = vx;
      v.pos = GridCoord(false, hy);
    } else {
      v.line = hy;
      v.pos = GridCoord(true, vx);
    }
  }

  double m_speed_per_ms;
  std::vector<Vehicle> m_vehicles;
  bool m_started = false;
};

class TraceMobility final : public MobilityModel {
 public:
  explicit TraceMobility(MobilityTrace trace)
      : m_trace(std::move(trace)), m_now(0) {}

  void Advance(uint64_t t_ms, Rng&) override { m_now = t_ms; }
  Vec2 Position(uint32_t node) const override {
    return TracePositionAt(m_trace, node, m_now);
  }
  uint32_t NodeCount() const override {
    return static_cast<uint32_t>(m_trace.NodeCount());
  }

 private:
  MobilityTrace m_trace;
  uint64_t m_now;
};

StreetMap ManhattanStreetMap() {
  StreetMap map;
  map.extent = Rect{0.0, 0.0, kExtentX, kExtentY};
  for (int i = 0; i < kBlocksPerAxis; ++i) {
    for (int j = 0; j < kBlocksPerAxis; ++j) {
      map.blocks.push_back(Rect{i * kBlockW + kHalfStreet,
                                j * kBlockH + kHalfStreet,
                                (i + 1) * kBlockW - kHalfStreet,
                                (j + 1) * kBlockH - kHalfStreet});
    }
  }
  for (int line = 0; line <= kBlocksPerAxis; ++line) {
    const double x = line * kBlockW;
    const double up = std::clamp(x + kLaneOffset, 0.0, kExtentX);
    const double down = std::clamp(x - kLaneOffset, 0.0, kExtentX);
    map.lanes.push_back(Lane{Vec2{up, 0.0}, Vec2{up, kExtentY}});
    map.lanes.push_back(Lane{Vec2{down, kExtentY}, Vec2{down, 0.0}});
    const double y = line * kBlockH;
    const double east = std::clamp(y - kLaneOffset, 0.0, kExtentY);
    const double west = std::clamp(y + kLaneOffset, 0.0, kExtentY);
    map.lanes.push_back(Lane{Vec2{0.0, east}, Vec2{kExtentX, east}});
    map.lanes.push_back(Lane{Vec2{kExtentX, west}, Vec2{0.0, west}});
  }
  return map;
}

}  // namespace

Scenario BuildStaticScenario(int n_ues, Rng& rng) {
  Scenario s;
  s.map.extent = Rect{0.0, 0.0, 100.0, 100.0};
  std::vector<Vec2> positions(static_cast<size_t>(n_ues));
  for (Vec2& p : positions) {
    p.x = rng.NextDouble() * 100.0;
    p.y = rng.NextDouble() * 100.0;
  }
  s.mobility = std::make_unique<StaticPlacement>(std::move(positions));
  return s;
}

Scenario BuildManhattanScenario(int n_ues, double speed_kmh, Rng& rng) {
  Scenario s;
  s.map = ManhattanStreetMap();
  s.mobility =
      std::make_unique<ManhattanMobility>(n_ues, speed_kmh / 3.6, rng);
  return s;
}

Scenario BuildTraceScenario(MobilityTrace trace) {
  Scenario s;
  Rect extent{0.0, 0.0, 0.0, 0.0};
  bool first = true;
  for (const auto& node : trace.samples) {
    for (const TraceSample& ts : node) {
      if (first) {
        extent = Rect{ts.x_m, ts.y_m, ts.x_m, ts.y_m};
        first = false;
      } else {
        extent.x_min = std::min(extent.x_min, ts.x_m);
        extent.y_min = std::min(extent.y_min, ts.y_m);
        extent.x_max = std::max(extent.x_max, ts.x_m);
        extent.y_max = std::max(extent.y_max, ts.y_m);
      }
    }
  }
  s.map.extent = extent;
  s.mobility = std::make_unique<TraceMobility>(std::move(trace));
  return s;
}

}  // namespace cv2x
