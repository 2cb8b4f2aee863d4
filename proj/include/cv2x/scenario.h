#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cv2x/geometry.h"
#include "cv2x/rng.h"

namespace cv2x {

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Node positions over time. Between samples positions are linearly
/// interpolated; outside the sampled range the nearest sample holds.
struct TraceSample {
  uint64_t time_ms = 0;
  double x_m = 0.0;
  double y_m = 0.0;
};

struct MobilityTrace {
  std::vector<std::string> node_names;  // original ids, first-appearance order
  std::vector<std::vector<TraceSample>> samples;  // per node, time ascending

  size_t NodeCount() const { return node_names.size(); }
};

/// Parses a `time_ms,node_id,x_m,y_m` CSV. Throws TraceError with the line
/// number on malformed rows and names the node on non-monotone timestamps.
MobilityTrace LoadTrace(const std::string& path);
MobilityTrace ParseTrace(std::istream& in, const std::string& source_name);

/// Writes the identical schema back; values round-trip exactly.
void SaveTrace(const MobilityTrace& trace, std::ostream& out);

Vec2 TracePositionAt(const MobilityTrace& trace, uint32_t node, uint64_t t_ms);

/// Stepwise position source driven by the engine once per subframe.
/// Advance must be called with strictly increasing times; models that move
/// draw their randomness (turn decisions) from the run RNG inside Advance.
class MobilityModel {
 public:
  virtual ~MobilityModel() = default;
  virtual void Advance(uint64_t t_ms, Rng& rng) = 0;
  virtual Vec2 Position(uint32_t node) const = 0;
  virtual uint32_t NodeCount() const = 0;
  virtual bool IsStatic() const { return false; }
};

struct Scenario {
  StreetMap map;
  std::unique_ptr<MobilityModel> mobility;
};

/// Worst-case playground: n stationary UEs uniform on a 100 m x 100 m open
/// square, every pair line-of-sight.
Scenario BuildStaticScenario(int n_ues, Rng& rng);

/// 3GPP-style Manhattan grid: a 3 x 3 grid of 250 m x 433 m building
/// blocks (total 750 m x 1299 m) separated by two-lane bidirectional
/// streets. Vehicles spawn uniformly over the street network, drive at
/// constant speed and turn uniformly at random at intersections; at the
/// boundary only inward turns are offered.
Scenario BuildManhattanScenario(int n_ues, double speed_kmh, Rng& rng);

/// Positions replayed from an external trace.
Scenario BuildTraceScenario(MobilityTrace trace);

}  // namespace cv2x
