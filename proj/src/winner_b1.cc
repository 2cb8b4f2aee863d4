#include "cv2x/winner_b1.h"

#include <cmath>

namespace cv2x {

double BreakpointDistance(const ChannelParams& p) {
  const double h_bs_eff = p.h_bs_m - 1.0;
  const double h_ms_eff = p.h_ms_m - 1.0;
  const double fc_hz = p.fc_ghz * 1e9;
  return 4.0 * h_bs_eff * h_ms_eff * fc_hz / p.c_mps;
}

double PathlossLosDb(double distance_m, const ChannelParams& p) {
  const double d = std::max(distance_m, p.min_distance_m);
  const double log_fc = std::log10(p.fc_ghz);
  if (d < BreakpointDistance(p)) {
    return 22.7 * std::log10(d) + 27.0 + 20.0 * log_fc;
  }
  return 40.0 * std::log10(d) + 9.0 - 16.2 * std::log10(p.h_bs_m) -
         16.2 * std::log10(p.h_ms_m) + 3.8 * log_fc;
}

double PathlossNlosDb(double distance_m, const ChannelParams& p) {
  const double d = std::max(distance_m, p.min_distance_m);
  const double log_hbs = std::log10(p.h_bs_m);
  return (44.9 - 6.55 * log_hbs) * std::log10(d) + 5.83 * log_hbs + 15.38 +
         23.0 * std::log10(p.fc_ghz);
}

double PathlossDb(const LinkGeometry& g, const ChannelParams& p) {
  return g.los == Los::kLos ? PathlossLosDb(g.distance_m, p)
                            : PathlossNlosDb(g.distance_m, p);
}

double ReceivedPowerDbm(double tx_power_dbm, const LinkGeometry& g,
                        const ChannelParams& p) {
  return tx_power_dbm - PathlossDb(g, p);
}

Los ClassifyLos(const Vec2& tx, const Vec2& rx, const StreetMap& map) {
  for (const Rect& block : map.blocks) {
    if (SegmentIntersectsRect(tx, rx, block)) {
      return Los::kNlos;
    }
  }
  return Los::kLos;
}

}  // namespace cv2x
