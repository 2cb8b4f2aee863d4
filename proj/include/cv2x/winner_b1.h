#pragma once

#include "cv2x/geometry.h"

namespace cv2x {

/// WINNER+ B1 urban microcell parameters for the 5.9 GHz V2V band.
/// Antenna heights follow the V2V convention h_BS = h_MS = 1.5 m, so both
/// effective heights (h - 1 m) stay positive.
struct ChannelParams {
  double fc_ghz = 5.9;
  double h_bs_m = 1.5;
  double h_ms_m = 1.5;
  double min_distance_m = 3.0;  // clamp floor against the log singularity
  double c_mps = 3e8;
};

enum class Los { kLos, kNlos };

struct LinkGeometry {
  double distance_m = 0.0;
  Los los = Los::kLos;
};

/// Effective breakpoint distance 4 * h'_BS * h'_MS * fc / c, fc in Hz.
double BreakpointDistance(const ChannelParams& p);

/// LOS path loss in dB. Below the breakpoint:
///   22.7 log10(d) + 27.0 + 20.0 log10(fc)
/// at and above it:
///   40.0 log10(d) + 9 - 16.2 log10(h_BS) - 16.2 log10(h_MS) + 3.8 log10(fc)
/// with fc in GHz. Distances are clamped to min_distance_m. The two
/// branches do not meet at the breakpoint; the discontinuity is a property
/// of the published coefficients and is pinned by a regression test rather
/// than smoothed over.
double PathlossLosDb(double distance_m, const ChannelParams& p);

/// NLOS path loss in dB:
///   (44.9 - 6.55 log10(h_BS)) log10(d) + 5.83 log10(h_BS) + 15.38
///   + 23 log10(fc)
/// with fc in GHz, distance clamped to min_distance_m.
double PathlossNlosDb(double distance_m, const ChannelParams& p);

double PathlossDb(const LinkGeometry& g, const ChannelParams& p);

/// Link budget: tx power minus path loss, 0 dBi antennas.
double ReceivedPowerDbm(double tx_power_dbm, const LinkGeometry& g,
                        const ChannelParams& p);

/// Link budget against an explicit path loss (test hook).
inline double ReceivedPowerDbm(double tx_power_dbm, double pathloss_db) {
  return tx_power_dbm - pathloss_db;
}

/// Geometric line-of-sight classification: NLOS iff the tx-rx segment
/// passes through a building block. Maps without blocks (the static
/// playground, external traces) are always LOS.
Los ClassifyLos(const Vec2& tx, const Vec2& rx, const StreetMap& map);

inline double DbmToMw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double MwToDbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace cv2x
