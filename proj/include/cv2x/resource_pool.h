#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cv2x {

/// Raised on invalid configuration values, before any simulation step runs.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SubchannelScheme { kAdjacent, kNonAdjacent };

/// Sidelink resource pool geometry. One subframe is fixed at 1 ms; the
/// frequency axis is divided into subchannels of rbs_per_subchannel
/// resource blocks (180 kHz each).
struct ResourcePoolConfig {
  int bandwidth_mhz = 10;  // 10 or 20
  int rbs_per_subchannel = 10;
  int num_subchannels = 5;  // 5 for 10 MHz, 10 for 20 MHz
  uint32_t subframe_bitmap = 0xFFFFF;  // 20-bit mask, bit(t % 20)
  SubchannelScheme scheme = SubchannelScheme::kAdjacent;
  int lowest_rb_index = 0;

  static constexpr double kSubframeDurationMs = 1.0;
  static constexpr double kRbBandwidthHz = 180e3;
  static constexpr int kBitmapLength = 20;

  /// Pool preset for one of the two supported cellular bandwidths.
  static ResourcePoolConfig ForBandwidth(int mhz);

  int TotalRbs() const;  // 50 for 10 MHz, 100 for 20 MHz

  bool SubframeUsable(uint64_t subframe) const {
    return (subframe_bitmap >> (subframe % kBitmapLength)) & 1u;
  }

  void Validate() const;  // throws ConfigError
};

/// One reservable unit of the grid: a (subframe, subchannel) pair.
/// Subframe indices are absolute 64-bit counters from 0; no SFN wrap.
struct ResourceId {
  uint64_t subframe = 0;
  int subchannel = 0;

  friend bool operator==(const ResourceId&, const ResourceId&) = default;
  friend auto operator<=>(const ResourceId&, const ResourceId&) = default;
};

/// Per-UE radio and scheduling parameters.
struct UeRadioConfig {
  double tx_power_dbm = 23.0;
  double antenna_height_m = 1.5;
  int message_size_bytes = 190;
  int mcs = 20;
  int rri_ms = 100;  // resource reservation period
  int t1_ms = 4;
  int t2_ms = 100;
  double resel_prob = 0.5;  // probability of reselecting at counter expiry

  void Validate() const;  // throws ConfigError
};

/// Transport block capacity in bits for n_prb resource blocks at the given
/// MCS. Uses the PUSCH-style MCS-to-I_TBS mapping and the single-PRB column
/// of the standard transport block size table, scaled linearly with the
/// allocation width.
int64_t TransportBlockBits(int mcs, int n_prb);

/// Number of adjacent subchannels one message occupies.
/// Throws ConfigError if the message cannot fit the full pool width.
int SubchannelsPerPacket(const UeRadioConfig& radio,
                         const ResourcePoolConfig& pool);

/// Every usable (subframe, subchannel) pair with from <= subframe < to,
/// subframe-major, subchannel ascending.
std::vector<ResourceId> IterGrid(const ResourcePoolConfig& pool,
                                 uint64_t from_subframe, uint64_t to_subframe);

}  // namespace cv2x
