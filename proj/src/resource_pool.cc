#include "cv2x/resource_pool.h"

#include <array>

namespace cv2x {

ResourcePoolConfig ResourcePoolConfig::ForBandwidth(int mhz) {
  ResourcePoolConfig cfg;
  cfg.bandwidth_mhz = mhz;
  cfg.num_subchannels = (mhz == 20) ? 10 : 5;
  cfg.Validate();
  return cfg;
}

int ResourcePoolConfig::TotalRbs() const {
  switch (bandwidth_mhz) {
    case 10:
      return 50;
    case 20:
      return 100;
    default:
      throw ConfigError("channel_bandwidth_mhz must be 10 or 20, got " +
                        std::to_string(bandwidth_mhz));
  }
}

void ResourcePoolConfig::Validate() const {
  const int total = TotalRbs();
  if (rbs_per_subchannel <= 0) {
    throw ConfigError("rbs_per_subchannel must be positive");
  }
  if (num_subchannels <= 0) {
    throw ConfigError("number_of_subchannels must be positive");
  }
  if (num_subchannels * rbs_per_subchannel + lowest_rb_index > total) {
    throw ConfigError(
        "pool exceeds carrier: " + std::to_string(num_subchannels) + " x " +
        std::to_string(rbs_per_subchannel) + " RBs + offset " +
        std::to_string(lowest_rb_index) + " > " + std::to_string(total));
  }
  if (lowest_rb_index < 0) {
    throw ConfigError("lowest_rb_index must be >= 0");
  }
  if (subframe_bitmap == 0 || subframe_bitmap > 0xFFFFF) {
    throw ConfigError("subframe_bitmap must be a nonzero 20-bit mask");
  }
  if (scheme != SubchannelScheme::kAdjacent) {
    throw ConfigError(
        "subchannel_scheme: only 'adjacent' is supported; the non-adjacent "
        "scheme is not implemented");
  }
}

void UeRadioConfig::Validate() const {
  if (message_size_bytes < 0) {
    throw ConfigError("message_size_bytes must be >= 0");
  }
  if (mcs < 0 || mcs > 28) {
    throw ConfigError("mcs must be in [0, 28], got " + std::to_string(mcs));
  }
  if (rri_ms <= 0) {
    throw ConfigError("resource_reservation_period_ms must be positive");
  }
  if (t1_ms < 1 || t1_ms >= t2_ms) {
    throw ConfigError("selection window requires 1 <= t1_ms < t2_ms");
  }
  if (t2_ms > rri_ms) {
    throw ConfigError("t2_ms must not exceed the resource reservation period");
  }
  if (resel_prob < 0.2 || resel_prob > 1.0) {
    throw ConfigError(
        "resource_reselection_probability must lie in [0.2, 1], got " +
        std::to_string(resel_prob));
  }
  if (antenna_height_m <= 1.0) {
    throw ConfigError("antenna_height_m must exceed 1 m");
  }
}

int64_t TransportBlockBits(int mcs, int n_prb) {
  if (mcs < 0 || mcs > 28) {
    throw ConfigError("mcs must be in [0, 28]");
  }
  if (n_prb <= 0) {
    return 0;
  }
  // PUSCH-style modulation/I_TBS mapping (36.213 Table 8.6.1-1 structure):
  // MCS 0-10 -> I_TBS = MCS, 11-20 -> MCS-1, 21-28 -> MCS-2.
  int i_tbs;
  if (mcs <= 10) {
    i_tbs = mcs;
  } else if (mcs <= 20) {
    i_tbs = mcs - 1;
  } else {
    i_tbs = mcs - 2;
  }
  // Single-PRB column of the standard TBS table; wider allocations are
  // linearized from it, which is accurate to a few percent and keeps the
  // capacity model monotone in both arguments.
  static constexpr std::array<int, 27> kTbsOnePrb = {
      16,  24,  32,  40,  56,  72,  88,  104, 120, 136, 144, 176, 208, 224,
      256, 280, 328, 336, 376, 408, 440, 488, 520, 552, 584, 616, 712};
  return static_cast<int64_t>(kTbsOnePrb[static_cast<size_t>(i_tbs)]) * n_prb;
}

int SubchannelsPerPacket(const UeRadioConfig& radio,
                         const ResourcePoolConfig& pool) {
  radio.Validate();
  pool.Validate();
  const int64_t payload_bits = static_cast<int64_t>(radio.message_size_bytes) * 8;
  for (int k = 1; k <= pool.num_subchannels; ++k) {
    if (TransportBlockBits(radio.mcs, k * pool.rbs_per_subchannel) >=
        payload_bits) {
      return k;
    }
  }
  throw ConfigError(
      "message of " + std::to_string(radio.message_size_bytes) +
      " bytes does not fit in " + std::to_string(pool.num_subchannels) +
      " subchannels at MCS " + std::to_string(radio.mcs));
}

std::vector<ResourceId> IterGrid(const ResourcePoolConfig& pool,
                                 uint64_t from_subframe,
                                 uint64_t to_subframe) {
  std::vector<ResourceId> out;
  if (to_subframe <= from_subframe) {
    return out;
  }
  out.reserve(static_cast<size_t>(to_subframe - from_subframe) *
              static_cast<size_t>(pool.num_subchannels));
  for (uint64_t sf = from_subframe; sf < to_subframe; ++sf) {
    if (!pool.SubframeUsable(sf)) {
      continue;
    }
    for (int c = 0; c < pool.num_subchannels; ++c) {
      out.push_back(ResourceId{sf, c});
    }
  }
  return out;
}

}  // namespace cv2x
