#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cv2x/resource_pool.h"
#include "cv2x/sensing.h"

namespace cv2x {

/// Link-level abstraction parameters. Reception is a deterministic SINR
/// threshold rather than a BLER curve; the default operating point targets
/// MCS 20 and stays configurable.
struct PhyParams {
  double noise_figure_db = 9.0;
  double thermal_noise_density_dbm_hz = -174.0;
  double sinr_threshold_db = 12.0;          // MCS 20 operating point
  double rsrp_decode_threshold_dbm = -110.0;  // isolated-decode sensitivity
};

/// One attempted transmission within a subframe, with the received power
/// precomputed per potential receiver by the channel model.
struct Transmission {
  uint32_t sender = 0;
  uint64_t packet_seq = 0;  // per-sender sequence number
  int subch_first = 0;
  int subch_count = 1;
  int announced_rri_ms = 0;
  std::vector<double> rx_power_mw;  // indexed by receiver id

  bool Overlaps(const Transmission& other) const {
    return subch_first < other.subch_first + other.subch_count &&
           other.subch_first < subch_first + subch_count;
  }
  bool CoversSubchannel(int c) const {
    return c >= subch_first && c < subch_first + subch_count;
  }
};

/// Everything on the air in one subframe. Each sender appears at most once.
struct SubframeAirState {
  uint64_t subframe = 0;
  std::vector<Transmission> transmissions;
};

enum class ReceptionStatus : uint8_t {
  kReceived,
  kHalfDuplexLoss,
  kSinrFail,
  kBelowSensitivity,
};

std::string_view ToString(ReceptionStatus s);

struct ReceptionOutcome {
  uint32_t receiver = 0;
  uint32_t sender = 0;
  uint64_t packet_seq = 0;
  ReceptionStatus status = ReceptionStatus::kSinrFail;
  double sinr_linear = 0.0;  // 0 for half-duplex losses

  double SinrDb() const { return 10.0 * std::log10(sinr_linear); }
};

/// Thermal noise over n_subchannels of pool bandwidth plus noise figure.
double NoisePowerDbm(const ResourcePoolConfig& pool, const PhyParams& phy,
                     int n_subchannels);

/// Decides every (receiver, transmission) pair of the subframe:
/// a receiver that transmits loses everything to half duplex; otherwise
/// SINR = P_rx / (noise + sum of co-channel received powers), where
/// co-channel means intersecting subchannel sets. Outcomes are appended
/// in (transmission, receiver) order; the sender itself gets no outcome.
void ResolveSubframe(const SubframeAirState& state,
                     std::span<const uint8_t> is_transmitting, int num_ues,
                     const ResourcePoolConfig& pool, const PhyParams& phy,
                     std::vector<ReceptionOutcome>& out);

/// Sensing measurements one receiver takes from this subframe: one entry
/// per transmission per occupied subchannel, carrying the total received
/// power on that subchannel, plus the announced reservation when the
/// transmission was decoded. A receiver that transmitted sees nothing.
void MeasureForSensing(const SubframeAirState& state, uint32_t receiver,
                       bool receiver_transmitting,
                       std::span<const uint8_t> decoded_by_tx,
                       std::vector<SensedEntry>& out);

}  // namespace cv2x
