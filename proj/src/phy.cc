#include "cv2x/phy.h"

#include <cmath>

#include "cv2x/winner_b1.h"

namespace cv2x {

std::string_view ToString(ReceptionStatus s) {
  switch (s) {
    case ReceptionStatus::kReceived:
      return "received";
    case ReceptionStatus::kHalfDuplexLoss:
      return "half_duplex";
    case ReceptionStatus::kSinrFail:
      return "sinr_fail";
    case ReceptionStatus::kBelowSensitivity:
      return "below_sensitivity";
  }
  return "unknown";
}

double NoisePowerDbm(const ResourcePoolConfig& pool, const PhyParams& phy,
                     int n_subchannels) {
  const double bw_hz = static_cast<double>(n_subchannels) *
                       pool.rbs_per_subchannel *
                       ResourcePoolConfig::kRbBandwidthHz;
  return phy.thermal_noise_density_dbm_hz + 10.0 * std::log10(bw_hz) +
         phy.noise_figure_db;
}

void ResolveSubframe(const SubframeAirState& state,
                     std::span<const uint8_t> is_transmitting, int num_ues,
                     const ResourcePoolConfig& pool, const PhyParams& phy,
                     std::vector<ReceptionOutcome>& out) {
  const size_t n_tx = state.transmissions.size();
  const double sinr_threshold = std::pow(10.0, phy.sinr_threshold_db / 10.0);
  const double sensitivity_mw = DbmToMw(phy.rsrp_decode_threshold_dbm);

  for (size_t i = 0; i < n_tx; ++i) {
    const Transmission& tx = state.transmissions[i];
    const double noise_mw =
        DbmToMw(NoisePowerDbm(pool, phy, tx.subch_count));
    for (uint32_t r = 0; r < static_cast<uint32_t>(num_ues); ++r) {
      if (r == tx.sender) {
        continue;
      }
      ReceptionOutcome o;
      o.receiver = r;
      o.sender = tx.sender;
      o.packet_seq = tx.packet_seq;
      if (is_transmitting[r]) {
        o.status = ReceptionStatus::kHalfDuplexLoss;
        o.sinr_linear = 0.0;
        out.push_back(o);
        continue;
      }
      const double prx = tx.rx_power_mw[r];
      double interference = 0.0;
      for (size_t j = 0; j < n_tx; ++j) {
        if (j == i) continue;
        const Transmission& other = state.transmissions[j];
        if (tx.Overlaps(other)) {
          interference += other.rx_power_mw[r];
        }
      }
      const double sinr = prx / (noise_mw + interference);
      o.sinr_linear = sinr;
      if (prx < sensitivity_mw) {
        o.status = ReceptionStatus::kBelowSensitivity;
      } else if (sinr < sinr_threshold) {
        o.status = ReceptionStatus::kSinrFail;
      } else {
        o.status = ReceptionStatus::kReceived;
      }
      out.push_back(o);
    }
  }
}

void MeasureForSensing(const SubframeAirState& state, uint32_t receiver,
                       bool receiver_transmitting,
                       std::span<const uint8_t> decoded_by_tx,
                       std::vector<SensedEntry>& out) {
  if (receiver_transmitting) {
    return;  // half duplex: a transmitting UE senses nothing this subframe
  }
  for (size_t i = 0; i < state.transmissions.size(); ++i) {
    const Transmission& tx = state.transmissions[i];
    if (tx.sender == receiver) {
      continue;
    }
    for (int c = tx.subch_first; c < tx.subch_first + tx.subch_count; ++c) {
      double total_mw = 0.0;
      for (const Transmission& other : state.transmissions) {
        if (other.sender != receiver && other.CoversSubchannel(c)) {
          total_mw += other.rx_power_mw[receiver];
        }
      }
      SensedEntry e;
      e.subframe = state.subframe;
      e.subchannel = c;
      e.rssi_mw = total_mw;
      if (!decoded_by_tx.empty() && decoded_by_tx[i]) {
        e.decoded = true;
        e.source_id = tx.sender;
        e.announced_rri_ms = tx.announced_rri_ms;
        e.rsrp_mw = tx.rx_power_mw[receiver];
      }
      out.push_back(e);
    }
  }
}

}  // namespace cv2x
