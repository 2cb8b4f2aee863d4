#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace cv2x {

/// One channel observation made by a UE in one subframe. Decoded entries
/// carry the sender's announced reservation; undecoded entries carry only
/// the measured power. rssi_mw is the total received power on this
/// subchannel in this subframe, so overlapping transmissions produce
/// entries with equal RSSI.
struct SensedEntry {
  uint64_t subframe = 0;
  int subchannel = 0;
  double rssi_mw = 0.0;
  bool decoded = false;
  uint32_t source_id = 0;      // valid iff decoded
  int announced_rri_ms = 0;    // valid iff decoded
  double rsrp_mw = 0.0;        // valid iff decoded

  double RssiDbm() const { return 10.0 * std::log10(rssi_mw); }
  double RsrpDbm() const { return 10.0 * std::log10(rsrp_mw); }
};

/// Ring buffer over the trailing 1000 subframes of observations, the
/// sensing window of the SPS scheme. The window at time `now` covers
/// (now - 1000, now]; anything older is evicted by slot reuse.
///
/// Slots also remember the subframes in which the owning UE itself
/// transmitted: it could not sense those (half duplex), and resource
/// selection has to treat them as blind spots.
class SensingWindow {
 public:
  static constexpr int kLengthMs = 1000;

  SensingWindow() : m_slots(kLengthMs) {}

  /// Rotates the ring to `now`, clearing whatever aged out.
  void BeginSubframe(uint64_t now) {
    Slot& s = m_slots[static_cast<size_t>(now % kLengthMs)];
    s.subframe = now;
    s.own_tx = false;
    s.entries.clear();
  }

  /// Appends this subframe's observations. Entries must stem from `now`.
  void Ingest(std::span<const SensedEntry> entries, uint64_t now) {
    Slot& s = SlotFor(now);
    s.entries.insert(s.entries.end(), entries.begin(), entries.end());
  }

  void MarkOwnTransmission(uint64_t now) { SlotFor(now).own_tx = true; }

  bool OwnTxAt(uint64_t subframe) const {
    const Slot& s = m_slots[static_cast<size_t>(subframe % kLengthMs)];
    return s.subframe == subframe && s.own_tx;
  }

  /// Entries observed at `subframe`, or nullptr if outside the window.
  const std::vector<SensedEntry>* EntriesAt(uint64_t subframe) const {
    const Slot& s = m_slots[static_cast<size_t>(subframe % kLengthMs)];
    if (s.subframe != subframe) {
      return nullptr;
    }
    return &s.entries;
  }

  size_t TotalEntries() const {
    size_t n = 0;
    for (const Slot& s : m_slots) n += s.entries.size();
    return n;
  }

 private:
  struct Slot {
    uint64_t subframe = std::numeric_limits<uint64_t>::max();
    bool own_tx = false;
    std::vector<SensedEntry> entries;
  };

  Slot& SlotFor(uint64_t now) {
    Slot& s = m_slots[static_cast<size_t>(now % kLengthMs)];
    if (s.subframe != now) {
      s.subframe = now;
      s.own_tx = false;
      s.entries.clear();
    }
    return s;
  }

  std::vector<Slot> m_slots;
};

}  // namespace cv2x
