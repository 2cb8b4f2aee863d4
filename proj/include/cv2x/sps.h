#pragma once

#include <optional>
#include <vector>

#include "cv2x/resource_pool.h"
#include "cv2x/rng.h"
#include "cv2x/sensing.h"

namespace cv2x {

/// Candidate interval for a (re)selection triggered at subframe n:
/// resources with subframe in [n + t1, n + t2].
struct SelectionWindow {
  uint64_t trigger = 0;
  int t1_ms = 4;
  int t2_ms = 100;

  uint64_t First() const { return trigger + static_cast<uint64_t>(t1_ms); }
  uint64_t Last() const { return trigger + static_cast<uint64_t>(t2_ms); }
};

/// Scheduler knobs that are not per-figure experiment parameters.
struct SpsParams {
  double rsrp_exclusion_threshold_dbm = -110.0;
  int counter_min = 5;
  int counter_max = 15;
};

/// The currently held semi-persistent reservation of one UE.
struct Reservation {
  bool active = false;
  uint64_t next_subframe = 0;  // absolute subframe of the next grant
  int subch_first = 0;
  int subch_count = 1;
};

/// Per-UE scheduling state: the sensing memory, the held reservation and
/// the remaining transmissions until the next reselection decision.
struct SpsState {
  SensingWindow sensing;
  Reservation reservation;
  int counter = 0;
};

/// What happened at one transmit opportunity.
struct GrantDecision {
  uint64_t subframe = 0;  // grant subframe (the transmission happens here)
  int subch_first = 0;
  int subch_count = 1;
  bool counter_expired = false;
  bool reselected = false;
  int counter_draw = 0;         // new counter value, set when expired
  ResourceId new_resource{};    // set when reselected
  uint64_t trigger = 0;         // selection trigger subframe, when reselected
};

/// Window resources that are estimated free: the usable grid inside the
/// window minus
///  (a) subframes this UE could not sense because it was transmitting,
///      projected forward with its own reservation period, and
///  (b) resources claimed by decoded reservations at or above the RSRP
///      threshold, projected forward with their announced period.
/// For multi-subchannel packets a candidate is the first subchannel of a
/// slot of subch_count adjacent subchannels, and it is excluded if any of
/// its subchannels is claimed.
std::vector<ResourceId> BuildCandidateSet(const SensingWindow& sensing,
                                          const SelectionWindow& window,
                                          const ResourcePoolConfig& pool,
                                          int subch_count, int rri_ms,
                                          double rsrp_threshold_dbm);

/// Mean sensed RSSI (linear mW) of a candidate over its reservation-period
/// aligned observations in the sensing window; empty when the resource was
/// never observed.
std::optional<double> MeanSensedRssiMw(const SensingWindow& sensing,
                                       ResourceId r, int subch_count,
                                       int rri_ms);

struct SelectionCandidates {
  std::vector<ResourceId> eligible;   // lowest-RSSI slice, grid order
  size_t window_size = 0;             // usable window grid size M
  size_t target_size = 0;             // ceil(0.2 * M)
  double rsrp_threshold_dbm = 0.0;    // threshold after relaxation
};

/// The set the scheduler actually draws from. Candidates are rebuilt with
/// a 3 dB higher RSRP exclusion threshold until at least 20 % of the
/// window grid survives, then ranked by mean sensed RSSI (never-observed
/// resources rank best) and cut at the 20 % mark; ties at the cut value
/// are kept, which makes the set deterministic.
SelectionCandidates RankCandidates(const SensingWindow& sensing,
                                   const SelectionWindow& window,
                                   const ResourcePoolConfig& pool,
                                   int subch_count, int rri_ms,
                                   const SpsParams& sps);

/// Uniform pick from RankCandidates().eligible.
ResourceId SelectResource(const SensingWindow& sensing,
                          const SelectionWindow& window,
                          const ResourcePoolConfig& pool, int subch_count,
                          int rri_ms, const SpsParams& sps, Rng& rng);

/// Cold-start selection at `trigger`: picks the first resource, arms the
/// reservation and draws the reselection counter.
void InitialSelection(SpsState& state, uint64_t trigger,
                      const ResourcePoolConfig& pool,
                      const UeRadioConfig& radio, const SpsParams& sps,
                      int subch_count, Rng& rng);

/// Handles the grant at `now` (the reservation's due subframe): issues the
/// transmission on the held resource, decrements the counter and, on
/// expiry, keeps or reselects according to the reselection probability.
/// The reselection trigger is the grant subframe itself, so a new resource
/// lies at most t2 ms after the last transmission on the old one.
GrantDecision OnTransmitOpportunity(SpsState& state, uint64_t now,
                                    const ResourcePoolConfig& pool,
                                    const UeRadioConfig& radio,
                                    const SpsParams& sps, int subch_count,
                                    Rng& rng);

}  // namespace cv2x
