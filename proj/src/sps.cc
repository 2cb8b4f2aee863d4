#include "cv2x/sps.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cv2x/winner_b1.h"

namespace cv2x {

namespace {

// Start positions of a subch_count-wide slot in one subframe.
int StartPositions(const ResourcePoolConfig& pool, int subch_count) {
  return pool.num_subchannels - subch_count + 1;
}

std::vector<uint64_t> UsableSubframes(const SelectionWindow& window,
                                      const ResourcePoolConfig& pool) {
  std::vector<uint64_t> out;
  out.reserve(static_cast<size_t>(window.t2_ms - window.t1_ms + 1));
  for (uint64_t sf = window.First(); sf <= window.Last(); ++sf) {
    if (pool.SubframeUsable(sf)) {
      out.push_back(sf);
    }
  }
  return out;
}

uint64_t SensingFloor(const SelectionWindow& window) {
  const uint64_t n = window.trigger;
  const uint64_t span = SensingWindow::kLengthMs - 1;
  return n >= span ? n - span : 0;
}

// Marks window subframes hit by a reservation observed at `observed` with
// period `period_ms`, starting strictly after the observation.
template <typename MarkFn>
void ProjectForward(uint64_t observed, int period_ms,
                    const SelectionWindow& window, MarkFn&& mark) {
  if (period_ms <= 0) {
    return;
  }
  const uint64_t period = static_cast<uint64_t>(period_ms);
  const uint64_t first = window.First();
  uint64_t sf = observed + period;
  if (sf < first) {
    sf += (first - sf + period - 1) / period * period;
  }
  for (; sf <= window.Last(); sf += period) {
    mark(sf);
  }
}

}  // namespace

std::vector<ResourceId> BuildCandidateSet(const SensingWindow& sensing,
                                          const SelectionWindow& window,
                                          const ResourcePoolConfig& pool,
                                          int subch_count, int rri_ms,
                                          double rsrp_threshold_dbm) {
  const int width = window.t2_ms - window.t1_ms + 1;
  const int n_subch = pool.num_subchannels;
  // excluded[(sf - first) * n_subch + c]
  std::vector<uint8_t> excluded(static_cast<size_t>(width) *
                                static_cast<size_t>(n_subch));
  const uint64_t first = window.First();
  auto mark = [&](uint64_t sf, int c) {
    excluded[static_cast<size_t>(sf - first) * n_subch + c] = 1;
  };

  const double threshold_mw = DbmToMw(rsrp_threshold_dbm);
  const uint64_t floor = SensingFloor(window);
  for (uint64_t s = floor; s <= window.trigger; ++s) {
    // (a) own transmissions: the UE was deaf in these subframes, so any
    // reservation announced there would be invisible. Exclude their
    // forward projection on all subchannels.
    if (sensing.OwnTxAt(s)) {
      ProjectForward(s, rri_ms, window, [&](uint64_t sf) {
        for (int c = 0; c < n_subch; ++c) mark(sf, c);
      });
    }
    // (b) decoded reservations above the exclusion threshold.
    const std::vector<SensedEntry>* entries = sensing.EntriesAt(s);
    if (entries == nullptr) {
      continue;
    }
    for (const SensedEntry& e : *entries) {
      if (!e.decoded || e.rsrp_mw < threshold_mw) {
        continue;
      }
      ProjectForward(e.subframe, e.announced_rri_ms, window,
                     [&](uint64_t sf) { mark(sf, e.subchannel); });
    }
  }

  std::vector<ResourceId> out;
  const int starts = StartPositions(pool, subch_count);
  for (uint64_t sf : UsableSubframes(window, pool)) {
    const size_t row = static_cast<size_t>(sf - first) * n_subch;
    for (int c0 = 0; c0 < starts; ++c0) {
      bool free = true;
      for (int c = c0; c < c0 + subch_count; ++c) {
        if (excluded[row + c]) {
          free = false;
          break;
        }
      }
      if (free) {
        out.push_back(ResourceId{sf, c0});
      }
    }
  }
  return out;
}

std::optional<double> MeanSensedRssiMw(const SensingWindow& sensing,
                                       ResourceId r, int subch_count,
                                       int rri_ms) {
  if (rri_ms <= 0) {
    return std::nullopt;
  }
  const uint64_t period = static_cast<uint64_t>(rri_ms);
  double sum = 0.0;
  size_t count = 0;
  // Ascending over the aligned past occasions r.subframe - k * rri.
  const uint64_t span = SensingWindow::kLengthMs;
  uint64_t s_first = r.subframe >= span ? r.subframe - span : 0;
  s_first += (r.subframe - s_first) % period;  // align to the candidate
  for (uint64_t s = s_first; s < r.subframe; s += period) {
    const std::vector<SensedEntry>* entries = sensing.EntriesAt(s);
    if (entries == nullptr) {
      continue;
    }
    for (const SensedEntry& e : *entries) {
      if (e.subchannel >= r.subchannel &&
          e.subchannel < r.subchannel + subch_count) {
        sum += e.rssi_mw;
        ++count;
      }
    }
  }
  if (count == 0) {
    return std::nullopt;
  }
  return sum / static_cast<double>(count);
}

SelectionCandidates RankCandidates(const SensingWindow& sensing,
                                   const SelectionWindow& window,
                                   const ResourcePoolConfig& pool,
                                   int subch_count, int rri_ms,
                                   const SpsParams& sps) {
  SelectionCandidates result;
  const std::vector<uint64_t> usable = UsableSubframes(window, pool);
  result.window_size = usable.size() *
                       static_cast<size_t>(StartPositions(pool, subch_count));
  result.target_size = std::max<size_t>(1, (result.window_size + 4) / 5);
  if (result.window_size == 0) {
    throw ConfigError("selection window contains no usable subframe");
  }

  double threshold = sps.rsrp_exclusion_threshold_dbm;
  std::vector<ResourceId> candidates;
  for (;;) {
    candidates = BuildCandidateSet(sensing, window, pool, subch_count, rri_ms,
                                   threshold);
    if (candidates.size() >= result.target_size || threshold > 60.0) {
      break;
    }
    threshold += 3.0;
  }
  if (candidates.empty()) {
    // Degenerate pools where even the blind-spot exclusion leaves nothing:
    // fall back to the full usable window.
    for (uint64_t sf : usable) {
      for (int c0 = 0; c0 < StartPositions(pool, subch_count); ++c0) {
        candidates.push_back(ResourceId{sf, c0});
      }
    }
  }
  result.rsrp_threshold_dbm = threshold;

  // Rank by mean sensed RSSI; unobserved resources rank as -inf (best).
  std::vector<double> rssi(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    rssi[i] = MeanSensedRssiMw(sensing, candidates[i], subch_count, rri_ms)
                  .value_or(-std::numeric_limits<double>::infinity());
  }
  const size_t keep = std::min(result.target_size, candidates.size());
  std::vector<double> sorted(rssi);
  std::nth_element(sorted.begin(), sorted.begin() + (keep - 1), sorted.end());
  const double cut = sorted[keep - 1];
  result.eligible.reserve(keep);
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (rssi[i] <= cut) {
      result.eligible.push_back(candidates[i]);
    }
  }
  return result;
}

ResourceId SelectResource(const SensingWindow& sensing,
                          const SelectionWindow& window,
                          const ResourcePoolConfig& pool, int subch_count,
                          int rri_ms, const SpsParams& sps, Rng& rng) {
  const SelectionCandidates ranked =
      RankCandidates(sensing, window, pool, subch_count, rri_ms, sps);
  return ranked.eligible[rng.UniformIndex(ranked.eligible.size())];
}

void InitialSelection(SpsState& state, uint64_t trigger,
                      const ResourcePoolConfig& pool,
                      const UeRadioConfig& radio, const SpsParams& sps,
                      int subch_count, Rng& rng) {
  const SelectionWindow window{trigger, radio.t1_ms, radio.t2_ms};
  const ResourceId pick = SelectResource(state.sensing, window, pool,
                                         subch_count, radio.rri_ms, sps, rng);
  state.reservation.active = true;
  state.reservation.next_subframe = pick.subframe;
  state.reservation.subch_first = pick.subchannel;
  state.reservation.subch_count = subch_count;
  state.counter =
      static_cast<int>(rng.UniformInt(sps.counter_min, sps.counter_max));
}

GrantDecision OnTransmitOpportunity(SpsState& state, uint64_t now,
                                    const ResourcePoolConfig& pool,
                                    const UeRadioConfig& radio,
                                    const SpsParams& sps, int subch_count,
                                    Rng& rng) {
  GrantDecision d;
  d.subframe = now;
  d.subch_first = state.reservation.subch_first;
  d.subch_count = state.reservation.subch_count;

  state.counter -= 1;
  if (state.counter > 0) {
    state.reservation.next_subframe = now + static_cast<uint64_t>(radio.rri_ms);
    return d;
  }

  d.counter_expired = true;
  if (rng.Bernoulli(radio.resel_prob)) {
    const SelectionWindow window{now, radio.t1_ms, radio.t2_ms};
    const ResourceId pick = SelectResource(state.sensing, window, pool,
                                           subch_count, radio.rri_ms, sps, rng);
    state.reservation.next_subframe = pick.subframe;
    state.reservation.subch_first = pick.subchannel;
    d.reselected = true;
    d.new_resource = pick;
    d.trigger = now;
  } else {
    state.reservation.next_subframe = now + static_cast<uint64_t>(radio.rri_ms);
  }
  state.counter =
      static_cast<int>(rng.UniformInt(sps.counter_min, sps.counter_max));
  d.counter_draw = state.counter;
  return d;
}

}  // namespace cv2x
