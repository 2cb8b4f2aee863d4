#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cv2x/metrics.h"
#include "cv2x/phy.h"
#include "cv2x/resource_pool.h"
#include "cv2x/sps.h"
#include "cv2x/winner_b1.h"

namespace cv2x {

enum class ScenarioKind { kStatic, kManhattan, kTrace };

/// How the channel condition of a link is decided. kAlwaysLos treats the
/// whole playground as line of sight (the default for the urban
/// experiments); kGeometric derives NLOS from building blockage on the
/// street map instead.
enum class LosMode { kAlwaysLos, kGeometric };

std::string_view ToString(ScenarioKind k);
std::string_view ToString(LosMode m);

struct SimConfig {
  uint64_t duration_ms = 30000;
  uint64_t warmup_ms = 1000;  // excluded from metrics; covers the sensing window
  uint64_t seed = 1;
  int n_ues = 0;
  ScenarioKind scenario = ScenarioKind::kStatic;
  std::string trace_path;
  LosMode los_mode = LosMode::kAlwaysLos;
  double vehicle_speed_kmh = 60.0;
  double baseline_a_m = 0.0;
  double baseline_b_m = 150.0;

  ResourcePoolConfig pool;
  UeRadioConfig radio;
  PhyParams phy;
  ChannelParams channel;
  SpsParams sps;

  // Capture switches for tests and verbose CSV logs. They do not affect
  // the simulation dynamics and are excluded from the config hash.
  bool capture_reception_log = false;
  bool capture_transmission_log = false;
  bool capture_resel_log = false;
  bool capture_pir_samples = false;

  void Validate() const;  // throws ConfigError

  /// T2 follows min(100 ms, RRI) unless set explicitly.
  static int DefaultT2ForRri(int rri_ms);

  /// Key=value serialization of every dynamics-affecting field, sorted by
  /// key; the run metadata records it and Hash() digests it.
  std::string CanonicalString() const;
  uint64_t Hash() const;
};

/// One reselection-counter expiry (or cold-start selection), for the
/// optional event log. `reselected` distinguishes an actual move from a
/// keep decision; both redraw the counter.
struct ReselEvent {
  uint64_t trigger = 0;  // grant subframe at which the decision fired
  uint32_t ue = 0;
  bool initial = false;
  bool reselected = false;
  ResourceId old_resource{};
  ResourceId new_resource{};  // next grant subframe and subchannel
  int counter_draw = 0;
};

struct ReceptionRecord {
  uint64_t subframe = 0;
  uint32_t sender = 0;
  uint32_t receiver = 0;
  uint64_t packet_seq = 0;
  float distance_m = 0.0f;
  float sinr_db = 0.0f;
  ReceptionStatus status = ReceptionStatus::kSinrFail;
};

struct TransmissionRecord {
  uint64_t subframe = 0;
  uint32_t sender = 0;
  uint64_t packet_seq = 0;
  int subch_first = 0;
  int subch_count = 1;
};

struct SimResult {
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  uint64_t prr_x = 0;
  uint64_t prr_y = 0;
  PirSummary pir;
  uint64_t total_transmissions = 0;
  double wall_seconds = 0.0;

  std::vector<uint32_t> pir_samples;
  std::vector<ReselEvent> resel_log;
  std::vector<ReceptionRecord> reception_log;
  std::vector<TransmissionRecord> transmission_log;

  std::optional<double> Prr() const {
    if (prr_y == 0) return std::nullopt;
    return static_cast<double>(prr_x) / static_cast<double>(prr_y);
  }
};

/// Executes one deterministic run. Identical config and seed produce
/// identical results bit for bit.
SimResult Run(const SimConfig& cfg);

/// Executes a batch, optionally on a small thread pool. Results match the
/// sequential execution regardless of `jobs`.
std::vector<SimResult> RunMany(const std::vector<SimConfig>& cfgs,
                               int jobs = 1);

}  // namespace cv2x
