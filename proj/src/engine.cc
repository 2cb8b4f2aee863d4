#include "cv2x/engine.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "cv2x/scenario.h"

namespace cv2x {

std::string_view ToString(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kStatic:
      return "static";
    case ScenarioKind::kManhattan:
      return "manhattan";
    case ScenarioKind::kTrace:
      return "trace";
  }
  return "unknown";
}

std::string_view ToString(LosMode m) {
  return m == LosMode::kAlwaysLos ? "always_los" : "geometric";
}

int SimConfig::DefaultT2ForRri(int rri_ms) { return std::min(100, rri_ms); }

void SimConfig::Validate() const {
  pool.Validate();
  radio.Validate();
  if (n_ues < 0) {
    throw ConfigError("number_of_v_ues must be >= 0");
  }
  if (duration_ms == 0 || duration_ms <= warmup_ms) {
    throw ConfigError("simulation_time_ms must exceed warmup_ms");
  }
  if (warmup_ms != 0 && warmup_ms < SensingWindow::kLengthMs) {
    throw ConfigError(
        "warmup_ms must be 0 or at least the 1000 ms sensing window");
  }
  if (scenario == ScenarioKind::kTrace && trace_path.empty()) {
    throw ConfigError("scenario 'trace' requires a trace_file");
  }
  if (scenario == ScenarioKind::kManhattan && vehicle_speed_kmh <= 0.0) {
    throw ConfigError("vehicle_speed_kmh must be positive");
  }
  if (baseline_a_m < 0.0 || baseline_b_m <= baseline_a_m) {
    throw ConfigError("baseline distance requires 0 <= a < b");
  }
  if (channel.fc_ghz <= 0.0 || channel.min_distance_m <= 0.0) {
    throw ConfigError("carrier frequency and min distance must be positive");
  }
  if (channel.h_bs_m <= 1.0 || channel.h_ms_m <= 1.0) {
    throw ConfigError("antenna heights must exceed 1 m");
  }
  if (pool.subframe_bitmap != 0xFFFFF &&
      radio.rri_ms % ResourcePoolConfig::kBitmapLength != 0) {
    throw ConfigError(
        "a masked subframe_bitmap requires the reservation period to be a "
        "multiple of the 20 ms bitmap period");
  }
}

namespace {

void AppendKv(std::string& s, const char* key, const std::string& value) {
  s += key;
  s += '=';
  s += value;
  s += ';';
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string SimConfig::CanonicalString() const {
  std::string s;
  AppendKv(s, "antenna_height_m", FormatDouble(radio.antenna_height_m));
  AppendKv(s, "baseline_a_m", FormatDouble(baseline_a_m));
  AppendKv(s, "baseline_b_m", FormatDouble(baseline_b_m));
  AppendKv(s, "carrier_frequency_ghz", FormatDouble(channel.fc_ghz));
  AppendKv(s, "channel_bandwidth_mhz", std::to_string(pool.bandwidth_mhz));
  AppendKv(s, "h_bs_m", FormatDouble(channel.h_bs_m));
  AppendKv(s, "h_ms_m", FormatDouble(channel.h_ms_m));
  AppendKv(s, "los_mode", std::string(ToString(los_mode)));
  AppendKv(s, "lowest_rb_index", std::to_string(pool.lowest_rb_index));
  AppendKv(s, "mcs", std::to_string(radio.mcs));
  AppendKv(s, "message_size_bytes", std::to_string(radio.message_size_bytes));
  AppendKv(s, "min_distance_m", FormatDouble(channel.min_distance_m));
  AppendKv(s, "noise_figure_db", FormatDouble(phy.noise_figure_db));
  AppendKv(s, "number_of_subchannels", std::to_string(pool.num_subchannels));
  AppendKv(s, "number_of_v_ues", std::to_string(n_ues));
  AppendKv(s, "rbs_per_subchannel", std::to_string(pool.rbs_per_subchannel));
  AppendKv(s, "resource_reselection_probability",
           FormatDouble(radio.resel_prob));
  AppendKv(s, "resource_reservation_period_ms", std::to_string(radio.rri_ms));
  AppendKv(s, "rsrp_decode_threshold_dbm",
           FormatDouble(phy.rsrp_decode_threshold_dbm));
  AppendKv(s, "rsrp_exclusion_threshold_dbm",
           FormatDouble(sps.rsrp_exclusion_threshold_dbm));
  AppendKv(s, "scenario", std::string(ToString(scenario)));
  AppendKv(s, "seed", std::to_string(seed));
  AppendKv(s, "simulation_time_ms", std::to_string(duration_ms));
  AppendKv(s, "sinr_threshold_db", FormatDouble(phy.sinr_threshold_db));
  char bitmap[16];
  std::snprintf(bitmap, sizeof bitmap, "0x%05X", pool.subframe_bitmap);
  AppendKv(s, "subframe_bitmap", bitmap);
  AppendKv(s, "subchannel_scheme", "adjacent");
  AppendKv(s, "t1_ms", std::to_string(radio.t1_ms));
  AppendKv(s, "t2_ms", std::to_string(radio.t2_ms));
  AppendKv(s, "thermal_noise_density_dbm_hz",
           FormatDouble(phy.thermal_noise_density_dbm_hz));
  AppendKv(s, "trace_file", trace_path);
  AppendKv(s, "transmission_power_dbm", FormatDouble(radio.tx_power_dbm));
  AppendKv(s, "vehicle_speed_kmh", FormatDouble(vehicle_speed_kmh));
  AppendKv(s, "warmup_ms", std::to_string(warmup_ms));
  return s;
}

uint64_t SimConfig::Hash() const {
  // FNV-1a 64 over the canonical serialization.
  uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : CanonicalString()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

Scenario BuildScenario(const SimConfig& cfg, Rng& rng) {
  switch (cfg.scenario) {
    case ScenarioKind::kStatic:
      if (cfg.n_ues > 250) {
        std::fprintf(stderr,
                     "warning: static scenario with %d V-UEs exceeds the "
                     "250-vehicle design point\n",
                     cfg.n_ues);
      }
      return BuildStaticScenario(cfg.n_ues, rng);
    case ScenarioKind::kManhattan:
      return BuildManhattanScenario(cfg.n_ues, cfg.vehicle_speed_kmh, rng);
    case ScenarioKind::kTrace: {
      MobilityTrace trace = LoadTrace(cfg.trace_path);
      if (cfg.n_ues != 0 &&
          static_cast<size_t>(cfg.n_ues) != trace.NodeCount()) {
        throw ConfigError("number_of_v_ues (" + std::to_string(cfg.n_ues) +
                          ") does not match the trace node count (" +
                          std::to_string(trace.NodeCount()) + ")");
      }
      return BuildTraceScenario(std::move(trace));
    }
  }
  throw ConfigError("unknown scenario");
}

}  // namespace

SimResult Run(const SimConfig& cfg) {
  cfg.Validate();
  const auto t_start = std::chrono::steady_clock::now();

  SimResult result;
  result.seed = cfg.seed;
  result.config_hash = cfg.Hash();

  Rng rng(cfg.seed);
  Scenario scenario = BuildScenario(cfg, rng);
  const uint32_t n = scenario.mobility->NodeCount();
  const bool geometric = cfg.los_mode == LosMode::kGeometric &&
                         !scenario.map.blocks.empty();
  const bool is_static = scenario.mobility->IsStatic();

  PrrAccumulator prr;
  prr.baseline_a_m = cfg.baseline_a_m;
  prr.baseline_b_m = cfg.baseline_b_m;
  PirTracker pir(n, cfg.duration_ms, cfg.capture_pir_samples);

  if (n == 0) {
    result.pir = Summarize(pir);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
    return result;
  }

  const int k = SubchannelsPerPacket(cfg.radio, cfg.pool);

  std::vector<Vec2> pos(n);
  scenario.mobility->Advance(0, rng);
  for (uint32_t u = 0; u < n; ++u) {
    pos[u] = scenario.mobility->Position(u);
  }

  // Static scenario: the link budget never changes, precompute it.
  std::vector<double> static_prx_mw;
  std::vector<float> static_dist;
  if (is_static) {
    static_prx_mw.resize(static_cast<size_t>(n) * n, 0.0);
    static_dist.resize(static_cast<size_t>(n) * n, 0.0f);
    for (uint32_t a = 0; a < n; ++a) {
      for (uint32_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const double d = Distance(pos[a], pos[b]);
        const LinkGeometry g{d, Los::kLos};
        static_prx_mw[static_cast<size_t>(a) * n + b] =
            DbmToMw(ReceivedPowerDbm(cfg.radio.tx_power_dbm, g, cfg.channel));
        static_dist[static_cast<size_t>(a) * n + b] = static_cast<float>(d);
      }
    }
  }

  std::vector<SpsState> states(n);
  std::vector<uint64_t> initial_trigger(n);
  for (uint32_t u = 0; u < n; ++u) {
    // Staggered cold start: every UE runs its first selection at a random
    // subframe inside one reservation period.
    initial_trigger[u] =
        static_cast<uint64_t>(rng.UniformInt(0, cfg.radio.rri_ms - 1));
  }
  std::vector<uint64_t> packet_seq(n, 0);

  SubframeAirState air;
  std::vector<uint8_t> transmitting(n, 0);
  std::vector<ReceptionOutcome> outcomes;
  std::vector<uint8_t> decoded;       // [tx_index * n + receiver]
  std::vector<uint8_t> flags;         // per-receiver decode flags, reused
  std::vector<float> dist_buf;        // [tx_index * n + receiver], moving case
  std::vector<SensedEntry> scratch;

  for (uint64_t t = 0; t < cfg.duration_ms; ++t) {
    if (t != 0) {
      scenario.mobility->Advance(t, rng);
      if (!is_static) {
        for (uint32_t u = 0; u < n; ++u) {
          pos[u] = scenario.mobility->Position(u);
        }
      }
    }

    for (uint32_t u = 0; u < n; ++u) {
      states[u].sensing.BeginSubframe(t);
    }

    // MAC: initial selections, then grants due this subframe.
    air.subframe = t;
    air.transmissions.clear();
    std::fill(transmitting.begin(), transmitting.end(), 0);
    for (uint32_t u = 0; u < n; ++u) {
      SpsState& st = states[u];
      if (!st.reservation.active && initial_trigger[u] == t) {
        InitialSelection(st, t, cfg.pool, cfg.radio, cfg.sps, k, rng);
        if (cfg.capture_resel_log) {
          result.resel_log.push_back(
              ReselEvent{t, u, true, true, ResourceId{},
                         ResourceId{st.reservation.next_subframe,
                                    st.reservation.subch_first},
                         st.counter});
        }
      }
      if (st.reservation.active && st.reservation.next_subframe == t) {
        const ResourceId old_res{t % static_cast<uint64_t>(cfg.radio.rri_ms),
                                 st.reservation.subch_first};
        const GrantDecision d =
            OnTransmitOpportunity(st, t, cfg.pool, cfg.radio, cfg.sps, k, rng);
        if (cfg.capture_resel_log && d.counter_expired) {
          result.resel_log.push_back(ReselEvent{
              t, u, false, d.reselected, old_res,
              ResourceId{st.reservation.next_subframe,
                         st.reservation.subch_first},
              d.counter_draw});
        }
        Transmission tx;
        tx.sender = u;
        tx.packet_seq = packet_seq[u]++;
        tx.subch_first = d.subch_first;
        tx.subch_count = d.subch_count;
        tx.announced_rri_ms = cfg.radio.rri_ms;
        air.transmissions.push_back(std::move(tx));
        transmitting[u] = 1;
      }
    }

    const size_t n_tx = air.transmissions.size();
    if (n_tx == 0) {
      continue;
    }

    // Channel: received power (and distance) per transmission and receiver.
    if (!is_static) {
      dist_buf.assign(n_tx * n, 0.0f);
    }
    for (size_t i = 0; i < n_tx; ++i) {
      Transmission& tx = air.transmissions[i];
      tx.rx_power_mw.resize(n);
      const uint32_t s = tx.sender;
      if (is_static) {
        const double* row = &static_prx_mw[static_cast<size_t>(s) * n];
        std::copy(row, row + n, tx.rx_power_mw.begin());
      } else {
        for (uint32_t r = 0; r < n; ++r) {
          if (r == s) {
            tx.rx_power_mw[r] = 0.0;
            continue;
          }
          const double d = Distance(pos[s], pos[r]);
          LinkGeometry g{d, Los::kLos};
          if (geometric) {
            g.los = ClassifyLos(pos[s], pos[r], scenario.map);
          }
          tx.rx_power_mw[r] = DbmToMw(
              ReceivedPowerDbm(cfg.radio.tx_power_dbm, g, cfg.channel));
          dist_buf[i * n + r] = static_cast<float>(d);
        }
      }
    }

    outcomes.clear();
    ResolveSubframe(air, transmitting, static_cast<int>(n), cfg.pool, cfg.phy,
                    outcomes);

    // Sensing: transmitters are deaf this subframe, everyone else listens.
    decoded.assign(n_tx * n, 0);
    {
      size_t idx = 0;
      for (size_t i = 0; i < n_tx; ++i) {
        for (uint32_t r = 0; r < n; ++r) {
          if (r == air.transmissions[i].sender) continue;
          if (outcomes[idx].status == ReceptionStatus::kReceived) {
            decoded[i * n + r] = 1;
          }
          ++idx;
        }
      }
    }
    for (size_t i = 0; i < n_tx; ++i) {
      states[air.transmissions[i].sender].sensing.MarkOwnTransmission(t);
    }
    for (uint32_t r = 0; r < n; ++r) {
      if (transmitting[r]) continue;
      scratch.clear();
      // Per-receiver slice of the decoded matrix, one flag per transmission.
      flags.resize(n_tx);
      for (size_t i = 0; i < n_tx; ++i) {
        flags[i] = decoded[i * n + r];
      }
      MeasureForSensing(air, r, false, flags, scratch);
      states[r].sensing.Ingest(scratch, t);
    }

    // Metrics (warm-up excluded).
    const bool measure = t >= cfg.warmup_ms;
    {
      size_t idx = 0;
      for (size_t i = 0; i < n_tx; ++i) {
        const Transmission& tx = air.transmissions[i];
        if (measure) {
          ++result.total_transmissions;
        }
        if (cfg.capture_transmission_log) {
          result.transmission_log.push_back(TransmissionRecord{
              t, tx.sender, tx.packet_seq, tx.subch_first, tx.subch_count});
        }
        for (uint32_t r = 0; r < n; ++r) {
          if (r == tx.sender) continue;
          const ReceptionOutcome& o = outcomes[idx++];
          const float d = is_static
                              ? static_dist[static_cast<size_t>(tx.sender) * n + r]
                              : dist_buf[i * n + r];
          const bool received = o.status == ReceptionStatus::kReceived;
          if (measure) {
            prr.Record(d, received);
          }
          if (received) {
            pir.OnSuccess(tx.sender, r, t, measure);
          }
          if (cfg.capture_reception_log) {
            result.reception_log.push_back(ReceptionRecord{
                t, tx.sender, r, tx.packet_seq, d,
                static_cast<float>(o.status == ReceptionStatus::kHalfDuplexLoss
                                       ? 0.0
                                       : o.SinrDb()),
                o.status});
          }
        }
      }
    }
  }

  result.prr_x = prr.x;
  result.prr_y = prr.y;
  result.pir = Summarize(pir);
  if (cfg.capture_pir_samples) {
    result.pir_samples = pir.RawSamples();
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

std::vector<SimResult> RunMany(const std::vector<SimConfig>& cfgs, int jobs) {
  std::vector<SimResult> results(cfgs.size());
  if (jobs <= 1 || cfgs.size() <= 1) {
    for (size_t i = 0; i < cfgs.size(); ++i) {
      results[i] = Run(cfgs[i]);
    }
    return results;
  }
  std::atomic<size_t> next{0};
  const int n_workers = std::min<int>(jobs, static_cast<int>(cfgs.size()));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<size_t>(n_workers));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (;;) {
          const size_t i = next.fetch_add(1);
          if (i >= cfgs.size()) break;
          results[i] = Run(cfgs[i]);
        }
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& th : workers) {
    th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace cv2x
