#include "cv2x/config_file.h"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cv2x {

namespace {

struct Builder {
  SimConfig cfg;
  bool t2_explicit = false;
  bool subchannels_explicit = false;
};

int64_t ParseInt(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int64_t out = std::stoll(v, &pos, 0);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

void Apply(Builder& b, const std::string& key, const std::string& value) {
  SimConfig& c = b.cfg;
  if (key == "number_of_v_ues") {
    c.n_ues = static_cast<int>(ParseInt(key, value));
  } else if (key == "simulation_time_ms") {
    c.duration_ms = static_cast<uint64_t>(ParseInt(key, value));
  } else if (key == "warmup_ms") {
    c.warmup_ms = static_cast<uint64_t>(ParseInt(key, value));
  } else if (key == "seed") {
    c.seed = static_cast<uint64_t>(ParseInt(key, value));
  } else if (key == "scenario") {
    if (value == "static") {
      c.scenario = ScenarioKind::kStatic;
    } else if (value == "manhattan") {
      c.scenario = ScenarioKind::kManhattan;
    } else if (value == "trace") {
      c.scenario = ScenarioKind::kTrace;
    } else {
      throw ConfigError("scenario: expected static|manhattan|trace, got '" +
                        value + "'");
    }
  } else if (key == "trace_file") {
    c.trace_path = value;
  } else if (key == "los_mode") {
    if (value == "always_los") {
      c.los_mode = LosMode::kAlwaysLos;
    } else if (value == "geometric") {
      c.los_mode = LosMode::kGeometric;
    } else {
      throw ConfigError("los_mode: expected always_los|geometric, got '" +
                        value + "'");
    }
  } else if (key == "vehicle_speed_kmh") {
    c.vehicle_speed_kmh = ParseDouble(key, value);
  } else if (key == "baseline_distance_m") {
    c.baseline_b_m = ParseDouble(key, value);
  } else if (key == "baseline_a_m") {
    c.baseline_a_m = ParseDouble(key, value);
  } else if (key == "message_size_bytes") {
    c.radio.message_size_bytes = static_cast<int>(ParseInt(key, value));
  } else if (key == "transmission_power_dbm") {
    c.radio.tx_power_dbm = ParseDouble(key, value);
  } else if (key == "antenna_height_m") {
    const double h = ParseDouble(key, value);
    c.radio.antenna_height_m = h;
    c.channel.h_bs_m = h;
    c.channel.h_ms_m = h;
  } else if (key == "resource_reservation_period_ms") {
    c.radio.rri_ms = static_cast<int>(ParseInt(key, value));
  } else if (key == "t1_ms") {
    c.radio.t1_ms = static_cast<int>(ParseInt(key, value));
  } else if (key == "t2_ms") {
    c.radio.t2_ms = static_cast<int>(ParseInt(key, value));
    b.t2_explicit = true;
  } else if (key == "resource_reselection_probability") {
    c.radio.resel_prob = ParseDouble(key, value);
  } else if (key == "mcs") {
    c.radio.mcs = static_cast<int>(ParseInt(key, value));
  } else if (key == "channel_bandwidth_mhz") {
    c.pool.bandwidth_mhz = static_cast<int>(ParseInt(key, value));
  } else if (key == "rbs_per_subchannel") {
    c.pool.rbs_per_subchannel = static_cast<int>(ParseInt(key, value));
  } else if (key == "number_of_subchannels") {
    c.pool.num_subchannels = static_cast<int>(ParseInt(key, value));
    b.subchannels_explicit = true;
  } else if (key == "subframe_bitmap") {
    c.pool.subframe_bitmap = static_cast<uint32_t>(ParseInt(key, value));
  } else if (key == "subchannel_scheme") {
    if (value == "adjacent") {
      c.pool.scheme = SubchannelScheme::kAdjacent;
    } else if (value == "non_adjacent" || value == "nonadjacent") {
      c.pool.scheme = SubchannelScheme::kNonAdjacent;
    } else {
      throw ConfigError("subchannel_scheme: expected adjacent, got '" + value +
                        "'");
    }
  } else if (key == "lowest_rb_index") {
    c.pool.lowest_rb_index = static_cast<int>(ParseInt(key, value));
  } else if (key == "noise_figure_db") {
    c.phy.noise_figure_db = ParseDouble(key, value);
  } else if (key == "sinr_threshold_db") {
    c.phy.sinr_threshold_db = ParseDouble(key, value);
  } else if (key == "rsrp_decode_threshold_dbm") {
    c.phy.rsrp_decode_threshold_dbm = ParseDouble(key, value);
  } else if (key == "rsrp_exclusion_threshold_dbm") {
    c.sps.rsrp_exclusion_threshold_dbm = ParseDouble(key, value);
  } else if (key == "carrier_frequency_ghz") {
    c.channel.fc_ghz = ParseDouble(key, value);
  } else if (key == "min_distance_m") {
    c.channel.min_distance_m = ParseDouble(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

SimConfig Finish(Builder& b) {
  if (!b.subchannels_explicit) {
    b.cfg.pool.num_subchannels = (b.cfg.pool.bandwidth_mhz == 20) ? 10 : 5;
  }
  if (!b.t2_explicit) {
    b.cfg.radio.t2_ms = SimConfig::DefaultT2ForRri(b.cfg.radio.rri_ms);
  }
  b.cfg.Validate();
  return b.cfg;
}

std::string Trim(const std::string& s) {
  const size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

void ApplyStream(Builder& b, std::istream& in, const std::string& source) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') {
      continue;
    }
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) +
                        ": expected 'key = value', got '" + t + "'");
    }
    const std::string key = Trim(t.substr(0, eq));
    const std::string value = Trim(t.substr(eq + 1));
    try {
      Apply(b, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
}

}  // namespace

SimConfig ParseConfig(std::istream& in, const std::string& source_name,
                      const std::vector<ConfigOverride>& overrides) {
  Builder b;
  ApplyStream(b, in, source_name);
  for (const auto& [key, value] : overrides) {
    Apply(b, key, value);
  }
  return Finish(b);
}

SimConfig LoadConfigFile(const std::string& path,
                         const std::vector<ConfigOverride>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  return ParseConfig(in, path, overrides);
}

SimConfig ConfigFromOverrides(const std::vector<ConfigOverride>& overrides) {
  Builder b;
  for (const auto& [key, value] : overrides) {
    Apply(b, key, value);
  }
  return Finish(b);
}

std::string ConfigKeyReference() {
  return
      "number_of_v_ues                   V-UE count (trace scenario: must match the file)\n"
      "scenario                          static | manhattan | trace\n"
      "trace_file                        position trace CSV for scenario=trace\n"
      "los_mode                          always_los | geometric (building blockage)\n"
      "simulation_time_ms                run length, default 30000\n"
      "warmup_ms                         excluded from metrics, default 1000\n"
      "seed                              64-bit run seed\n"
      "vehicle_speed_kmh                 manhattan vehicle speed, default 60\n"
      "baseline_distance_m               PRR baseline upper bound, default 150\n"
      "baseline_a_m                      PRR baseline lower bound, default 0\n"
      "message_size_bytes                default 190\n"
      "transmission_power_dbm            default 23\n"
      "antenna_height_m                  default 1.5 (drives the channel heights)\n"
      "resource_reservation_period_ms    RRI, default 100\n"
      "t1_ms, t2_ms                      selection window bounds, default 4 / min(100, RRI)\n"
      "resource_reselection_probability  in [0.2, 1], default 0.5\n"
      "mcs                               default 20\n"
      "channel_bandwidth_mhz             10 | 20\n"
      "rbs_per_subchannel                default 10\n"
      "number_of_subchannels             default 5 (10 MHz) or 10 (20 MHz)\n"
      "subframe_bitmap                   20-bit mask, default 0xFFFFF\n"
      "subchannel_scheme                 adjacent (non_adjacent is rejected)\n"
      "lowest_rb_index                   default 0\n"
      "noise_figure_db                   default 9\n"
      "sinr_threshold_db                 reception threshold, default 12\n"
      "rsrp_decode_threshold_dbm         sensitivity, default -110\n"
      "rsrp_exclusion_threshold_dbm      SPS exclusion threshold, default -110\n"
      "carrier_frequency_ghz             default 5.9\n"
      "min_distance_m                    path-loss clamp floor, default 3\n";
}

}  // namespace cv2x
