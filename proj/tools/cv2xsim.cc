#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cv2x/config_file.h"
#include "cv2x/engine.h"
#include "cv2x/scenario.h"

namespace {

using cv2x::SimConfig;
using cv2x::SimResult;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct SeedRange {
  std::vector<uint64_t> seeds;
};

SeedRange ParseSeeds(const std::string& text) {
  SeedRange out;
  const size_t dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      out.seeds.push_back(std::stoull(text));
      return out;
    }
    const uint64_t a = std::stoull(text.substr(0, dots));
    const uint64_t b = std::stoull(text.substr(dots + 2));
    if (b < a) {
      throw cv2x::ConfigError("--seeds: range end before start: " + text);
    }
    for (uint64_t s = a; s <= b; ++s) {
      out.seeds.push_back(s);
    }
    return out;
  } catch (const std::invalid_argument&) {
    throw cv2x::ConfigError("--seeds: expected N or A..B, got '" + text + "'");
  }
}

std::string DefaultOutDir() {
  if (const char* env = std::getenv("CV2X_OUT_DIR")) {
    return env;
  }
  return "out";
}

std::ofstream OpenOutput(const std::filesystem::path& dir,
                         const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             ": " + ec.message());
  }
  const std::filesystem::path p = dir / name;
  std::ofstream out(p);
  if (!out) {
    throw std::runtime_error("cannot write " + p.string());
  }
  return out;
}

std::string FormatPrr(const SimResult& r) {
  const auto prr = r.Prr();
  if (!prr) {
    return "";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *prr);
  return buf;
}

void WritePrrRow(std::ostream& out, const SimConfig& cfg, const SimResult& r) {
  out << ToString(cfg.scenario) << ',' << cfg.pool.bandwidth_mhz << ','
      << cfg.n_ues << ',' << cfg.radio.rri_ms << ',' << cfg.radio.resel_prob
      << ',' << r.seed << ',' << FormatPrr(r) << ',' << r.prr_x << ','
      << r.prr_y << '\n';
}

void WritePirRow(std::ostream& out, const SimConfig& cfg, const SimResult& r) {
  out << ToString(cfg.scenario) << ',' << cfg.pool.bandwidth_mhz << ','
      << cfg.n_ues << ',' << r.seed << ',';
  if (r.pir.valid) {
    out << r.pir.q001 << ',' << r.pir.q25 << ',' << r.pir.q50 << ','
        << r.pir.q75 << ',' << r.pir.q99 << ',' << r.pir.q999;
  } else {
    out << ",,,,,";
  }
  out << ',' << r.pir.n_samples << '\n';
}

void WriteRunRow(std::ostream& out, const SimConfig& cfg, const SimResult& r) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(r.config_hash));
  char wall[24];
  std::snprintf(wall, sizeof wall, "%.3f", r.wall_seconds);
  out << ToString(cfg.scenario) << ',' << cfg.pool.bandwidth_mhz << ','
      << cfg.n_ues << ',' << cfg.radio.rri_ms << ',' << cfg.radio.resel_prob
      << ',' << r.seed << ',' << hash << ',' << wall << ",\""
      << cfg.CanonicalString() << "\"\n";
}

void WriteResults(const std::filesystem::path& dir,
                  const std::vector<SimConfig>& cfgs,
                  const std::vector<SimResult>& results, bool pir_dump) {
  std::ofstream prr = OpenOutput(dir, "prr.csv");
  prr << "scenario,bandwidth_mhz,n_ues,rri_ms,resel_prob,seed,prr,x,y\n";
  std::ofstream pir = OpenOutput(dir, "pir.csv");
  pir << "scenario,bandwidth_mhz,n_ues,seed,q001,q25,q50,q75,q99,q999,"
         "n_samples\n";
  std::ofstream runs = OpenOutput(dir, "runs.csv");
  runs << "scenario,bandwidth_mhz,n_ues,rri_ms,resel_prob,seed,config_hash,"
          "wall_seconds,config\n";
  for (size_t i = 0; i < cfgs.size(); ++i) {
    WritePrrRow(prr, cfgs[i], results[i]);
    WritePirRow(pir, cfgs[i], results[i]);
    WriteRunRow(runs, cfgs[i], results[i]);
  }
  if (pir_dump) {
    std::ofstream dump = OpenOutput(dir, "pir_samples.csv");
    dump << "scenario,bandwidth_mhz,n_ues,seed,pir_ms\n";
    for (size_t i = 0; i < cfgs.size(); ++i) {
      for (const uint32_t s : results[i].pir_samples) {
        dump << ToString(cfgs[i].scenario) << ',' << cfgs[i].pool.bandwidth_mhz
             << ',' << cfgs[i].n_ues << ',' << results[i].seed << ',' << s
             << '\n';
      }
    }
  }
}

void WriteOptionalLogs(const std::filesystem::path& dir, const SimResult& r,
                       bool outcome_log, bool resel_log) {
  if (outcome_log) {
    std::ofstream out = OpenOutput(dir, "outcomes.csv");
    out << "subframe,sender,receiver,status,sinr_db\n";
    for (const cv2x::ReceptionRecord& rec : r.reception_log) {
      char sinr[24];
      std::snprintf(sinr, sizeof sinr, "%.2f", rec.sinr_db);
      out << rec.subframe << ',' << rec.sender << ',' << rec.receiver << ','
          << ToString(rec.status) << ',' << sinr << '\n';
    }
  }
  if (resel_log) {
    std::ofstream out = OpenOutput(dir, "resel.csv");
    out << "subframe,ue_id,initial,old_subframe,old_subchannel,new_subframe,"
           "new_subchannel,counter_draw\n";
    for (const cv2x::ReselEvent& e : r.resel_log) {
      out << e.trigger << ',' << e.ue << ',' << (e.initial ? 1 : 0) << ','
          << e.old_resource.subframe << ',' << e.old_resource.subchannel << ','
          << e.new_resource.subframe << ',' << e.new_resource.subchannel << ','
          << e.counter_draw << '\n';
    }
  }
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir = DefaultOutDir();
  std::vector<std::string> sets;
  std::vector<cv2x::ConfigOverride> named;
};

SimConfig ResolveConfig(const CommonArgs& args) {
  std::vector<cv2x::ConfigOverride> overrides;
  for (const std::string& s : args.sets) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw cv2x::ConfigError("--set expects key=value, got '" + s + "'");
    }
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  overrides.insert(overrides.end(), args.named.begin(), args.named.end());
  if (args.config_path.empty()) {
    return cv2x::ConfigFromOverrides(overrides);
  }
  return cv2x::LoadConfigFile(args.config_path, overrides);
}

void AddCommonOptions(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "flat key=value configuration file");
  cmd->add_option("--out", args.out_dir,
                  "output directory (default $CV2X_OUT_DIR or ./out)");
  cmd->add_option("--set", args.sets,
                  "override any config key, e.g. --set mcs=15")
      ->take_all();
  auto add_named = [cmd, &args](const std::string& flag,
                                const std::string& key) {
    cmd->add_option_function<std::string>(
        flag,
        [&args, key](const std::string& v) { args.named.emplace_back(key, v); },
        "override " + key);
  };
  add_named("--n-ues", "number_of_v_ues");
  add_named("--seed", "seed");
  add_named("--scenario", "scenario");
  add_named("--trace-file", "trace_file");
  add_named("--bandwidth-mhz", "channel_bandwidth_mhz");
  add_named("--rri-ms", "resource_reservation_period_ms");
  add_named("--resel-prob", "resource_reselection_probability");
  add_named("--duration-ms", "simulation_time_ms");
  add_named("--warmup-ms", "warmup_ms");
  add_named("--speed-kmh", "vehicle_speed_kmh");
  add_named("--los-mode", "los_mode");
  add_named("--sinr-threshold-db", "sinr_threshold_db");
}

int CmdRun(const CommonArgs& args, bool outcome_log, bool resel_log,
           bool pir_dump) {
  SimConfig cfg = ResolveConfig(args);
  cfg.capture_reception_log = outcome_log;
  cfg.capture_resel_log = resel_log;
  cfg.capture_pir_samples = pir_dump;
  const SimResult result = cv2x::Run(cfg);
  const std::filesystem::path dir(args.out_dir);
  WriteResults(dir, {cfg}, {result}, pir_dump);
  WriteOptionalLogs(dir, result, outcome_log, resel_log);
  const auto prr = result.Prr();
  std::printf("run complete: %llu transmissions, prr=%s, pir_q99=%s\n",
              static_cast<unsigned long long>(result.total_transmissions),
              prr ? FormatPrr(result).c_str() : "n/a",
              result.pir.valid ? std::to_string(result.pir.q99).c_str()
                               : "n/a");
  return kExitOk;
}

std::vector<SimConfig> ExpandPreset(const std::string& preset,
                                    const SimConfig& base,
                                    const std::vector<uint64_t>& seeds) {
  std::vector<SimConfig> cells;
  const std::vector<cv2x::ScenarioKind> scenarios = {
      cv2x::ScenarioKind::kStatic, cv2x::ScenarioKind::kManhattan};
  const std::vector<int> bandwidths = {10, 20};
  auto push = [&cells, &seeds](SimConfig c) {
    for (const uint64_t s : seeds) {
      c.seed = s;
      cells.push_back(c);
    }
  };
  auto with = [&base](cv2x::ScenarioKind sc, int bw) {
    SimConfig c = base;
    c.scenario = sc;
    c.pool = cv2x::ResourcePoolConfig::ForBandwidth(bw);
    return c;
  };
  if (preset == "prr_vs_density" || preset == "pir_vs_density") {
    for (const auto sc : scenarios) {
      for (const int bw : bandwidths) {
        for (const int n : {50, 100, 150, 200, 250}) {
          SimConfig c = with(sc, bw);
          c.n_ues = n;
          push(c);
        }
      }
    }
  } else if (preset == "prr_vs_rri") {
    for (const auto sc : scenarios) {
      for (const int bw : bandwidths) {
        for (const int rri : {50, 100, 200, 500, 1000}) {
          SimConfig c = with(sc, bw);
          c.n_ues = base.n_ues > 0 ? base.n_ues : 250;
          c.radio.rri_ms = rri;
          c.radio.t2_ms = SimConfig::DefaultT2ForRri(rri);
          push(c);
        }
      }
    }
  } else if (preset == "prr_vs_resel_prob") {
    for (const auto sc : scenarios) {
      for (const int bw : bandwidths) {
        for (const double p : {0.2, 0.4, 0.6, 0.8, 1.0}) {
          SimConfig c = with(sc, bw);
          c.n_ues = base.n_ues > 0 ? base.n_ues : 250;
          c.radio.resel_prob = p;
          push(c);
        }
      }
    }
  } else {
    throw cv2x::ConfigError(
        "unknown preset '" + preset +
        "' (expected prr_vs_density|pir_vs_density|prr_vs_rri|"
        "prr_vs_resel_prob)");
  }
  return cells;
}

// Explicit axes: each --axis key=v1,v2,... contributes one dimension of a
// cartesian product over the base configuration.
std::vector<SimConfig> ExpandAxes(const CommonArgs& args,
                                  const std::vector<std::string>& axes,
                                  const std::vector<uint64_t>& seeds) {
  struct Axis {
    std::string key;
    std::vector<std::string> values;
  };
  std::vector<Axis> parsed;
  for (const std::string& text : axes) {
    const size_t eq = text.find('=');
    if (eq == std::string::npos || eq + 1 >= text.size()) {
      throw cv2x::ConfigError("--axis expects key=v1,v2,..., got '" + text +
                              "'");
    }
    Axis axis;
    axis.key = text.substr(0, eq);
    std::string rest = text.substr(eq + 1);
    size_t pos = 0;
    while (pos != std::string::npos) {
      const size_t comma = rest.find(',', pos);
      axis.values.push_back(rest.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos));
      pos = comma == std::string::npos ? comma : comma + 1;
    }
    parsed.push_back(std::move(axis));
  }

  std::vector<SimConfig> cells;
  std::vector<size_t> idx(parsed.size(), 0);
  for (;;) {
    CommonArgs cell_args = args;
    for (size_t a = 0; a < parsed.size(); ++a) {
      cell_args.named.emplace_back(parsed[a].key, parsed[a].values[idx[a]]);
    }
    SimConfig cfg = ResolveConfig(cell_args);
    for (const uint64_t s : seeds) {
      cfg.seed = s;
      cells.push_back(cfg);
    }
    size_t a = parsed.size();
    while (a > 0) {
      --a;
      if (++idx[a] < parsed[a].values.size()) break;
      idx[a] = 0;
      if (a == 0) return cells;
    }
    if (parsed.empty()) return cells;
  }
}

int CmdSweep(const CommonArgs& args, const std::string& preset,
             const std::vector<std::string>& axes,
             const std::string& seeds_spec, int jobs, bool pir_dump) {
  const SeedRange seeds = ParseSeeds(seeds_spec);
  if (preset.empty() == axes.empty()) {
    throw cv2x::ConfigError("sweep needs exactly one of --preset or --axis");
  }
  std::vector<SimConfig> cells;
  if (!preset.empty()) {
    const SimConfig base = ResolveConfig(args);
    cells = ExpandPreset(preset, base, seeds.seeds);
  } else {
    cells = ExpandAxes(args, axes, seeds.seeds);
  }
  for (SimConfig& c : cells) {
    c.capture_pir_samples = pir_dump;
    c.Validate();
  }
  const std::vector<SimResult> results = cv2x::RunMany(cells, jobs);
  WriteResults(std::filesystem::path(args.out_dir), cells, results, pir_dump);
  std::printf("sweep complete: %zu runs -> %s\n", cells.size(),
              args.out_dir.c_str());
  return kExitOk;
}

int CmdChannelTable(const std::string& d_spec, double step,
                    const std::string& out_path) {
  const size_t dots = d_spec.find("..");
  double d0 = 1.0, d1 = 500.0;
  try {
    if (dots == std::string::npos) {
      throw std::invalid_argument(d_spec);
    }
    d0 = std::stod(d_spec.substr(0, dots));
    d1 = std::stod(d_spec.substr(dots + 2));
  } catch (const std::exception&) {
    throw cv2x::ConfigError("--d: expected A..B, got '" + d_spec + "'");
  }
  if (step <= 0.0 || d1 < d0) {
    throw cv2x::ConfigError("channel-table: need a positive step and d0 <= d1");
  }
  const cv2x::ChannelParams params;
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      throw std::runtime_error("cannot write " + out_path);
    }
    out = &file;
  }
  *out << "d_m,pathloss_los_db,pathloss_nlos_db\n";
  char line[96];
  for (double d = d0; d <= d1 + 1e-9; d += step) {
    std::snprintf(line, sizeof line, "%.3f,%.4f,%.4f\n", d,
                  cv2x::PathlossLosDb(d, params),
                  cv2x::PathlossNlosDb(d, params));
    *out << line;
  }
  return kExitOk;
}

int CmdValidateTrace(const std::string& path) {
  const cv2x::MobilityTrace trace = cv2x::LoadTrace(path);
  size_t total = 0;
  uint64_t t_max = 0;
  for (const auto& series : trace.samples) {
    total += series.size();
    t_max = std::max(t_max, series.back().time_ms);
  }
  std::printf("trace ok: %zu nodes, %zu samples, last timestamp %llu ms\n",
              trace.NodeCount(), total, static_cast<unsigned long long>(t_max));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cv2x-sim: deterministic C-V2X mode 4 sidelink simulator"};
  app.require_subcommand(1);

  CommonArgs run_args;
  bool run_outcome_log = false;
  bool run_resel_log = false;
  bool run_pir_dump = false;
  CLI::App* run = app.add_subcommand("run", "execute a single run");
  AddCommonOptions(run, run_args);
  run->add_flag("--outcome-log", run_outcome_log,
                "write per-reception outcomes.csv");
  run->add_flag("--resel-log", run_resel_log,
                "write reselection events to resel.csv");
  run->add_flag("--pir-dump", run_pir_dump, "write raw PIR samples");

  CommonArgs sweep_args;
  std::string sweep_preset;
  std::vector<std::string> sweep_axes;
  std::string sweep_seeds = "1";
  int sweep_jobs = 1;
  bool sweep_pir_dump = false;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run an experiment preset or explicit axes over seeds");
  AddCommonOptions(sweep, sweep_args);
  sweep->add_option("--preset", sweep_preset,
                    "prr_vs_density | pir_vs_density | prr_vs_rri | "
                    "prr_vs_resel_prob");
  sweep->add_option("--axis", sweep_axes,
                    "explicit axis key=v1,v2,... (repeatable, cartesian)")
      ->take_all();
  sweep->add_option("--seeds", sweep_seeds, "seed or inclusive range A..B");
  sweep->add_option("--jobs", sweep_jobs, "parallel runs (default 1)");
  sweep->add_flag("--pir-dump", sweep_pir_dump, "write raw PIR samples");

  std::string table_d = "1..500";
  double table_step = 1.0;
  std::string table_out;
  CLI::App* table = app.add_subcommand(
      "channel-table", "tabulate WINNER+ B1 path loss to CSV");
  table->add_option("--d", table_d, "distance range in meters, A..B");
  table->add_option("--step", table_step, "distance step in meters");
  table->add_option("--out", table_out, "output file (default stdout)");

  std::string trace_path;
  CLI::App* vtrace =
      app.add_subcommand("validate-trace", "lint a mobility trace file");
  vtrace->add_option("file", trace_path, "trace CSV")->required();

  bool help_config = false;
  app.add_flag("--help-config", help_config, "list configuration keys");

  CLI11_PARSE(app, argc, argv);

  if (help_config) {
    std::fputs(cv2x::ConfigKeyReference().c_str(), stdout);
    return kExitOk;
  }

  try {
    if (run->parsed()) {
      return CmdRun(run_args, run_outcome_log, run_resel_log, run_pir_dump);
    }
    if (sweep->parsed()) {
      return CmdSweep(sweep_args, sweep_preset, sweep_axes, sweep_seeds,
                      sweep_jobs, sweep_pir_dump);
    }
    if (table->parsed()) {
      return CmdChannelTable(table_d, table_step, table_out);
    }
    if (vtrace->parsed()) {
      return CmdValidateTrace(trace_path);
    }
  } catch (const cv2x::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const cv2x::TraceError& e) {
    std::fprintf(stderr, "trace error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}
