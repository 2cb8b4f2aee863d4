#include <sstream>

#include "cv2x/config_file.h"
#include "doctest.h"

using namespace cv2x;

TEST_CASE("empty config resolves to the documented defaults") {
  std::stringstream ss("");
  const SimConfig cfg = ParseConfig(ss, "empty", {});
  CHECK(cfg.pool.bandwidth_mhz == 10);
  CHECK(cfg.pool.num_subchannels == 5);
  CHECK(cfg.pool.rbs_per_subchannel == 10);
  CHECK(cfg.pool.subframe_bitmap == 0xFFFFF);
  CHECK(cfg.radio.rri_ms == 100);
  CHECK(cfg.radio.resel_prob == 0.5);
  CHECK(cfg.radio.message_size_bytes == 190);
  CHECK(cfg.radio.tx_power_dbm == 23.0);
  CHECK(cfg.radio.mcs == 20);
  CHECK(cfg.radio.t1_ms == 4);
  CHECK(cfg.radio.t2_ms == 100);
  CHECK(cfg.duration_ms == 30000);
  CHECK(cfg.warmup_ms == 1000);
  CHECK(cfg.channel.fc_ghz == 5.9);
  CHECK(cfg.channel.h_bs_m == 1.5);
  CHECK(cfg.baseline_b_m == 150.0);
  CHECK(cfg.phy.noise_figure_db == 9.0);
  CHECK(cfg.phy.sinr_threshold_db == 12.0);
  CHECK(cfg.sps.rsrp_exclusion_threshold_dbm == -110.0);
  CHECK(cfg.los_mode == LosMode::kAlwaysLos);
}

TEST_CASE("values parse, with comments and spacing") {
  std::stringstream ss(
      "# experiment\n"
      "number_of_v_ues = 120\n"
      "channel_bandwidth_mhz = 20\n"
      "scenario = manhattan\n"
      "subframe_bitmap = 0xFFFFF\n"
      "resource_reselection_probability = 0.8\n");
  const SimConfig cfg = ParseConfig(ss, "t", {});
  CHECK(cfg.n_ues == 120);
  CHECK(cfg.pool.bandwidth_mhz == 20);
  CHECK(cfg.pool.num_subchannels == 10);  // follows the bandwidth
  CHECK(cfg.scenario == ScenarioKind::kManhattan);
  CHECK(cfg.radio.resel_prob == 0.8);
}

TEST_CASE("reselection probability outside [0.2, 1] is rejected") {
  std::stringstream ss("resource_reselection_probability = 0.1\n");
  CHECK_THROWS_WITH_AS(ParseConfig(ss, "t", {}), doctest::Contains("[0.2, 1]"),
                       ConfigError);
}

TEST_CASE("unknown keys and malformed values are named") {
  {
    std::stringstream ss("no_such_key = 1\n");
    CHECK_THROWS_WITH_AS(ParseConfig(ss, "t", {}),
                         doctest::Contains("no_such_key"), ConfigError);
  }
  {
    std::stringstream ss("mcs = banana\n");
    CHECK_THROWS_WITH_AS(ParseConfig(ss, "t", {}), doctest::Contains("mcs"),
                         ConfigError);
  }
  {
    std::stringstream ss("mcs\n");
    CHECK_THROWS_WITH_AS(ParseConfig(ss, "t", {}),
                         doctest::Contains("key = value"), ConfigError);
  }
}

TEST_CASE("overrides beat file values") {
  std::stringstream ss("number_of_v_ues = 10\nseed = 3\n");
  const SimConfig cfg =
      ParseConfig(ss, "t", {{"number_of_v_ues", "77"}, {"seed", "9"}});
  CHECK(cfg.n_ues == 77);
  CHECK(cfg.seed == 9);
}

TEST_CASE("t2 follows min(100, RRI) unless explicit") {
  {
    std::stringstream ss("resource_reservation_period_ms = 50\n");
    const SimConfig cfg = ParseConfig(ss, "t", {});
    CHECK(cfg.radio.t2_ms == 50);
  }
  {
    std::stringstream ss("resource_reservation_period_ms = 500\n");
    const SimConfig cfg = ParseConfig(ss, "t", {});
    CHECK(cfg.radio.t2_ms == 100);
  }
  {
    std::stringstream ss(
        "resource_reservation_period_ms = 200\n"
        "t2_ms = 150\n");
    const SimConfig cfg = ParseConfig(ss, "t", {});
    CHECK(cfg.radio.t2_ms == 150);
  }
}

TEST_CASE("antenna height drives radio and channel consistently") {
  std::stringstream ss("antenna_height_m = 2.0\n");
  const SimConfig cfg = ParseConfig(ss, "t", {});
  CHECK(cfg.radio.antenna_height_m == 2.0);
  CHECK(cfg.channel.h_bs_m == 2.0);
  CHECK(cfg.channel.h_ms_m == 2.0);
}

TEST_CASE("config hash is stable and sensitive") {
  std::stringstream a("number_of_v_ues = 10\n");
  std::stringstream b("number_of_v_ues = 10\n");
  std::stringstream c("number_of_v_ues = 11\n");
  const uint64_t ha = ParseConfig(a, "t", {}).Hash();
  const uint64_t hb = ParseConfig(b, "t", {}).Hash();
  const uint64_t hc = ParseConfig(c, "t", {}).Hash();
  CHECK(ha == hb);
  CHECK(ha != hc);
}

TEST_CASE("non-adjacent scheme is rejected at validation") {
  std::stringstream ss("subchannel_scheme = non_adjacent\n");
  CHECK_THROWS_WITH_AS(ParseConfig(ss, "t", {}),
                       doctest::Contains("non-adjacent"), ConfigError);
}
