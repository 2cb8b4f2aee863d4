#include "cv2x/resource_pool.h"
#include "doctest.h"

using namespace cv2x;

TEST_CASE("pool presets match the two supported carriers") {
  const ResourcePoolConfig p10 = ResourcePoolConfig::ForBandwidth(10);
  CHECK(p10.num_subchannels == 5);
  CHECK(p10.TotalRbs() == 50);
  const ResourcePoolConfig p20 = ResourcePoolConfig::ForBandwidth(20);
  CHECK(p20.num_subchannels == 10);
  CHECK(p20.TotalRbs() == 100);
}

TEST_CASE("pool validation rejects oversubscribed and unsupported configs") {
  ResourcePoolConfig pool;
  pool.num_subchannels = 6;  // 60 RBs > 50
  CHECK_THROWS_AS(pool.Validate(), ConfigError);

  pool = ResourcePoolConfig{};
  pool.scheme = SubchannelScheme::kNonAdjacent;
  CHECK_THROWS_WITH_AS(pool.Validate(),
                       doctest::Contains("non-adjacent"), ConfigError);

  pool = ResourcePoolConfig{};
  pool.subframe_bitmap = 0;
  CHECK_THROWS_AS(pool.Validate(), ConfigError);
}

TEST_CASE("radio validation enforces the documented ranges") {
  UeRadioConfig radio;
  CHECK_NOTHROW(radio.Validate());

  radio.resel_prob = 0.1;
  CHECK_THROWS_WITH_AS(radio.Validate(), doctest::Contains("[0.2, 1]"),
                       ConfigError);

  radio = UeRadioConfig{};
  radio.t2_ms = 150;  // exceeds rri = 100
  CHECK_THROWS_AS(radio.Validate(), ConfigError);

  radio = UeRadioConfig{};
  radio.t1_ms = 100;
  CHECK_THROWS_AS(radio.Validate(), ConfigError);
}

TEST_CASE("transport block capacity covers one message per subchannel") {
  // MCS 20 maps to I_TBS 19: 408 bits/PRB, 4080 bits for a 10-RB
  // subchannel, comfortably above the 1520-bit (190 byte) message.
  CHECK(TransportBlockBits(20, 10) == 4080);
  CHECK(TransportBlockBits(20, 10) >= 190 * 8);
  CHECK(TransportBlockBits(0, 1) == 16);
  // Monotone in both arguments.
  CHECK(TransportBlockBits(21, 10) >= TransportBlockBits(20, 10));
  CHECK(TransportBlockBits(20, 20) > TransportBlockBits(20, 10));
}

TEST_CASE("subchannels per packet under the default configuration") {
  const ResourcePoolConfig pool;
  UeRadioConfig radio;
  CHECK(SubchannelsPerPacket(radio, pool) == 1);

  radio.message_size_bytes = 0;
  CHECK(SubchannelsPerPacket(radio, pool) == 1);  // floor of one subchannel

  // Two subchannels once the payload exceeds one transport block.
  radio.message_size_bytes = 600;  // 4800 bits > 4080
  CHECK(SubchannelsPerPacket(radio, pool) == 2);
}

TEST_CASE("messages wider than the pool are a configuration error") {
  const ResourcePoolConfig pool;  // 5 subchannels x 4080 bits = 2550 bytes
  UeRadioConfig radio;
  radio.message_size_bytes = 2550;
  CHECK(SubchannelsPerPacket(radio, pool) == 5);
  radio.message_size_bytes = 2551;
  CHECK_THROWS_WITH_AS(SubchannelsPerPacket(radio, pool),
                       doctest::Contains("does not fit"), ConfigError);
}

TEST_CASE("iter_grid respects window, bitmap and order") {
  const ResourcePoolConfig pool;  // 5 subchannels, all-ones bitmap

  SUBCASE("full bitmap, 10 subframes") {
    const auto grid = IterGrid(pool, 100, 110);
    CHECK(grid.size() == 50);
    CHECK(grid.front() == ResourceId{100, 0});
    CHECK(grid.back() == ResourceId{109, 4});
  }

  SUBCASE("masked bitmap with 10 of 20 bits over 20 subframes") {
    ResourcePoolConfig masked = pool;
    masked.subframe_bitmap = 0x55555 & 0xFFFFF;  // alternating, 10 bits set
    const auto grid = IterGrid(masked, 0, 20);
    CHECK(grid.size() == 50);
    for (const ResourceId& r : grid) {
      CHECK(masked.SubframeUsable(r.subframe));
    }
  }

  SUBCASE("empty window") {
    CHECK(IterGrid(pool, 7, 7).empty());
  }

  SUBCASE("deterministic across calls") {
    CHECK(IterGrid(pool, 0, 40) == IterGrid(pool, 0, 40));
  }
}
