#include <algorithm>
#include <cmath>

#include "cv2x/metrics.h"
#include "cv2x/rng.h"
#include "doctest.h"

using namespace cv2x;

TEST_CASE("PRR accumulator arithmetic") {
  PrrAccumulator acc;

  SUBCASE("three of four in-range receivers") {
    acc.Record(10.0, true);
    acc.Record(50.0, true);
    acc.Record(100.0, true);
    acc.Record(140.0, false);
    CHECK(acc.x == 3);
    CHECK(acc.y == 4);
    CHECK(*acc.Value() == doctest::Approx(0.75));
  }

  SUBCASE("the annulus is half-open: (0, 150]") {
    acc.Record(150.0, true);  // exactly on the boundary counts
    CHECK(acc.y == 1);
    acc.Record(150.0001, true);  // outside
    CHECK(acc.y == 1);
    acc.Record(0.0, true);  // a == 0 excludes zero distance
    CHECK(acc.y == 1);
  }

  SUBCASE("degenerate values") {
    CHECK_FALSE(acc.Value().has_value());  // Y = 0 is absent, not 0 or 1
    acc.Record(5.0, false);
    CHECK(*acc.Value() == 0.0);
    PrrAccumulator full;
    for (int i = 0; i < 98; ++i) full.Record(10.0, true);
    for (int i = 0; i < 2; ++i) full.Record(10.0, false);
    CHECK(*full.Value() == doctest::Approx(0.98));
  }
}

TEST_CASE("PIR samples between successive receptions") {
  PirTracker pir(4, 30000, true);
  pir.OnSuccess(0, 1, 1100, true);
  CHECK(pir.SampleCount() == 0);  // first reception only sets the marker
  pir.OnSuccess(0, 1, 1200, true);
  REQUIRE(pir.SampleCount() == 1);
  CHECK(pir.RawSamples()[0] == 100);

  // Ordered pairs are independent.
  pir.OnSuccess(1, 0, 1300, true);
  CHECK(pir.SampleCount() == 1);

  // Markers advance during warm-up without emitting samples.
  PirTracker warm(2, 30000, true);
  warm.OnSuccess(0, 1, 500, false);
  warm.OnSuccess(0, 1, 900, false);
  CHECK(warm.SampleCount() == 0);
  warm.OnSuccess(0, 1, 1000, true);
  REQUIRE(warm.SampleCount() == 1);
  CHECK(warm.RawSamples()[0] == 100);
}

TEST_CASE("quantile rank convention") {
  SUBCASE("constant distribution") {
    PirTracker pir(2, 30000, false);
    uint64_t t = 1000;
    pir.OnSuccess(0, 1, t, true);
    for (int i = 0; i < 50; ++i) {
      t += 100;
      pir.OnSuccess(0, 1, t, true);
    }
    for (const double q : {0.001, 0.25, 0.5, 0.75, 0.99, 0.999}) {
      CHECK(*pir.Quantile(q) == 100);
    }
  }

  SUBCASE("uniform 4..100 has median 52") {
    PirTracker pir(200, 30000, false);
    uint32_t pair = 0;
    for (uint32_t gap = 4; gap <= 100; ++gap) {
      const uint32_t a = pair / 150;
      const uint32_t b = 1 + pair % 150;
      pir.OnSuccess(a, b, 1000, true);
      pir.OnSuccess(a, b, 1000 + gap, true);
      ++pair;
    }
    CHECK(pir.SampleCount() == 97);
    CHECK(*pir.Quantile(0.5) == 52);
  }

  SUBCASE("999 samples of 100 ms and one of 1000 ms") {
    PirTracker pir(1001, 30000, false);
    for (uint32_t i = 0; i < 999; ++i) {
      pir.OnSuccess(0, i + 1, 1000, true);
      pir.OnSuccess(0, i + 1, 1100, true);
    }
    pir.OnSuccess(1, 0, 1000, true);
    pir.OnSuccess(1, 0, 2000, true);
    REQUIRE(pir.SampleCount() == 1000);
    CHECK(*pir.Quantile(0.999) == 1000);
    CHECK(*pir.Quantile(0.99) == 100);
    CHECK(*pir.Quantile(0.001) == 100);
  }

  SUBCASE("no samples means absent quantiles") {
    PirTracker pir(2, 30000, false);
    CHECK_FALSE(pir.Quantile(0.5).has_value());
    CHECK_FALSE(Summarize(pir).valid);
  }
}

TEST_CASE("histogram quantiles match a sorted-list oracle") {
  Rng rng(321);
  PirTracker pir(64, 30000, true);
  std::vector<uint32_t> expected;
  // Random success events over random pairs; recompute the samples
  // directly from the event stream.
  struct Event {
    uint32_t a, b;
    uint64_t t;
  };
  std::vector<Event> events;
  uint64_t t = 0;
  for (int i = 0; i < 5000; ++i) {
    t += rng.UniformInt(1, 40);
    events.push_back(Event{static_cast<uint32_t>(rng.UniformInt(0, 63)),
                           static_cast<uint32_t>(rng.UniformInt(0, 63)), t});
  }
  std::vector<std::vector<int64_t>> last(64, std::vector<int64_t>(64, -1));
  for (const Event& e : events) {
    if (e.a == e.b) continue;
    pir.OnSuccess(e.a, e.b, e.t, true);
    if (last[e.a][e.b] >= 0) {
      expected.push_back(static_cast<uint32_t>(e.t - last[e.a][e.b]));
    }
    last[e.a][e.b] = static_cast<int64_t>(e.t);
  }
  REQUIRE(pir.SampleCount() == expected.size());

  std::sort(expected.begin(), expected.end());
  for (const double q : {0.001, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999}) {
    size_t rank = static_cast<size_t>(std::floor(q * expected.size())) + 1;
    rank = std::min(rank, expected.size());
    CHECK(*pir.Quantile(q) == expected[rank - 1]);
  }

  // Raw capture agrees with the stream order.
  CHECK(pir.RawSamples().size() == expected.size());
}
