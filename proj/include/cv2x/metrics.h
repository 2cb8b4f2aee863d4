#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cv2x {

/// Packet Reception Ratio accumulator over a baseline annulus (a, b]:
/// Y counts receivers inside the annulus at transmission time, X the
/// successful receptions among them.
struct PrrAccumulator {
  double baseline_a_m = 0.0;
  double baseline_b_m = 150.0;
  uint64_t x = 0;
  uint64_t y = 0;

  void Record(double distance_m, bool received) {
    if (distance_m > baseline_a_m && distance_m <= baseline_b_m) {
      ++y;
      if (received) ++x;
    }
  }

  /// X/Y, absent when no receiver was ever eligible.
  std::optional<double> Value() const {
    if (y == 0) return std::nullopt;
    return static_cast<double>(x) / static_cast<double>(y);
  }
};

/// Packet Inter-Reception times per ordered (sender, receiver) pair: the
/// gap in ms between successive successful receptions. Samples are stored
/// in a histogram keyed by the gap, which caps memory for long runs; the
/// raw sample list is optionally retained for dumps and cross-checks.
class PirTracker {
 public:
  PirTracker(uint32_t n_ues, uint64_t max_gap_ms, bool keep_samples);

  /// Call on every successful reception. A sample is emitted when the pair
  /// has a previous reception marker; `record` gates sample emission
  /// (used to exclude warm-up) while the marker is always advanced.
  void OnSuccess(uint32_t sender, uint32_t receiver, uint64_t subframe,
                 bool record);

  uint64_t SampleCount() const { return m_count; }

  /// Empirical quantile, rank = floor(q*n) + 1 (clamped to n); absent
  /// without samples.
  std::optional<uint64_t> Quantile(double q) const;

  const std::vector<uint32_t>& RawSamples() const { return m_samples; }

 private:
  uint32_t m_n;
  std::vector<int64_t> m_last;   // -1 = no marker yet
  std::vector<uint64_t> m_hist;  // count per gap in ms
  uint64_t m_count = 0;
  bool m_keep;
  std::vector<uint32_t> m_samples;
};

/// The standard quantile set reported by the CLI.
struct PirSummary {
  bool valid = false;
  uint64_t n_samples = 0;
  uint64_t q001 = 0, q25 = 0, q50 = 0, q75 = 0, q99 = 0, q999 = 0;
};

PirSummary Summarize(const PirTracker& pir);

}  // namespace cv2x
