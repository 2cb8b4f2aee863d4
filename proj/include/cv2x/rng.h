#pragma once

#include <cstdint>
#include <random>

namespace cv2x {

/// Deterministic random stream for one simulation run.
///
/// All stochastic draws of a run (placement, mobility turns, reselection
/// counters, resource picks) come from a single Rng instance in a fixed
/// call order, so a (config, seed) pair always reproduces the same run.
/// The derived draws avoid std::uniform_*_distribution on purpose: their
/// algorithms are implementation-defined and would break reproducibility
/// across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : m_engine(seed) {}

  uint64_t NextU64() { return m_engine(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double NextDouble() {
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [lo, hi], both bounds inclusive.
  int64_t UniformInt(int64_t lo, int64_t hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    // Rejection sampling to avoid modulo bias.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t v = m_engine();
    while (v >= limit) {
      v = m_engine();
    }
    return lo + static_cast<int64_t>(v % span);
  }

  /// Uniform index in [0, n).
  size_t UniformIndex(size_t n) {
    return static_cast<size_t>(UniformInt(0, static_cast<int64_t>(n) - 1));
  }

  bool Bernoulli(double p) { return NextDouble() < p; }

 private:
  std::mt19937_64 m_engine;
};

}  // namespace cv2x
