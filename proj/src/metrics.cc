#include "cv2x/metrics.h"

#include <cmath>

namespace cv2x {

PirTracker::PirTracker(uint32_t n_ues, uint64_t max_gap_ms, bool keep_samples)
    : m_n(n_ues),
      m_last(static_cast<size_t>(n_ues) * n_ues, -1),
      m_hist(max_gap_ms + 1, 0),
      m_keep(keep_samples) {}

void PirTracker::OnSuccess(uint32_t sender, uint32_t receiver,
                           uint64_t subframe, bool record) {
  int64_t& last = m_last[static_cast<size_t>(sender) * m_n + receiver];
  if (last >= 0 && record) {
    const uint64_t gap = subframe - static_cast<uint64_t>(last);
    if (gap >= m_hist.size()) {
      m_hist.resize(gap + 1, 0);
    }
    ++m_hist[gap];
    ++m_count;
    if (m_keep) {
      m_samples.push_back(static_cast<uint32_t>(gap));
    }
  }
  last = static_cast<int64_t>(subframe);
}

std::optional<uint64_t> PirTracker::Quantile(double q) const {
  if (m_count == 0) {
    return std::nullopt;
  }
  uint64_t rank = static_cast<uint64_t>(std::floor(q * static_cast<double>(m_count))) + 1;
  if (rank > m_count) {
    rank = m_count;
  }
  uint64_t seen = 0;
  for (size_t gap = 0; gap < m_hist.size(); ++gap) {
    seen += m_hist[gap];
    if (seen >= rank) {
      return gap;
    }
  }
  return m_hist.size() - 1;  // unreachable when counts are consistent
}

PirSummary Summarize(const PirTracker& pir) {
  PirSummary s;
  s.n_samples = pir.SampleCount();
  if (s.n_samples == 0) {
    return s;
  }
  s.valid = true;
  s.q001 = *pir.Quantile(0.001);
  s.q25 = *pir.Quantile(0.25);
  s.q50 = *pir.Quantile(0.5);
  s.q75 = *pir.Quantile(0.75);
  s.q99 = *pir.Quantile(0.99);
  s.q999 = *pir.Quantile(0.999);
  return s;
}

}  // namespace cv2x
