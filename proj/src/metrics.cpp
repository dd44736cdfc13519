#include "gnpn/metrics.hpp"

#include "gnpn/error.hpp"

namespace gnpn {

MetricsReport score(const GraphStructure& truth, const GraphStructure& learned) {
  if (truth.dim() != learned.dim()) throw Error(ErrorKind::DimensionMismatch, "score: graphs differ in dim");
  const std::size_t d = truth.dim();
  MetricsReport m;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const bool t = truth.has_edge(i, j), l = learned.has_edge(i, j);
      if (t && l) ++m.tp;
      else if (l) ++m.fp;
      else if (t) ++m.fn;
      else ++m.tn;
    }
  }
  const std::size_t total = m.tp + m.fp + m.tn + m.fn;
  m.accuracy = total == 0 ? 1.0 : static_cast<double>(m.tp + m.tn) / static_cast<double>(total);
  m.recall_undefined = m.tp + m.fn == 0;
  m.precision_undefined = m.tp + m.fp == 0;
  m.recall = m.recall_undefined ? 1.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  m.precision = m.precision_undefined ? 1.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  return m;
}

}  // namespace gnpn
