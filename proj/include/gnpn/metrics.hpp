#pragma once

#include <cstddef>

#include "gnpn/graph.hpp"

namespace gnpn {

/// Confusion counts over unordered off-diagonal pairs.
struct MetricsReport {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 1.0;
  double recall = 1.0;     // 1 when tp + fn == 0
  double precision = 1.0;  // 1 when tp + fp == 0
  bool recall_undefined = false;
  bool precision_undefined = false;
};

/// Throws DimensionMismatch when dims differ.
MetricsReport score(const GraphStructure& truth, const GraphStructure& learned);

}  // namespace gnpn
