#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "gnpn/graph.hpp"
#include "gnpn/kneedle.hpp"
#include "gnpn/matcore.hpp"

namespace gnpn {

/// Pearson correlation (denominator n - 1), exact unit diagonal.
/// Needs n >= 2; throws DegenerateColumn for a constant column.
SymmetricMatrix empirical_correlation(const SampleBatch& batch);

/// Sample covariance, denominator n - 1.
SymmetricMatrix empirical_covariance(const SampleBatch& batch);

struct Applicability {
  bool applicable;
  double norm;  // ||R - I||
};

Applicability applicability_check(const SymmetricMatrix& r);

/// |strictly lower entries| sorted descending, ties by (i, j).
struct GammaTriangle {
  std::vector<double> values;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (i, j), i > j
};

GammaTriangle gamma_triangle_of(const SymmetricMatrix& gamma);

struct Thresholded {
  SymmetricMatrix gamma;
  GraphStructure graph;
};

/// Zeroes off-diagonal entries with |v| <= t.
Thresholded threshold_precision(const SymmetricMatrix& gamma, double t);

/// Which matrix gets inverted and thresholded. The applicability check is
/// always done on the correlation matrix.
enum class PrecisionScale { Correlation, Covariance };

struct LearnOptions {
  bool strict = true;
  std::optional<double> threshold;  // skips the knee search
  double sensitivity = 1.0;
  bool online = true;
  PrecisionScale scale = PrecisionScale::Correlation;
};

struct LearnResult {
  SymmetricMatrix r_hat;
  SymmetricMatrix gamma_hat;
  double applicability_norm;
  bool applicable;
  GammaTriangle gamma_triangle;
  KneeResult knee;  // found == false when the threshold was given
  SymmetricMatrix gamma_thresholded;
  GraphStructure graph;
};

/// Correlation, applicability check, inversion, knee, threshold.
/// Needs n >= d + 1 and d >= 2.
LearnResult learn(const SampleBatch& batch, const LearnOptions& opts = {});

}  // namespace gnpn
