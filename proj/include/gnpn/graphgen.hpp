#pragma once

#include <cstddef>
#include <optional>

#include "gnpn/graph.hpp"
#include "gnpn/matcore.hpp"
#include "gnpn/rng.hpp"

namespace gnpn {

/// Ground-truth Gaussian precision Gamma_rho = I + B with B_ii = 0.
struct PrecisionModel {
  SymmetricMatrix gamma_rho;
  double b_norm = 0.0;  // spectral_norm(gamma_rho - I)
  GraphStructure edges;

  // Generation diagnostics; not part of the model's identity.
  double edge_probability = 0.0;  // ER only
  std::size_t attempts = 1;
};

/// Validates unit diagonal and positive definiteness, then derives the edge
/// set and ||B||.
PrecisionModel make_precision_model(const SymmetricMatrix& gamma_rho);

/// Eight-node-style cycle: unit diagonal, `alpha` on ring neighbours.
SymmetricMatrix circle_precision(std::size_t dim, double alpha);

/// How the 0.3 in N(0, 0.3) is read.
enum class WeightScale { StdDev, Variance };

struct WeightConfig {
  double scale = 0.3;
  WeightScale reading = WeightScale::StdDev;
  double min_abs = 0.1;

  double sd() const;
};

struct ErConfig {
  double p_min = 0.1;
  double p_max = 0.8;
  std::optional<double> forced_p;  // bypasses the p ~ U[p_min, p_max] draw
  WeightConfig weights;
  bool enforce_b_norm = true;  // reject ||B|| >= 1
  std::size_t max_retries = 10'000;
};

struct GwConfig {
  double lambda = 2.0;
  WeightConfig weights;
  bool enforce_b_norm = true;
  bool restart_on_extinction = true;
  std::size_t max_retries = 10'000;
};

/// Erdos-Renyi precision: per attempt draw p, keep each pair with
/// probability p, weight it N(0, sd), zero weights below min_abs, and reject
/// non-PD (and optionally ||B|| >= 1) draws.
PrecisionModel gen_erdos_renyi(std::size_t dim, RngStream& rng, const ErConfig& cfg = {});

/// Galton-Watson tree precision grown breadth first; weights are resampled
/// until |w| >= min_abs so the tree stays connected.
PrecisionModel gen_galton_watson(std::size_t dim, RngStream& rng, const GwConfig& cfg = {});

GraphStructure structure_of(const PrecisionModel& model);

}  // namespace gnpn
