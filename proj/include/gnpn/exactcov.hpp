#pragma once

#include <cstddef>
#include <vector>

#include "gnpn/graphgen.hpp"
#include "gnpn/matcore.hpp"
#include "gnpn/transforms.hpp"

namespace gnpn {

/// Truncation controls for the F/G series.
struct SeriesConfig {
  double term_tol = 1e-14;   // absolute, outer k-sum
  std::size_t max_k = 120;   // hard cap on either sum
  double taylor_tol = 1e-15; // absolute, inner F_k sum
};

/// F_k(x) = sum_{u >= 0} f^(2u+k)(0) x^u / u!.
double f_series(const TransformSpec& spec, unsigned k, double x, const SeriesConfig& cfg = {});

/// Cov(f_i(X), f_j(Y)) for (X, Y) centered bivariate normal with variances
/// s_ii, s_jj and covariance s_ij, via the exact series
/// sum_{k >= 1} F_ki(s_ii/2) F_kj(s_jj/2) s_ij^k / k!.
double exact_tau(const TransformSpec& spec_i, const TransformSpec& spec_j, double s_ii, double s_jj, double s_ij,
                 const SeriesConfig& cfg = {});

/// kappa = sum_k F_k(1/2)^2 / k! (variance of f(X), X ~ N(0, 1)).
double kappa_of(const TransformSpec& spec, const SeriesConfig& cfg = {});

/// lambda = F_1(1/2) (= E f'(X), X ~ N(0, 1)).
double lambda_of(const TransformSpec& spec, const SeriesConfig& cfg = {});

struct OracleOptions {
  std::size_t start_nodes = 32;
  std::size_t max_nodes = 512;
  double rel_tol = 1e-10;
};

/// Same covariance by tensor Gauss-Hermite over the whitened pair
/// X = a u, Y = c u + e v. Independent of the series path. Transforms with
/// breakpoints, or pairs where the node doubling does not settle, go through
/// nested tanh-sinh split at the breakpoints instead.
double quadrature_oracle(const TransformSpec& spec_i, const TransformSpec& spec_j, double s_ii, double s_jj,
                         double s_ij, const OracleOptions& opts = {});

/// First-order structure of the transformed covariance
/// and precision for Gamma_rho = I + B.
struct GnpnPrediction {
  std::vector<double> kappa;
  std::vector<double> lambda;
  SymmetricMatrix sigma_pi_first_order;  // K - Lambda B Lambda
  SymmetricMatrix gamma_pi_first_order;  // K^-1 + K^-1 Lambda B Lambda K^-1
};

GnpnPrediction predict(const PrecisionModel& model, const std::vector<TransformSpec>& specs,
                       const SeriesConfig& cfg = {});

enum class CovPath { Series, Quadrature, Mixed };

struct ExactCovResult {
  SymmetricMatrix sigma_pi;
  CovPath path;
};

/// Exact Sigma_pi. Pairs where both transforms carry derivative sequences
/// and growth constants use the series; anything else falls back to the
/// quadrature oracle, and `path` records which happened.
ExactCovResult exact_sigma_pi(const PrecisionModel& model, const std::vector<TransformSpec>& specs,
                              const SeriesConfig& cfg = {});

}  // namespace gnpn
