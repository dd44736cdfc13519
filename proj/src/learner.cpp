#include "gnpn/learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gnpn/error.hpp"

namespace gnpn {

namespace {

Eigen::MatrixXd centered(const SampleBatch& batch) {
  if (batch.rows() < 2) throw Error(ErrorKind::TooFewSamples, "need at least 2 observations");
  if (batch.cols() < 1) throw Error(ErrorKind::InvalidArgument, "batch has no columns");
  Eigen::MatrixXd x = batch;
  const auto n = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < x.rows(); ++r) sum += x(r, j);
    x.col(j).array() -= sum / n;
  }
  return x;
}

SymmetricMatrix covariance_of_centered(const Eigen::MatrixXd& xc) {
  const Eigen::MatrixXd c = (xc.transpose() * xc) / static_cast<double>(xc.rows() - 1);
  return SymmetricMatrix::from_lower(c);
}

}  // namespace

SymmetricMatrix empirical_covariance(const SampleBatch& batch) { return covariance_of_centered(centered(batch)); }

SymmetricMatrix empirical_correlation(const SampleBatch& batch) {
  const Eigen::MatrixXd xc = centered(batch);
  for (Eigen::Index j = 0; j < xc.cols(); ++j) {
    const double scale = batch.col(j).cwiseAbs().maxCoeff();
    const double spread = xc.col(j).cwiseAbs().maxCoeff();
    if (!(spread > 1e-12 * scale) || !std::isfinite(spread))
      throw Error(ErrorKind::DegenerateColumn, "column " + std::to_string(j) + " has zero variance");
  }
  return correlation_from_covariance(covariance_of_centered(xc));
}

Applicability applicability_check(const SymmetricMatrix& r) {
  const double norm = spectral_norm(r - SymmetricMatrix::identity(r.dim()));
  return {norm < 1.0, norm};
}

GammaTriangle gamma_triangle_of(const SymmetricMatrix& gamma) {
  const std::size_t d = gamma.dim();
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "gamma triangle needs dim >= 2");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(d * (d - 1) / 2);
  for (std::size_t i = 1; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return std::abs(gamma(a.first, a.second)) > std::abs(gamma(b.first, b.second));
  });
  GammaTriangle out;
  out.values.reserve(pairs.size());
  for (const auto& [i, j] : pairs) out.values.push_back(std::abs(gamma(i, j)));
  out.pairs = std::move(pairs);
  return out;
}

Thresholded threshold_precision(const SymmetricMatrix& gamma, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "threshold must be non-negative");
  SymmetricMatrix out = gamma;
  for (std::size_t i = 0; i < gamma.dim(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(gamma(i, j)) <= t) out.set(i, j, 0.0);
  GraphStructure graph = GraphStructure::from_support(out);
  return {std::move(out), std::move(graph)};
}

LearnResult learn(const SampleBatch& batch, const LearnOptions& opts) {
  const auto n = static_cast<std::size_t>(batch.rows());
  const auto d = static_cast<std::size_t>(batch.cols());
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "learn needs at least 2 variables");
  if (n < d + 1)
    throw Error(ErrorKind::TooFewSamples, std::to_string(n) + " observations for " + std::to_string(d) + " variables");

  SymmetricMatrix r = empirical_correlation(batch);
  const Applicability app = applicability_check(r);
  if (!app.applicable && opts.strict)
    throw Error(ErrorKind::ApplicabilityFailed, "||R - I|| = " + std::to_string(app.norm) + " >= 1");

  SymmetricMatrix gamma(d);
  try {
    gamma = invert_spd(opts.scale == PrecisionScale::Correlation ? r : empirical_covariance(batch));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
    throw Error(ErrorKind::SingularCorrelation, "sample correlation is not invertible");
  }

  GammaTriangle tri = gamma_triangle_of(gamma);
  KneeResult knee;
  if (opts.threshold) {
    knee.threshold = *opts.threshold;
  } else {
    knee = kneedle(tri.values, opts.sensitivity, opts.online);
  }
  Thresholded th = threshold_precision(gamma, knee.threshold);
  return LearnResult{std::move(r),   std::move(gamma), app.norm,         app.applicable,
                     std::move(tri), knee,             std::move(th.gamma), std::move(th.graph)};
}

}  // namespace gnpn
