#include "gnpn/sampling.hpp"

#include "gnpn/error.hpp"

namespace gnpn {

SampleBatch sample_gaussian(const SymmetricMatrix& sigma, std::size_t n, RngStream& rng) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1");
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma.dense());
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "covariance has no Cholesky factor");
  const Eigen::MatrixXd l = llt.matrixL();
  const auto d = static_cast<Eigen::Index>(sigma.dim());

  SampleBatch out(static_cast<Eigen::Index>(n), d);
  Eigen::VectorXd z(d);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index k = 0; k < d; ++k) z(k) = rng.standard_normal();
    // lower-triangular product in a fixed order
    for (Eigen::Index i = 0; i < d; ++i) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k <= i; ++k) acc += l(i, k) * z(k);
      out(r, i) = acc;
    }
  }
  return out;
}

SampleBatch sample_gaussian(const PrecisionModel& model, std::size_t n, RngStream& rng) {
  return sample_gaussian(invert_spd(model.gamma_rho), n, rng);
}

}  // namespace gnpn
