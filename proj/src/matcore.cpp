#include "gnpn/matcore.hpp"

#include <cmath>
#include <string>

#include "gnpn/error.hpp"

namespace gnpn {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::RetriesExhausted: return "RetriesExhausted";
    case ErrorKind::DegenerateTree: return "DegenerateTree";
    case ErrorKind::UnknownTransform: return "UnknownTransform";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NoDerivativeSequence: return "NoDerivativeSequence";
    case ErrorKind::SeriesDivergence: return "SeriesDivergence";
    case ErrorKind::InvalidCovariance: return "InvalidCovariance";
    case ErrorKind::DegenerateColumn: return "DegenerateColumn";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::SingularCorrelation: return "SingularCorrelation";
    case ErrorKind::ApplicabilityFailed: return "ApplicabilityFailed";
    case ErrorKind::NoKnee: return "NoKnee";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim) {
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "matrix dimension must be >= 1");
  m_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t dim) {
  SymmetricMatrix out(dim);
  out.m_.diagonal().setOnes();
  return out;
}

SymmetricMatrix SymmetricMatrix::from_lower(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "symmetric matrix must be square and non-empty");
  SymmetricMatrix out;
  out.m_ = m.triangularView<Eigen::Lower>();
  out.m_.triangularView<Eigen::StrictlyUpper>() = out.m_.transpose();
  return out;
}

SymmetricMatrix SymmetricMatrix::from_dense(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "symmetric matrix must be square and non-empty");
  const Eigen::Index d = m.rows();
  SymmetricMatrix out(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    out.m_(i, i) = m(i, i);
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol) {
        throw Error(ErrorKind::InvalidArgument,
                    "matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      const double avg = 0.5 * (m(i, j) + m(j, i));
      out.m_(i, j) = avg;
      out.m_(j, i) = avg;
    }
  }
  return out;
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix sum");
  SymmetricMatrix out;
  out.m_ = m_ + o.m_;
  return out;
}

SymmetricMatrix SymmetricMatrix::operator-(const SymmetricMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix difference");
  SymmetricMatrix out;
  out.m_ = m_ - o.m_;
  return out;
}

SymmetricMatrix SymmetricMatrix::operator*(double c) const {
  SymmetricMatrix out;
  out.m_ = m_ * c;
  return out;
}

SymmetricMatrix invert_spd(const SymmetricMatrix& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.dense());
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "Cholesky factorization hit a non-positive pivot");
  const Eigen::Index d = m.dense().rows();
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
  // The solve is not exactly symmetric; keep the lower triangle.
  return SymmetricMatrix::from_lower(inv);
}

bool is_positive_definite(const SymmetricMatrix& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.dense());
  return llt.info() == Eigen::Success;
}

double spectral_norm(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.dense(), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorKind::IterationLimit, "symmetric eigensolver did not converge");
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

SymmetricMatrix correlation_from_covariance(const SymmetricMatrix& m) {
  const std::size_t d = m.dim();
  Eigen::VectorXd inv_sd(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (!(m(i, i) > 0.0))
      throw Error(ErrorKind::NonPositiveVariance, "diagonal entry " + std::to_string(i) + " is not positive");
    inv_sd(static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(m(i, i));
  }
  SymmetricMatrix out = SymmetricMatrix::identity(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j)
      out.set(i, j, m(i, j) * inv_sd(static_cast<Eigen::Index>(i)) * inv_sd(static_cast<Eigen::Index>(j)));
  return out;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "max_abs_diff");
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace gnpn
