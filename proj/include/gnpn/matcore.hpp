#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace gnpn {

/// n x d observations, one row per sample.
using SampleBatch = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense real symmetric matrix. Every write goes to both triangles, so
/// (i, j) and (j, i) are always bitwise equal.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t dim);

  static SymmetricMatrix identity(std::size_t dim);
  /// Builds from the lower triangle of `m`; the upper triangle is ignored.
  static SymmetricMatrix from_lower(const Eigen::MatrixXd& m);
  /// Accepts a nearly symmetric matrix and averages the two triangles.
  /// Throws InvalidArgument if |m(i,j) - m(j,i)| > tol anywhere.
  static SymmetricMatrix from_dense(const Eigen::MatrixXd& m, double tol = 1e-9);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  const Eigen::MatrixXd& dense() const noexcept { return m_; }

  SymmetricMatrix operator+(const SymmetricMatrix& o) const;
  SymmetricMatrix operator-(const SymmetricMatrix& o) const;
  SymmetricMatrix operator*(double c) const;

  bool operator==(const SymmetricMatrix& o) const { return m_ == o.m_; }

 private:
  SymmetricMatrix() = default;
  Eigen::MatrixXd m_;
};

/// Inverse of a symmetric positive definite matrix via Cholesky.
/// Throws NotPositiveDefinite on a non-positive pivot.
SymmetricMatrix invert_spd(const SymmetricMatrix& m);

/// Operator 2-norm, max |eigenvalue|.
double spectral_norm(const SymmetricMatrix& m);

/// D^{-1/2} m D^{-1/2} with D = diag(m). Diagonal of the result is exactly 1.
SymmetricMatrix correlation_from_covariance(const SymmetricMatrix& m);

/// Cheap positive-definiteness probe (Cholesky succeeds).
bool is_positive_definite(const SymmetricMatrix& m);

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace gnpn
