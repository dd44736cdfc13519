#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gnpn/matcore.hpp"
#include "gnpn/rng.hpp"

namespace gnpn {

enum class Parity { Odd, Even, Neither };

/// Mean and standard deviation of the Gaussian marginal a transform is
/// calibrated against.
struct MarginalParams {
  double mu = 0.0;
  double sigma = 1.0;
};

/// A diagonal map f: pointwise evaluation, optionally the exact derivative
/// sequence f^(a)(0), and optionally constants (C, K) with
/// |f^(a)(0)| <= C K^a for every a. Immutable once built.
class TransformSpec {
 public:
  using EvalFn = std::function<double(double)>;
  using DerivFn = std::function<double(unsigned)>;

  TransformSpec(std::string id, EvalFn eval, std::optional<DerivFn> deriv, std::optional<double> bound_c,
                std::optional<double> bound_k, Parity parity);

  const std::string& id() const noexcept { return id_; }
  double eval(double x) const { return eval_(x); }
  const EvalFn& eval_fn() const noexcept { return eval_; }

  bool has_derivatives() const noexcept { return deriv_.has_value(); }
  /// f^(a)(0); throws NoDerivativeSequence for eval-only specs.
  double deriv_at_zero(unsigned a) const;

  std::optional<double> bound_c() const noexcept { return bound_c_; }
  std::optional<double> bound_k() const noexcept { return bound_k_; }
  /// True when the growth constants are declared, i.e. the exact series
  /// is known to converge.
  bool has_growth_bound() const noexcept { return bound_c_.has_value() && bound_k_.has_value(); }
  Parity parity() const noexcept { return parity_; }

  /// Points where f is not smooth (e.g. the centre of a non-integer power).
  /// Quadrature splits there.
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  TransformSpec with_breakpoints(std::vector<double> points) const;

 private:
  std::string id_;
  EvalFn eval_;
  std::optional<DerivFn> deriv_;
  std::optional<double> bound_c_;
  std::optional<double> bound_k_;
  Parity parity_;
  std::vector<double> breakpoints_;
};

struct TransformParams {
  double alpha = 3.0;      // power
  double mu_f0 = 0.05;     // cdf
  double sigma_f0 = 0.4;   // cdf
  MarginalParams marginal;  // power, cdf
};

/// sin, cos, square, cube, pow7, cube_minus_square, sin2x, power, cdf,
/// identity. Throws UnknownTransform otherwise.
TransformSpec builtin(const std::string& name, const TransformParams& params = {});

/// Names accepted by builtin().
const std::vector<std::string>& builtin_names();

/// sigma * sign(z - mu)|z - mu|^alpha / sqrt(E|W|^{2 alpha}) + mu,
/// W ~ N(0, sigma^2). Exact derivatives only for odd integer alpha.
TransformSpec power_transform(double alpha, const MarginalParams& mp);

/// Centered, variance-normalized Phi((z - mu_f0) / sigma_f0).
TransformSpec cdf_transform(double mu_f0, double sigma_f0, const MarginalParams& mp);

/// Column j mapped through specs[j].
SampleBatch apply_transforms(const SampleBatch& batch, const std::vector<TransformSpec>& specs);

/// Config-level transform choice: a single builtin for every variable, or
/// "mixed" with a pool sampled uniformly per variable.
struct TransformConfig {
  std::string name = "cube";
  std::vector<std::string> pool;  // only for name == "mixed"
  TransformParams params;

  std::string label() const;
};

/// One spec per variable. `marginals` feeds the power/cdf calibration; the
/// rng is only consumed for "mixed".
std::vector<TransformSpec> resolve_transforms(const TransformConfig& cfg, const std::vector<MarginalParams>& marginals,
                                              RngStream& rng);

/// Marginals of N(0, Sigma): mu = 0, sigma = sqrt(Sigma_jj).
std::vector<MarginalParams> marginals_of(const SymmetricMatrix& sigma);

}  // namespace gnpn
