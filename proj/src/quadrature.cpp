#include "gnpn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gnpn/error.hpp"

namespace gnpn {

namespace {

// Roots of H_n from the Jacobi matrix (off-diagonal sqrt(k/2)), polished
// by Newton on orthonormal Hermite polynomials, then rescaled to the
// standard normal weight.
GaussHermiteRule build_rule(std::size_t n) {
  constexpr double kPiM4 = 0.7511255444649425;  // pi^{-1/4}
  constexpr int kMaxIter = 20;
  const double dn = static_cast<double>(n);

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) sub(static_cast<Eigen::Index>(k - 1)) = std::sqrt(static_cast<double>(k) / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorKind::QuadratureFailure, "Hermite Jacobi eigensolve failed for n=" + std::to_string(n));

  // Eigenvalues come ascending; x holds the roots descending.
  std::vector<double> x(n), w(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = eig.eigenvalues()(static_cast<Eigen::Index>(n - 1 - i));
    double pp = 0.0;
    int it = 0;
    for (; it < kMaxIter; ++it) {
      double p1 = kPiM4, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double dj = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (dj + 1.0)) * p2 - std::sqrt(dj / (dj + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * dn) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-14 * std::max(1.0, std::abs(z))) break;
    }
    if (it == kMaxIter)
      throw Error(ErrorKind::QuadratureFailure, "Hermite root iteration did not converge for n=" + std::to_string(n));
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  // Ascending node order.
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];
    rule.weights[i] = w[n - 1 - i] * inv_sqrt_pi;
  }
  return rule;
}

struct RuleCache {
  std::mutex mu;
  std::map<std::size_t, std::unique_ptr<GaussHermiteRule>> rules;
};

RuleCache& cache() {
  static RuleCache c;
  return c;
}

struct Estimate {
  double value;
  double magnitude;  // sum w |g|
};

Estimate apply_rule(const GaussHermiteRule& rule, const std::function<double(double)>& g, double mu, double sigma) {
  double sum = 0.0, mag = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = rule.weights[i] * g(mu + sigma * rule.nodes[i]);
    sum += v;
    mag += std::abs(v);
  }
  return {sum, mag};
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "Gauss-Hermite rule needs at least 2 nodes");
  RuleCache& c = cache();
  std::lock_guard lock(c.mu);
  auto it = c.rules.find(n);
  if (it == c.rules.end()) it = c.rules.emplace(n, std::make_unique<GaussHermiteRule>(build_rule(n))).first;
  return *it->second;
}

double gauss_hermite_expectation(const std::function<double(double)>& g, double mu, double sigma,
                                 const QuadratureOptions& opts) {
  if (opts.start_nodes < 2) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least 2 nodes");
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "quadrature sigma must be positive");
  std::size_t n = opts.start_nodes;
  Estimate prev = apply_rule(gauss_hermite_rule(n), g, mu, sigma);
  while (n * 2 <= opts.max_nodes) {
    n *= 2;
    const Estimate next = apply_rule(gauss_hermite_rule(n), g, mu, sigma);
    if (!std::isfinite(next.value)) break;
    if (std::abs(next.value - prev.value) <= opts.rel_tol * next.magnitude) return next.value;
    prev = next;
  }
  throw Error(ErrorKind::QuadratureFailure,
              "Gauss-Hermite estimate not stable to " + std::to_string(opts.rel_tol) + " by " +
                  std::to_string(opts.max_nodes) + " nodes");
}

double gauss_hermite_expectation(const std::function<double(double)>& g, double mu, double sigma, std::size_t nodes) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "quadrature sigma must be positive");
  return apply_rule(gauss_hermite_rule(nodes), g, mu, sigma).value;
}

double piecewise_gaussian_expectation(const std::function<double(double)>& g, double mu, double sigma,
                                      const std::vector<double>& breaks, double rel_tol) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "quadrature sigma must be positive");
  // Beyond 38 standard deviations the density underflows.
  constexpr double kReach = 38.0;
  // The mode is always a cut: tanh-sinh puts its nodes near the ends.
  std::vector<double> cuts{-kReach, 0.0};
  for (double b : breaks) {
    const double z = (b - mu) / sigma;
    if (z > -kReach && z < kReach && z != 0.0) cuts.push_back(z);
  }
  cuts.push_back(kReach);
  std::sort(cuts.begin(), cuts.end());

  auto integrand = [&](double z) {
    const double w = normal_pdf(z);
    return w == 0.0 ? 0.0 : w * g(mu + sigma * z);
  };
  // tanh-sinh copes with the non-smooth endpoints of each piece. Its tables
  // grow lazily, so nested calls each get their own instance.
  thread_local std::vector<std::unique_ptr<boost::math::quadrature::tanh_sinh<double>>> pool;
  thread_local std::size_t depth = 0;
  if (pool.size() <= depth) pool.push_back(std::make_unique<boost::math::quadrature::tanh_sinh<double>>());
  auto& rule = *pool[depth];
  ++depth;
  struct Leave {
    std::size_t& d;
    ~Leave() { --d; }
  } leave{depth};
  double sum = 0.0, mag = 0.0, err = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] <= cuts[k]) continue;
    double piece_err = 0.0, piece_l1 = 0.0;
    sum += rule.integrate(integrand, cuts[k], cuts[k + 1], rel_tol, &piece_err, &piece_l1);
    err += piece_err;
    mag += piece_l1;
  }
  if (!std::isfinite(sum) || err > 10.0 * rel_tol * std::max(mag, 1e-300))
    throw Error(ErrorKind::QuadratureFailure, "piecewise Gaussian expectation did not converge (error " + std::to_string(err) +
                                                  ", scale " + std::to_string(mag) + ")");
  return sum;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace gnpn
