#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gnpn {

/// Gauss-Hermite rule for the standard normal weight:
/// sum_i weights[i] * g(nodes[i]) ~= E[g(Z)], Z ~ N(0, 1).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule (n >= 2). Thread safe.
const GaussHermiteRule& gauss_hermite_rule(std::size_t n);

struct QuadratureOptions {
  std::size_t start_nodes = 32;
  std::size_t max_nodes = 512;
  double rel_tol = 1e-12;
};

/// E[g(X)], X ~ N(mu, sigma^2), doubling the node count until two
/// successive estimates agree to rel_tol (relative to sum w|g|).
/// Throws QuadratureFailure past max_nodes.
double gauss_hermite_expectation(const std::function<double(double)>& g, double mu, double sigma,
                                 const QuadratureOptions& opts = {});

double gauss_hermite_expectation(const std::function<double(double)>& g, double mu, double sigma,
                                 std::size_t nodes);

/// E[g(X)], X ~ N(mu, sigma^2), for g smooth between `breaks`. The range
/// [mu - 38 sigma, mu + 38 sigma] is cut at mu and at the breaks, and each
/// piece is integrated by tanh-sinh. rel_tol is relative to E|g|.
double piecewise_gaussian_expectation(const std::function<double(double)>& g, double mu, double sigma,
                                      const std::vector<double>& breaks, double rel_tol = 1e-12);

double normal_pdf(double x);
double normal_cdf(double x);

}  // namespace gnpn
