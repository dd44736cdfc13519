#include "gnpn/exactcov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gnpn/error.hpp"
#include "gnpn/quadrature.hpp"

namespace gnpn {

namespace {

// Neumaier-compensated running sum; terms are added in ascending index
// order so results do not depend on anything but the inputs.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// sum_{v >= m} y^v / v! for y >= 0.
double exp_tail(double y, std::size_t m) {
  if (y == 0.0) return m == 0 ? 1.0 : 0.0;
  const double dm = static_cast<double>(m);
  double term = std::exp(dm * std::log(y) - std::lgamma(dm + 1.0));
  double sum = 0.0;
  for (std::size_t v = m; v < m + 10'000; ++v) {
    sum += term;
    term *= y / static_cast<double>(v + 1);
    if (term <= 1e-18 * sum || term == 0.0) break;
  }
  return sum;
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::SeriesDivergence, what + " produced a non-finite term");
}

}  // namespace

double f_series(const TransformSpec& spec, unsigned k, double x, const SeriesConfig& cfg) {
  if (!spec.has_derivatives())
    throw Error(ErrorKind::NoDerivativeSequence, "transform '" + spec.id() + "' has no derivative sequence");
  const bool bounded = spec.has_growth_bound();
  const double c = bounded ? *spec.bound_c() : 0.0;
  const double kk = bounded ? *spec.bound_k() : 0.0;

  CompensatedSum sum;
  double power = 1.0;  // x^u / u!
  int small_run = 0;
  for (std::size_t u = 0; u <= cfg.max_k; ++u) {
    if (u > 0) power *= x / static_cast<double>(u);
    const double term = spec.deriv_at_zero(static_cast<unsigned>(2 * u + k)) * power;
    require_finite(term, "F_" + std::to_string(k) + " series of '" + spec.id() + "'");
    sum.add(term);
    small_run = std::abs(term) < cfg.taylor_tol ? small_run + 1 : 0;
    if (small_run < 3) continue;
    if (!bounded) return sum.value();
    // |remaining| <= C K^k sum_{v > u} (K^2 |x|)^v / v!
    const double tail = c * std::pow(kk, static_cast<double>(k)) * exp_tail(kk * kk * std::abs(x), u + 1);
    if (tail < cfg.taylor_tol) return sum.value();
  }
  throw Error(ErrorKind::SeriesDivergence, "F_" + std::to_string(k) + " series of '" + spec.id() +
                                               "' did not settle within " + std::to_string(cfg.max_k) + " terms");
}

double exact_tau(const TransformSpec& spec_i, const TransformSpec& spec_j, double s_ii, double s_jj, double s_ij,
                 const SeriesConfig& cfg) {
  if (!(s_ii > 0.0 && s_jj > 0.0)) throw Error(ErrorKind::InvalidCovariance, "exact_tau: variances must be positive");
  if (std::abs(s_ij) > std::sqrt(s_ii * s_jj) * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidCovariance, "exact_tau: |s_ij| exceeds sqrt(s_ii s_jj)");
  if (s_ij == 0.0) return 0.0;

  const bool bounded = spec_i.has_growth_bound() && spec_j.has_growth_bound();
  double tail_scale = 0.0, k2 = 0.0;
  if (bounded) {
    const double c = std::max(*spec_i.bound_c(), *spec_j.bound_c());
    const double kk = std::max(*spec_i.bound_k(), *spec_j.bound_k());
    k2 = kk * kk;
    tail_scale = c * c * std::exp(k2 * (s_ii + s_jj) / 2.0);
  }

  CompensatedSum sum;
  double power = 1.0;  // s_ij^k / k!
  int small_run = 0;
  for (std::size_t k = 1; k <= cfg.max_k; ++k) {
    power *= s_ij / static_cast<double>(k);
    const unsigned ku = static_cast<unsigned>(k);
    const double term = f_series(spec_i, ku, s_ii / 2.0, cfg) * f_series(spec_j, ku, s_jj / 2.0, cfg) * power;
    require_finite(term, "covariance series");
    sum.add(term);
    small_run = std::abs(term) < cfg.term_tol ? small_run + 1 : 0;
    if (small_run < 3) continue;
    if (!bounded) return sum.value();
    const double tail = tail_scale * exp_tail(k2 * std::abs(s_ij), k + 1);
    if (tail < cfg.term_tol) return sum.value();
  }
  throw Error(ErrorKind::SeriesDivergence,
              "covariance series for ('" + spec_i.id() + "', '" + spec_j.id() + "') did not settle");
}

double kappa_of(const TransformSpec& spec, const SeriesConfig& cfg) { return exact_tau(spec, spec, 1.0, 1.0, 1.0, cfg); }

double lambda_of(const TransformSpec& spec, const SeriesConfig& cfg) { return f_series(spec, 1, 0.5, cfg); }

namespace {

struct OracleEstimate {
  double cov;
  double scale;  // sqrt(E f^2 E g^2)
};

OracleEstimate oracle_at(const GaussHermiteRule& rule, const TransformSpec& fi, const TransformSpec& fj, double a,
                         double c, double e) {
  const std::size_t n = rule.nodes.size();
  double ef = 0.0, eg = 0.0, efg = 0.0, ef2 = 0.0, eg2 = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double u = rule.nodes[p];
    const double fu = fi.eval(a * u);
    double inner_g = 0.0, inner_g2 = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      const double gv = fj.eval(c * u + e * rule.nodes[q]);
      inner_g += rule.weights[q] * gv;
      inner_g2 += rule.weights[q] * gv * gv;
    }
    const double wp = rule.weights[p];
    ef += wp * fu;
    ef2 += wp * fu * fu;
    eg += wp * inner_g;
    eg2 += wp * inner_g2;
    efg += wp * fu * inner_g;
  }
  return {efg - ef * eg, std::sqrt(ef2 * eg2)};
}

// Nested adaptive integration split at the breakpoints: E[f(X) g(Y)] with
// the inner expectation over Y | X, which is smooth in X whenever e > 0.
double split_oracle(const TransformSpec& fi, const TransformSpec& fj, double a, double c, double e, double sjj,
                    double rel_tol) {
  const auto& f = fi.eval_fn();
  const auto& g = fj.eval_fn();
  const double ef = piecewise_gaussian_expectation(f, 0.0, a, fi.breakpoints(), rel_tol);
  const double eg = piecewise_gaussian_expectation(g, 0.0, std::sqrt(sjj), fj.breakpoints(), rel_tol);
  const double slope = c / a;  // Y = slope X + e V
  double efg;
  // Rounding leaves a spurious e ~ 1e-8 on exactly collinear pairs.
  if (e * e <= 1e-12 * sjj) {
    std::vector<double> breaks = fi.breakpoints();
    if (slope != 0.0)
      for (double b : fj.breakpoints()) breaks.push_back(b / slope);
    efg = piecewise_gaussian_expectation([&](double x) { return f(x) * g(slope * x); }, 0.0, a, breaks, rel_tol);
  } else {
    auto inner = [&](double x) { return piecewise_gaussian_expectation(g, slope * x, e, fj.breakpoints(), rel_tol); };
    efg = piecewise_gaussian_expectation([&](double x) { return f(x) * inner(x); }, 0.0, a, fi.breakpoints(), rel_tol);
  }
  return efg - ef * eg;
}

}  // namespace

double quadrature_oracle(const TransformSpec& spec_i, const TransformSpec& spec_j, double s_ii, double s_jj,
                         double s_ij, const OracleOptions& opts) {
  if (!(s_ii > 0.0 && s_jj > 0.0))
    throw Error(ErrorKind::InvalidCovariance, "quadrature_oracle: variances must be positive");
  const double a = std::sqrt(s_ii);
  const double c = s_ij / a;
  double e2 = s_jj - c * c;
  if (e2 < -1e-12 * s_jj) throw Error(ErrorKind::InvalidCovariance, "quadrature_oracle: s_jj < (s_ij)^2 / s_ii");
  const double e = std::sqrt(std::max(e2, 0.0));

  // Gauss-Hermite converges only algebraically across a kink.
  if (!spec_i.breakpoints().empty() || !spec_j.breakpoints().empty()) {
    const double cov = split_oracle(spec_i, spec_j, a, c, e, s_jj, std::min(opts.rel_tol, 1e-12));
    if (!std::isfinite(cov))
      throw Error(ErrorKind::QuadratureFailure,
                  "split covariance for ('" + spec_i.id() + "', '" + spec_j.id() + "') is not finite");
    return cov;
  }

  std::size_t n = opts.start_nodes;
  OracleEstimate prev = oracle_at(gauss_hermite_rule(n), spec_i, spec_j, a, c, e);
  while (n * 2 <= opts.max_nodes) {
    n *= 2;
    const OracleEstimate next = oracle_at(gauss_hermite_rule(n), spec_i, spec_j, a, c, e);
    if (!std::isfinite(next.cov)) break;
    if (std::abs(next.cov - prev.cov) <= opts.rel_tol * std::max(std::abs(next.cov), next.scale)) return next.cov;
    prev = next;
  }
  // Not stable by max_nodes: fall back to the split integration.
  const double cov = split_oracle(spec_i, spec_j, a, c, e, s_jj, std::min(opts.rel_tol, 1e-12));
  if (!std::isfinite(cov))
    throw Error(ErrorKind::QuadratureFailure, "bivariate covariance for ('" + spec_i.id() + "', '" + spec_j.id() +
                                                  "') did not stabilise");
  return cov;
}

namespace {

struct MarginalConstants {
  double kappa;
  double lambda;
};

MarginalConstants constants_of(const TransformSpec& spec, const SeriesConfig& cfg) {
  if (spec.has_derivatives() && spec.has_growth_bound()) return {kappa_of(spec, cfg), lambda_of(spec, cfg)};
  // Var f(X) and, by Stein's identity, E f'(X) = E[X f(X)] for X ~ N(0, 1).
  const auto& f = spec.eval_fn();
  auto expect = [&](const std::function<double(double)>& g) {
    return piecewise_gaussian_expectation(g, 0.0, 1.0, spec.breakpoints());
  };
  const double m1 = expect(f);
  const double m2 = expect([&](double x) { return f(x) * f(x); });
  const double lam = expect([&](double x) { return x * f(x); });
  return {m2 - m1 * m1, lam};
}

}  // namespace

GnpnPrediction predict(const PrecisionModel& model, const std::vector<TransformSpec>& specs, const SeriesConfig& cfg) {
  const std::size_t d = model.gamma_rho.dim();
  if (specs.size() != d) throw Error(ErrorKind::DimensionMismatch, "predict: one transform per variable");
  for (std::size_t i = 0; i < d; ++i)
    if (model.gamma_rho(i, i) != 1.0) throw Error(ErrorKind::InvalidArgument, "predict: precision must be unit diagonal");

  std::vector<double> kappa(d), lambda(d);
  for (std::size_t i = 0; i < d; ++i) {
    const MarginalConstants mc = constants_of(specs[i], cfg);
    kappa[i] = mc.kappa;
    lambda[i] = mc.lambda;
  }
  SymmetricMatrix sigma(d), gamma(d);
  for (std::size_t i = 0; i < d; ++i) {
    sigma.set(i, i, kappa[i]);
    gamma.set(i, i, 1.0 / kappa[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double lbl = lambda[i] * model.gamma_rho(i, j) * lambda[j];
      sigma.set(i, j, -lbl);
      gamma.set(i, j, lbl / (kappa[i] * kappa[j]));
    }
  }
  return GnpnPrediction{std::move(kappa), std::move(lambda), std::move(sigma), std::move(gamma)};
}

ExactCovResult exact_sigma_pi(const PrecisionModel& model, const std::vector<TransformSpec>& specs,
                              const SeriesConfig& cfg) {
  const std::size_t d = model.gamma_rho.dim();
  if (specs.size() != d) throw Error(ErrorKind::DimensionMismatch, "exact_sigma_pi: one transform per variable");
  const SymmetricMatrix s = invert_spd(model.gamma_rho);

  SymmetricMatrix tau(d);
  bool used_series = false, used_quadrature = false;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const TransformSpec& fi = specs[i];
      const TransformSpec& fj = specs[j];
      const bool series = fi.has_derivatives() && fi.has_growth_bound() && fj.has_derivatives() && fj.has_growth_bound();
      if (series) {
        tau.set(i, j, exact_tau(fi, fj, s(i, i), s(j, j), s(i, j), cfg));
        used_series = true;
      } else {
        tau.set(i, j, quadrature_oracle(fi, fj, s(i, i), s(j, j), s(i, j)));
        used_quadrature = true;
      }
    }
  }
  CovPath path = CovPath::Series;
  if (used_quadrature) path = used_series ? CovPath::Mixed : CovPath::Quadrature;
  return ExactCovResult{std::move(tau), path};
}

}  // namespace gnpn
