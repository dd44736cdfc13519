#include "gnpn/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "gnpn/error.hpp"
#include "gnpn/quadrature.hpp"

namespace gnpn {

TransformSpec::TransformSpec(std::string id, EvalFn eval, std::optional<DerivFn> deriv, std::optional<double> bound_c,
                             std::optional<double> bound_k, Parity parity)
    : id_(std::move(id)),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      bound_c_(bound_c),
      bound_k_(bound_k),
      parity_(parity) {}

TransformSpec TransformSpec::with_breakpoints(std::vector<double> points) const {
  TransformSpec out = *this;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  out.breakpoints_ = std::move(points);
  return out;
}

double TransformSpec::deriv_at_zero(unsigned a) const {
  if (!deriv_) throw Error(ErrorKind::NoDerivativeSequence, "transform '" + id_ + "' is evaluation-only");
  return (*deriv_)(a);
}

namespace {

// f(x) = c * x^degree
TransformSpec monomial(std::string id, unsigned degree, double c) {
  double fact = 1.0;
  for (unsigned i = 2; i <= degree; ++i) fact *= i;
  const double d_at_degree = c * fact;
  const Parity parity = degree % 2 == 0 ? Parity::Even : Parity::Odd;
  return TransformSpec(
      std::move(id), [degree, c](double x) { return c * std::pow(x, static_cast<int>(degree)); },
      [degree, d_at_degree](unsigned a) { return a == degree ? d_at_degree : 0.0; }, std::abs(d_at_degree), 1.0,
      parity);
}

// Derivatives of sin(s x) at 0 follow the cycle 0, s, 0, -s^3, ...
TransformSpec scaled_sine(std::string id, double s) {
  return TransformSpec(
      std::move(id), [s](double x) { return std::sin(s * x); },
      [s](unsigned a) {
        static constexpr std::array<double, 4> cycle{0.0, 1.0, 0.0, -1.0};
        return cycle[a % 4] * std::pow(s, static_cast<int>(a));
      },
      1.0, std::abs(s), Parity::Odd);
}

bool is_odd_integer(double alpha) {
  return alpha > 0.0 && alpha == std::floor(alpha) && std::fmod(alpha, 2.0) == 1.0;
}

// E|W|^p for W ~ N(0, sigma^2).
double abs_normal_moment(double p, double sigma) {
  return std::pow(sigma, p) * std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
}

void check_marginal(const MarginalParams& mp) {
  if (!(mp.sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "marginal sigma must be positive");
}

}  // namespace

TransformSpec power_transform(double alpha, const MarginalParams& mp) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "power transform needs alpha > 0");
  check_marginal(mp);
  const double mu = mp.mu, sigma = mp.sigma;
  const bool exact = is_odd_integer(alpha);

  double second_moment;
  if (exact) {
    const int p = static_cast<int>(2.0 * alpha);
    second_moment = gauss_hermite_expectation([p](double t) { return std::pow(t, p); }, 0.0, sigma);
  } else {
    // |t|^{2 alpha} has a kink at 0 that Gauss-Hermite cannot resolve.
    second_moment = abs_normal_moment(2.0 * alpha, sigma);
  }
  const double c = sigma / std::sqrt(second_moment);

  TransformSpec::EvalFn eval = [alpha, c, mu](double z) {
    const double t = z - mu;
    const double mag = std::pow(std::abs(t), alpha);
    return c * (t < 0.0 ? -mag : mag) + mu;
  };
  std::string id = "power(alpha=" + std::to_string(alpha) + ")";
  if (!exact)
    return TransformSpec(std::move(id), std::move(eval), std::nullopt, std::nullopt, std::nullopt,
                         mu == 0.0 ? Parity::Odd : Parity::Neither)
        .with_breakpoints({mu});

  // c (z - mu)^n + mu expanded at 0.
  const unsigned n = static_cast<unsigned>(alpha);
  std::vector<double> derivs(n + 1);
  for (unsigned a = 0; a <= n; ++a) {
    double falling = 1.0;
    for (unsigned i = 0; i < a; ++i) falling *= static_cast<double>(n - i);
    derivs[a] = c * falling * std::pow(-mu, static_cast<int>(n - a));
  }
  derivs[0] += mu;
  double bound = 0.0;
  for (double v : derivs) bound = std::max(bound, std::abs(v));
  TransformSpec::DerivFn deriv = [derivs](unsigned a) { return a < derivs.size() ? derivs[a] : 0.0; };
  return TransformSpec(std::move(id), std::move(eval), std::move(deriv), bound, 1.0,
                       mu == 0.0 ? Parity::Odd : Parity::Neither);
}

TransformSpec cdf_transform(double mu_f0, double sigma_f0, const MarginalParams& mp) {
  if (!(sigma_f0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "cdf transform needs sigma_f0 > 0");
  check_marginal(mp);
  auto f0 = [mu_f0, sigma_f0](double t) { return normal_cdf((t - mu_f0) / sigma_f0); };
  // Gauss-Hermite stalls once the sigmoid is narrow against sigma; cut at
  // its centre and integrate piecewise instead.
  const std::vector<double> cut{mu_f0};
  const double center = piecewise_gaussian_expectation(f0, mp.mu, mp.sigma, cut);
  const double var = piecewise_gaussian_expectation(
      [&](double t) {
        const double v = f0(t) - center;
        return v * v;
      },
      mp.mu, mp.sigma, cut);
  const double scale = mp.sigma / std::sqrt(var);
  const double mu = mp.mu;

  TransformSpec::EvalFn eval = [f0, center, scale, mu](double z) { return scale * (f0(z) - center) + mu; };
  const double at_zero = eval(0.0);
  const double u0 = -mu_f0 / sigma_f0;
  // d^a/dt^a Phi(u(t)) = sigma_f0^{-a} (-1)^{a-1} He_{a-1}(u) phi(u)
  TransformSpec::DerivFn deriv = [=](unsigned a) {
    if (a == 0) return at_zero;
    double he_prev = 0.0, he = 1.0;  // He_{-1} (unused), He_0
    for (unsigned k = 0; k + 1 < a; ++k) {
      const double next = u0 * he - static_cast<double>(k) * he_prev;
      he_prev = he;
      he = next;
    }
    const double sign = (a - 1) % 2 == 0 ? 1.0 : -1.0;
    return scale * std::pow(sigma_f0, -static_cast<double>(a)) * sign * he * normal_pdf(u0);
  };
  const Parity parity = (mu_f0 == 0.0 && mu == 0.0) ? Parity::Odd : Parity::Neither;
  // Derivatives of Phi grow like sqrt(a!), so no (C, K) exists.
  return TransformSpec("cdf(mu_f0=" + std::to_string(mu_f0) + ", sigma_f0=" + std::to_string(sigma_f0) + ")",
                       std::move(eval), std::move(deriv), std::nullopt, std::nullopt, parity);
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"sin",   "cos",   "square", "cube", "pow7",
                                              "cube_minus_square", "sin2x", "power", "cdf", "identity"};
  return names;
}

TransformSpec builtin(const std::string& name, const TransformParams& params) {
  if (name == "identity") return monomial("identity", 1, 1.0);
  if (name == "sin") return scaled_sine("sin", 1.0);
  if (name == "sin2x") return scaled_sine("sin2x", 2.0);
  if (name == "cos") {
    return TransformSpec(
        "cos", [](double x) { return std::cos(x); },
        [](unsigned a) {
          static constexpr std::array<double, 4> cycle{1.0, 0.0, -1.0, 0.0};
          return cycle[a % 4];
        },
        1.0, 1.0, Parity::Even);
  }
  if (name == "square") return monomial("square", 2, 1.0);
  if (name == "cube") return monomial("cube", 3, 1.0);
  if (name == "pow7") return monomial("pow7", 7, 1.0);
  if (name == "cube_minus_square") {
    return TransformSpec(
        "cube_minus_square", [](double x) { return x * x * x - x * x; },
        [](unsigned a) {
          if (a == 2) return -2.0;
          if (a == 3) return 6.0;
          return 0.0;
        },
        6.0, 1.0, Parity::Neither);
  }
  if (name == "power") return power_transform(params.alpha, params.marginal);
  if (name == "cdf") return cdf_transform(params.mu_f0, params.sigma_f0, params.marginal);
  throw Error(ErrorKind::UnknownTransform, "'" + name + "'");
}

SampleBatch apply_transforms(const SampleBatch& batch, const std::vector<TransformSpec>& specs) {
  if (specs.size() != static_cast<std::size_t>(batch.cols()))
    throw Error(ErrorKind::DimensionMismatch, "apply_transforms: " + std::to_string(specs.size()) +
                                                  " transforms for " + std::to_string(batch.cols()) + " columns");
  SampleBatch out(batch.rows(), batch.cols());
  for (Eigen::Index j = 0; j < batch.cols(); ++j) {
    const auto& f = specs[static_cast<std::size_t>(j)].eval_fn();
    for (Eigen::Index r = 0; r < batch.rows(); ++r) out(r, j) = f(batch(r, j));
  }
  return out;
}

namespace {

std::string pretty(const std::string& name, const TransformParams& p) {
  if (name == "sin") return "sin(x)";
  if (name == "cos") return "cos(x)";
  if (name == "square") return "x^2";
  if (name == "cube") return "x^3";
  if (name == "pow7") return "x^7";
  if (name == "cube_minus_square") return "x^3-x^2";
  if (name == "sin2x") return "sin(2x)";
  if (name == "identity") return "x";
  if (name == "power") return "power(" + std::to_string(p.alpha) + ")";
  if (name == "cdf") return "cdf";
  return name;
}

}  // namespace

std::string TransformConfig::label() const {
  if (name != "mixed") return pretty(name, params);
  std::string out = "[";
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (i) out += ", ";
    out += pretty(pool[i], params);
  }
  return out + "]";
}

std::vector<TransformSpec> resolve_transforms(const TransformConfig& cfg, const std::vector<MarginalParams>& marginals,
                                              RngStream& rng) {
  std::vector<TransformSpec> out;
  out.reserve(marginals.size());
  if (cfg.name == "mixed" && cfg.pool.empty())
    throw Error(ErrorKind::InvalidArgument, "mixed transform needs a non-empty pool");
  for (const MarginalParams& mp : marginals) {
    const std::string& name = cfg.name == "mixed" ? cfg.pool[rng.index(cfg.pool.size())] : cfg.name;
    TransformParams params = cfg.params;
    params.marginal = mp;
    out.push_back(builtin(name, params));
  }
  return out;
}

std::vector<MarginalParams> marginals_of(const SymmetricMatrix& sigma) {
  std::vector<MarginalParams> out(sigma.dim());
  for (std::size_t j = 0; j < sigma.dim(); ++j) {
    if (!(sigma(j, j) > 0.0)) throw Error(ErrorKind::NonPositiveVariance, "marginal variance");
    out[j] = MarginalParams{0.0, std::sqrt(sigma(j, j))};
  }
  return out;
}

}  // namespace gnpn
