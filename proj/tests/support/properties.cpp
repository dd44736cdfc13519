#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "gnpn/error.hpp"
#include "gnpn/exactcov.hpp"
#include "gnpn/experiment.hpp"
#include "gnpn/graphgen.hpp"
#include "gnpn/io.hpp"
#include "gnpn/kneedle.hpp"
#include "gnpn/learner.hpp"
#include "gnpn/quadrature.hpp"
#include "gnpn/metrics.hpp"
#include "gnpn/sampling.hpp"
#include "gnpn/transforms.hpp"

namespace gnpn::props {

namespace {

using Result = std::optional<std::string>;

Result fail(std::string msg) { return msg; }

std::size_t draw_dim(RngStream& rng, std::size_t lo, std::size_t hi) { return lo + rng.index(hi - lo + 1); }

// Q diag(eig) Q^T with eigenvalues log-uniform in [1, cond].
SymmetricMatrix random_spd(RngStream& rng, std::size_t d, double cond) {
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.standard_normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
  Eigen::VectorXd eig(d);
  for (std::size_t i = 0; i < d; ++i) eig(i) = std::exp(rng.uniform(0.0, std::log(cond)));
  eig(0) = 1.0;
  return SymmetricMatrix::from_dense(q * eig.asDiagonal() * q.transpose(), 1e-6);
}

SymmetricMatrix random_symmetric(RngStream& rng, std::size_t d) {
  SymmetricMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) m.set(i, j, rng.normal(0.0, 1.0));
  return m;
}

std::vector<std::string> series_builtins() {
  std::vector<std::string> out;
  for (const auto& n : builtin_names()) {
    const auto f = builtin(n);
    if (f.has_derivatives() && f.has_growth_bound()) out.push_back(n);
  }
  return out;
}

// Transformed sample batch from a fresh Erdos-Renyi model.
struct Problem {
  PrecisionModel model;
  SampleBatch z;
};

Problem random_problem(RngStream& rng, std::size_t d, std::size_t n, const std::string& transform) {
  PrecisionModel m = gen_erdos_renyi(d, rng);
  auto x = sample_gaussian(m, n, rng);
  return {m, apply_transforms(x, std::vector<TransformSpec>(d, builtin(transform)))};
}

// Learned graph, or the error kind name.
std::string learn_outcome(const SampleBatch& z, const LearnOptions& opts, GraphStructure* graph) {
  try {
    *graph = learn(z, opts).graph;
    return "ok";
  } catch (const Error& e) {
    return std::string(to_string(e.kind()));
  }
}

std::vector<Property> build() {
  std::vector<Property> ps;

  // matcore
  ps.push_back({"matcore", "inverse_round_trip", [](RngStream& rng) -> Result {
                  const auto m = random_spd(rng, draw_dim(rng, 2, 12), 1e5);
                  const double err = max_abs_diff(invert_spd(invert_spd(m)).dense(), m.dense());
                  if (err > 1e-8 * std::max(1.0, m.dense().cwiseAbs().maxCoeff()))
                    return fail(fmt::format("round trip error {}", err));
                  return {};
                }});
  ps.push_back({"matcore", "spectral_norm_homogeneous", [](RngStream& rng) -> Result {
                  const auto m = random_symmetric(rng, draw_dim(rng, 1, 12));
                  const double base = spectral_norm(m);
                  for (double c : {-2.0, 0.5}) {
                    const double scaled = spectral_norm(m * c);
                    if (std::abs(scaled - std::abs(c) * base) > 1e-10 * std::max(1.0, base))
                      return fail(fmt::format("c={} gives {} vs {}", c, scaled, std::abs(c) * base));
                  }
                  return {};
                }});
  ps.push_back({"matcore", "correlation_bounded", [](RngStream& rng) -> Result {
                  const auto r = correlation_from_covariance(random_spd(rng, draw_dim(rng, 2, 12), 1e4));
                  for (std::size_t i = 0; i < r.dim(); ++i) {
                    if (r(i, i) != 1.0) return fail("diagonal not exactly 1");
                    for (std::size_t j = 0; j < i; ++j)
                      if (std::abs(r(i, j)) > 1 + 1e-12) return fail("entry exceeds 1");
                  }
                  return {};
                }});
  ps.push_back({"matcore", "stream_replay", [](RngStream& rng) -> Result {
                  const std::uint64_t seed = rng.engine()(), stream = rng.engine()();
                  const auto sigma = random_spd(rng, draw_dim(rng, 2, 6), 10);
                  RngStream a(seed, stream), b(seed, stream);
                  if (sample_gaussian(sigma, 50, a) != sample_gaussian(sigma, 50, b)) return fail("batches differ");
                  return {};
                }});

  // graphgen
  ps.push_back({"graphgen", "erdos_renyi_valid", [](RngStream& rng) -> Result {
                  const auto m = gen_erdos_renyi(draw_dim(rng, 2, 15), rng);
                  if (!(m.b_norm < 1.0)) return fail("||B|| >= 1");
                  invert_spd(m.gamma_rho);
                  for (const Edge& e : m.edges.edges())
                    if (std::abs(m.gamma_rho(e.lo, e.hi)) < 0.1) return fail("weight below 0.1");
                  if (!(GraphStructure::from_support(m.gamma_rho) == m.edges)) return fail("edge set mismatch");
                  return {};
                }});
  ps.push_back({"graphgen", "galton_watson_tree", [](RngStream& rng) -> Result {
                  const std::size_t d = draw_dim(rng, 2, 20);
                  const auto m = gen_galton_watson(d, rng);
                  if (m.edges.edge_count() != d - 1) return fail("edge count");
                  std::vector<std::size_t> parent(d);
                  std::iota(parent.begin(), parent.end(), 0);
                  auto root = [&](std::size_t v) {
                    while (parent[v] != v) v = parent[v];
                    return v;
                  };
                  for (const Edge& e : m.edges.edges()) {
                    const auto a = root(e.lo), b = root(e.hi);
                    if (a == b) return fail("cycle");
                    parent[a] = b;
                    if (std::abs(m.gamma_rho(e.lo, e.hi)) < 0.1) return fail("weight below 0.1");
                  }
                  if (!(m.b_norm < 1.0)) return fail("||B|| >= 1");
                  invert_spd(m.gamma_rho);
                  return {};
                }});

  // transforms
  ps.push_back({"transforms", "taylor_matches_eval", [](RngStream& rng) -> Result {
                  for (const auto& name : series_builtins()) {
                    const auto f = builtin(name);
                    const double x = rng.uniform(-1.0, 1.0);
                    double sum = 0.0, power = 1.0;
                    for (unsigned a = 0; a < 40; ++a) {
                      if (a > 0) power *= x / a;
                      sum += f.deriv_at_zero(a) * power;
                    }
                    const double tol = name == "sin2x" ? 1e-6 : 1e-8;
                    if (std::abs(sum - f.eval(x)) > tol) return fail(fmt::format("{} at {}", name, x));
                  }
                  return {};
                }});
  ps.push_back({"transforms", "growth_bound", [](RngStream& rng) -> Result {
                  const auto names = series_builtins();
                  const auto f = builtin(names[rng.index(names.size())]);
                  for (unsigned a = 0; a <= 40; ++a)
                    if (std::abs(f.deriv_at_zero(a)) > *f.bound_c() * std::pow(*f.bound_k(), a) * (1 + 1e-12))
                      return fail(fmt::format("{} a={}", f.id(), a));
                  return {};
                }});
  ps.push_back({"transforms", "parity_by_evaluation", [](RngStream& rng) -> Result {
                  for (const auto& name : builtin_names()) {
                    const auto f = builtin(name);
                    const double x = rng.uniform(-3.0, 3.0);
                    const double tol = 1e-12 * std::max(1.0, std::abs(f.eval(x)));
                    if (f.parity() == Parity::Odd && std::abs(f.eval(-x) + f.eval(x)) > tol) return fail(name + " not odd");
                    if (f.parity() == Parity::Even && std::abs(f.eval(-x) - f.eval(x)) > tol) return fail(name + " not even");
                  }
                  return {};
                }});
  ps.push_back({"transforms", "power_preserves_variance", [](RngStream& rng) -> Result {
                  const double sigma = rng.uniform(0.3, 3.0);
                  const auto f = power_transform(3.0, {0.0, sigma});
                  const double v = gauss_hermite_expectation([&](double t) { return f.eval(t) * f.eval(t); }, 0.0, sigma);
                  if (std::abs(v - sigma * sigma) > 1e-8 * sigma * sigma) return fail(fmt::format("sigma={} E f^2={}", sigma, v));
                  return {};
                }});

  // exactcov
  ps.push_back({"exactcov", "series_matches_oracle", [](RngStream& rng) -> Result {
                  const auto names = series_builtins();
                  const auto fi = builtin(names[rng.index(names.size())]);
                  const auto fj = builtin(names[rng.index(names.size())]);
                  const double sii = rng.uniform(0.3, 1.5), sjj = rng.uniform(0.3, 1.5);
                  const double sij = rng.uniform(-0.9, 0.9) * std::sqrt(sii * sjj);
                  const double series = exact_tau(fi, fj, sii, sjj, sij);
                  const double oracle = quadrature_oracle(fi, fj, sii, sjj, sij);
                  if (std::abs(series - oracle) > 1e-8 * (1 + std::abs(oracle)))
                    return fail(fmt::format("{}/{}: {} vs {}", fi.id(), fj.id(), series, oracle));
                  return {};
                }});
  ps.push_back({"exactcov", "kappa_dominates_lambda", [](RngStream& rng) -> Result {
                  const auto names = series_builtins();
                  const auto f = builtin(names[rng.index(names.size())]);
                  const double k = kappa_of(f), l = lambda_of(f);
                  if (k < l * l * (1 - 1e-12)) return fail(fmt::format("{}: kappa {} < lambda^2 {}", f.id(), k, l * l));
                  return {};
                }});
  ps.push_back({"exactcov", "tau_symmetric", [](RngStream& rng) -> Result {
                  const auto names = series_builtins();
                  const auto fi = builtin(names[rng.index(names.size())]);
                  const auto fj = builtin(names[rng.index(names.size())]);
                  const double sii = rng.uniform(0.3, 1.5), sjj = rng.uniform(0.3, 1.5);
                  const double sij = rng.uniform(-0.95, 0.95) * std::sqrt(sii * sjj);
                  const double a = exact_tau(fi, fj, sii, sjj, sij), b = exact_tau(fj, fi, sjj, sii, sij);
                  if (std::abs(a - b) > 1e-13 * (1 + std::abs(a))) return fail(fmt::format("{} vs {}", a, b));
                  return {};
                }});

  // learner
  ps.push_back({"learner", "affine_rescaling_invariant", [](RngStream& rng) -> Result {
                  auto p = random_problem(rng, draw_dim(rng, 4, 8), 3000, "cube");
                  SampleBatch w = p.z;
                  for (Eigen::Index j = 0; j < w.cols(); ++j) {
                    const double a = std::exp(rng.uniform(-2.0, 2.0)), b = rng.uniform(-5.0, 5.0);
                    w.col(j) = (w.col(j).array() * a + b).matrix();
                  }
                  LearnOptions o;
                  o.strict = false;
                  GraphStructure g1(p.z.cols()), g2(p.z.cols());
                  const auto k1 = learn_outcome(p.z, o, &g1), k2 = learn_outcome(w, o, &g2);
                  if (k1 != k2) return fail(k1 + " vs " + k2);
                  if (!(g1 == g2)) return fail("graphs differ after rescaling");
                  return {};
                }});
  ps.push_back({"learner", "permutation_equivariant", [](RngStream& rng) -> Result {
                  const std::size_t d = draw_dim(rng, 4, 8);
                  auto p = random_problem(rng, d, 3000, "sin");
                  std::vector<std::size_t> perm(d);
                  std::iota(perm.begin(), perm.end(), 0);
                  std::shuffle(perm.begin(), perm.end(), rng.engine());
                  SampleBatch w(p.z.rows(), p.z.cols());
                  for (std::size_t j = 0; j < d; ++j) w.col(static_cast<Eigen::Index>(perm[j])) = p.z.col(static_cast<Eigen::Index>(j));
                  LearnOptions o;
                  o.strict = false;
                  GraphStructure g1(d), g2(d);
                  const auto k1 = learn_outcome(p.z, o, &g1), k2 = learn_outcome(w, o, &g2);
                  if (k1 != k2) return fail(k1 + " vs " + k2);
                  if (!(g1.permuted(perm) == g2)) return fail("edge set not permuted");
                  return {};
                }});
  ps.push_back({"learner", "survivors_exceed_threshold", [](RngStream& rng) -> Result {
                  auto p = random_problem(rng, draw_dim(rng, 3, 10), 2000, "cube");
                  LearnOptions o;
                  o.strict = false;
                  try {
                    const auto r = learn(p.z, o);
                    for (const Edge& e : r.graph.edges())
                      if (!(std::abs(r.gamma_thresholded(e.lo, e.hi)) > r.knee.threshold)) return fail("survivor <= t");
                    if (!(GraphStructure::from_support(r.gamma_thresholded) == r.graph)) return fail("graph mismatch");
                  } catch (const Error& e) {
                    if (e.kind() != ErrorKind::NoKnee) throw;
                  }
                  return {};
                }});
  ps.push_back({"learner", "kneedle_affine_invariant", [](RngStream& rng) -> Result {
                  const std::size_t n = draw_dim(rng, 3, 40);
                  std::vector<double> v(n);
                  for (double& x : v) x = std::abs(rng.standard_normal()) * (rng.bernoulli(0.3) ? 1e-3 : 1.0);
                  std::sort(v.rbegin(), v.rend());
                  if (v.front() == v.back()) return {};
                  const double a = std::exp(rng.uniform(-3.0, 3.0)), b = rng.uniform(-2.0, 2.0);
                  std::vector<double> w;
                  for (double x : v) w.push_back(a * x + b);
                  std::string r1, r2;
                  try { r1 = std::to_string(kneedle(v).index); } catch (const Error& e) { r1 = to_string(e.kind()); }
                  try { r2 = std::to_string(kneedle(w).index); } catch (const Error& e) { r2 = to_string(e.kind()); }
                  if (r1 != r2) return fail(r1 + " vs " + r2);
                  return {};
                }});
  ps.push_back({"learner", "strict_never_inapplicable", [](RngStream& rng) -> Result {
                  const std::size_t d = draw_dim(rng, 3, 10);
                  ErConfig cfg;
                  cfg.enforce_b_norm = false;
                  const auto m = gen_erdos_renyi(d, rng, cfg);
                  const auto z = apply_transforms(sample_gaussian(m, 1000, rng), std::vector<TransformSpec>(d, builtin("cube")));
                  try {
                    if (!learn(z).applicable) return fail("strict learn returned applicable=false");
                  } catch (const Error& e) {
                    if (e.kind() != ErrorKind::ApplicabilityFailed && e.kind() != ErrorKind::NoKnee) throw;
                  }
                  return {};
                }});

  // expcli
  ps.push_back({"expcli", "score_self_perfect", [](RngStream& rng) -> Result {
                  const auto g = gen_erdos_renyi(draw_dim(rng, 2, 15), rng).edges;
                  const auto m = score(g, g);
                  if (m.accuracy != 1.0 || m.recall != 1.0 || m.precision != 1.0) return fail("imperfect self score");
                  return {};
                }});
  ps.push_back({"expcli", "score_counts", [](RngStream& rng) -> Result {
                  const std::size_t d = draw_dim(rng, 2, 15);
                  const auto t = gen_erdos_renyi(d, rng).edges, l = gen_erdos_renyi(d, rng).edges;
                  const auto m = score(t, l);
                  if (m.tp + m.fn != t.edge_count()) return fail("tp + fn != |truth|");
                  if (m.tp + m.fp + m.tn + m.fn != d * (d - 1) / 2) return fail("counts do not cover all pairs");
                  return {};
                }});
  ps.push_back({"expcli", "aggregates_recompute", [](RngStream& rng) -> Result {
                  auto cfg = ExperimentConfig::defaults(ExperimentMode::ErdosRenyi);
                  cfg.dim = draw_dim(rng, 4, 8);
                  cfg.n_samples = 1500;
                  cfg.n_trials = 3;
                  cfg.seed = rng.engine()();
                  const auto rep = run_experiment(cfg);
                  double sum = 0.0, sq = 0.0;
                  std::size_t n = 0;
                  for (const auto& r : rep.rows)
                    if (r.ok) sum += r.metrics.precision, ++n;
                  if (n == 0) return {};
                  const double mean = sum / static_cast<double>(n);
                  for (const auto& r : rep.rows)
                    if (r.ok) sq += (r.metrics.precision - mean) * (r.metrics.precision - mean);
                  const double sd = std::sqrt(sq / static_cast<double>(n));
                  if (std::abs(mean - rep.groups[0].precision_mean) > 1e-12 || std::abs(sd - rep.groups[0].precision_std) > 1e-12)
                    return fail("aggregate mismatch");
                  return {};
                }});
  ps.push_back({"expcli", "parallel_runs_bitwise_identical", [](RngStream& rng) -> Result {
                  auto cfg = ExperimentConfig::defaults(ExperimentMode::ErdosRenyi);
                  cfg.dim = 6;
                  cfg.n_samples = 800;
                  cfg.n_trials = 4;
                  cfg.seed = rng.engine()();
                  const std::string a = to_json(run_experiment(cfg)).dump();
                  const std::string b = to_json(run_experiment(cfg)).dump();
                  cfg.threads = 4;
                  const std::string c = to_json(run_experiment(cfg)).dump();
                  if (a != b) return fail("repeated run differs");
                  if (a != c) return fail("parallel run differs");
                  return {};
                }});
  return ps;
}

}  // namespace

const std::vector<Property>& all_properties() {
  static const std::vector<Property> ps = build();
  return ps;
}

Outcome run_property(const Property& p, std::size_t index, std::uint64_t seed, std::size_t cases) {
  Outcome out{p.module, p.name, cases, 0, {}};
  for (std::size_t k = 0; k < cases; ++k) {
    RngStream rng(seed, trial_stream(index, k));
    Result r;
    try {
      r = p.check(rng);
    } catch (const std::exception& e) {
      r = std::string("unexpected error: ") + e.what();
    }
    if (r) {
      if (out.failures == 0) out.first_failure = fmt::format("case {}: {}", k, *r);
      ++out.failures;
    }
  }
  return out;
}

}  // namespace gnpn::props
