#include "gnpn/graphgen.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "gnpn/error.hpp"

namespace gnpn {

PrecisionModel make_precision_model(const SymmetricMatrix& gamma_rho) {
  const std::size_t d = gamma_rho.dim();
  for (std::size_t i = 0; i < d; ++i) {
    if (gamma_rho(i, i) != 1.0)
      throw Error(ErrorKind::InvalidArgument, "precision diagonal must be exactly 1 (row " + std::to_string(i) + ")");
  }
  if (!is_positive_definite(gamma_rho)) throw Error(ErrorKind::NotPositiveDefinite, "precision matrix");
  const SymmetricMatrix b = gamma_rho - SymmetricMatrix::identity(d);
  return PrecisionModel{gamma_rho, spectral_norm(b), GraphStructure::from_support(gamma_rho)};
}

SymmetricMatrix circle_precision(std::size_t dim, double alpha) {
  if (dim < 3) throw Error(ErrorKind::InvalidArgument, "a cycle needs at least 3 vertices");
  SymmetricMatrix g = SymmetricMatrix::identity(dim);
  for (std::size_t i = 0; i < dim; ++i) g.set(i, (i + 1) % dim, alpha);
  return g;
}

double WeightConfig::sd() const {
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "weight scale must be positive");
  return reading == WeightScale::StdDev ? scale : std::sqrt(scale);
}

namespace {

// Returns nullopt when the candidate must be redrawn.
std::optional<PrecisionModel> accept(const SymmetricMatrix& gamma, bool enforce_b_norm) {
  if (!is_positive_definite(gamma)) return std::nullopt;
  PrecisionModel model = make_precision_model(gamma);
  if (enforce_b_norm && !(model.b_norm < 1.0)) return std::nullopt;
  return model;
}

}  // namespace

PrecisionModel gen_erdos_renyi(std::size_t dim, RngStream& rng, const ErConfig& cfg) {
  if (dim < 2) throw Error(ErrorKind::InvalidArgument, "gen_erdos_renyi: dim must be >= 2");
  if (!(cfg.p_min >= 0.0 && cfg.p_min <= cfg.p_max && cfg.p_max <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "gen_erdos_renyi: bad probability range");
  const double sd = cfg.weights.sd();

  for (std::size_t attempt = 1; attempt <= cfg.max_retries; ++attempt) {
    const double p = cfg.forced_p ? *cfg.forced_p : rng.uniform(cfg.p_min, cfg.p_max);
    SymmetricMatrix gamma = SymmetricMatrix::identity(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) {
        if (!rng.bernoulli(p)) continue;
        double w = rng.normal(0.0, sd);
        if (std::abs(w) < cfg.weights.min_abs) w = 0.0;
        gamma.set(i, j, w);
      }
    }
    if (auto model = accept(gamma, cfg.enforce_b_norm)) {
      model->edge_probability = p;
      model->attempts = attempt;
      return *model;
    }
  }
  throw Error(ErrorKind::RetriesExhausted,
              "gen_erdos_renyi: no valid precision after " + std::to_string(cfg.max_retries) + " attempts");
}

PrecisionModel gen_galton_watson(std::size_t dim, RngStream& rng, const GwConfig& cfg) {
  if (dim < 2) throw Error(ErrorKind::InvalidArgument, "gen_galton_watson: dim must be >= 2");
  if (!(cfg.lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "gen_galton_watson: lambda must be positive");
  const double sd = cfg.weights.sd();

  for (std::size_t attempt = 1; attempt <= cfg.max_retries; ++attempt) {
    SymmetricMatrix gamma = SymmetricMatrix::identity(dim);
    std::deque<std::size_t> frontier{0};
    std::size_t nodes = 1;
    while (nodes < dim && !frontier.empty()) {
      const std::size_t parent = frontier.front();
      frontier.pop_front();
      const unsigned children = rng.poisson(cfg.lambda);
      for (unsigned c = 0; c < children && nodes < dim; ++c) {
        double w = 0.0;
        do {
          w = rng.normal(0.0, sd);
        } while (std::abs(w) < cfg.weights.min_abs);
        const std::size_t child = nodes++;
        gamma.set(parent, child, w);
        frontier.push_back(child);
      }
    }
    if (nodes < dim) {
      if (!cfg.restart_on_extinction)
        throw Error(ErrorKind::DegenerateTree, "Galton-Watson process died out at " + std::to_string(nodes) + " nodes");
      continue;
    }
    if (auto model = accept(gamma, cfg.enforce_b_norm)) {
      model->attempts = attempt;
      return *model;
    }
  }
  throw Error(ErrorKind::RetriesExhausted,
              "gen_galton_watson: no valid tree after " + std::to_string(cfg.max_retries) + " attempts");
}

GraphStructure structure_of(const PrecisionModel& model) { return model.edges; }

}  // namespace gnpn
