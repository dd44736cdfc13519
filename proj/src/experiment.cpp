#include "gnpn/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "gnpn/error.hpp"
#include "gnpn/sampling.hpp"

namespace gnpn {

std::string to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::ErdosRenyi: return "erdos_renyi";
    case ExperimentMode::GaltonWatson: return "galton_watson";
    case ExperimentMode::ApplicabilityStudy: return "applicability_study";
    case ExperimentMode::ApplicabilityProportion: return "applicability_proportion";
    case ExperimentMode::SampleEfficiency: return "sample_efficiency";
  }
  return "unknown";
}

ExperimentMode parse_mode(const std::string& s) {
  for (auto m : {ExperimentMode::ErdosRenyi, ExperimentMode::GaltonWatson, ExperimentMode::ApplicabilityStudy,
                 ExperimentMode::ApplicabilityProportion, ExperimentMode::SampleEfficiency})
    if (to_string(m) == s) return m;
  throw Error(ErrorKind::InvalidArgument, "unknown experiment mode '" + s + "'");
}

Profile parse_profile(const std::string& s) {
  if (s == "desk") return Profile::Desk;
  if (s == "full") return Profile::Full;
  throw Error(ErrorKind::InvalidArgument, "unknown profile '" + s + "'");
}

ExperimentConfig ExperimentConfig::defaults(ExperimentMode mode, Profile profile) {
  const bool full = profile == Profile::Full;
  ExperimentConfig cfg;
  cfg.mode = mode;
  switch (mode) {
    case ExperimentMode::ErdosRenyi:
    case ExperimentMode::GaltonWatson:
      cfg.n_trials = full ? 1000 : 200;
      break;
    case ExperimentMode::ApplicabilityStudy:
      cfg.n_trials = full ? 1000 : 500;
      cfg.enforce_b_norm = false;
      break;
    case ExperimentMode::ApplicabilityProportion:
      cfg.n_trials = full ? 1000 : 200;
      cfg.enforce_b_norm = false;
      cfg.dims = {5, 10, 15, 20};
      break;
    case ExperimentMode::SampleEfficiency:
      cfg.n_trials = full ? 500 : 100;
      cfg.n_grid = {100, 500, 1000, 3000, 6000, 10'000};
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, "experiment config: " + msg); };
  if (n_trials < 1) fail("n_trials must be >= 1");
  if (threads < 1) fail("threads must be >= 1");
  if (max_regenerations < 1) fail("max_regenerations must be >= 1");
  if (dim < 2) fail("dim must be >= 2");
  if (mode == ExperimentMode::ApplicabilityProportion) {
    if (dims.empty()) fail("dims sweep is empty");
    for (std::size_t d : dims) {
      if (d < 2) fail("dims entries must be >= 2");
      if (n_samples < d + 1) fail("n_samples must be >= dim + 1");
    }
  } else if (mode == ExperimentMode::SampleEfficiency) {
    if (n_grid.empty()) fail("n_grid sweep is empty");
    for (std::size_t n : n_grid)
      if (n < dim + 1) fail("n_grid entries must be >= dim + 1");
  } else if (n_samples < dim + 1) {
    fail("n_samples must be >= dim + 1");
  }
}

namespace {

struct SweepPoint {
  std::size_t dim;
  std::size_t n;
};

PrecisionModel generate(const ExperimentConfig& cfg, std::size_t dim, RngStream& rng) {
  if (cfg.mode == ExperimentMode::GaltonWatson) {
    GwConfig gw;
    gw.lambda = cfg.gw_lambda;
    gw.weights = cfg.weights;
    gw.enforce_b_norm = cfg.enforce_b_norm;
    return gen_galton_watson(dim, rng, gw);
  }
  ErConfig er;
  er.p_min = cfg.p_min;
  er.p_max = cfg.p_max;
  er.weights = cfg.weights;
  er.enforce_b_norm = cfg.enforce_b_norm;
  return gen_erdos_renyi(dim, rng, er);
}

SampleBatch draw_transformed(const PrecisionModel& model, std::size_t n, const TransformConfig& tc, RngStream& rng) {
  const SymmetricMatrix sigma = invert_spd(model.gamma_rho);
  const std::vector<TransformSpec> specs = resolve_transforms(tc, marginals_of(sigma), rng);
  return apply_transforms(sample_gaussian(sigma, n, rng), specs);
}

// Generate, check, and on a pass learn and score. A failed check sends the
// slot back to generation, up to max_regenerations times.
TrialRow learning_trial(const ExperimentConfig& cfg, std::size_t group, std::size_t trial, SweepPoint pt) {
  TrialRow row;
  row.group = group;
  row.trial = trial;
  row.dim = pt.dim;
  row.n_samples = pt.n;
  RngStream rng(cfg.seed, trial_stream(group, trial));
  LearnOptions opts = cfg.learn;
  opts.strict = true;
  try {
    for (std::size_t gen = 1; gen <= cfg.max_regenerations; ++gen) {
      row.generations = gen;
      const PrecisionModel model = generate(cfg, pt.dim, rng);
      const SampleBatch z = draw_transformed(model, pt.n, cfg.transform, rng);
      row.b_norm = model.b_norm;
      const Applicability app = applicability_check(empirical_correlation(z));
      row.applicability_norm = app.norm;
      if (!app.applicable) continue;
      row.applicable = true;
      row.false_pass = !(model.b_norm < 1.0);
      const LearnResult res = learn(z, opts);
      row.threshold = res.knee.threshold;
      row.metrics = score(model.edges, res.graph);
      row.scored = true;
      row.ok = true;
      return row;
    }
    row.failure = "RegenerationsExhausted";
  } catch (const Error& e) {
    row.failure = std::string(to_string(e.kind()));
  }
  return row;
}

// One draw, no retry: does the pipeline apply at all?
TrialRow proportion_trial(const ExperimentConfig& cfg, std::size_t group, std::size_t trial, SweepPoint pt) {
  TrialRow row;
  row.group = group;
  row.trial = trial;
  row.dim = pt.dim;
  row.n_samples = pt.n;
  row.generations = 1;
  RngStream rng(cfg.seed, trial_stream(group, trial));
  try {
    const PrecisionModel model = generate(cfg, pt.dim, rng);
    const SampleBatch z = draw_transformed(model, pt.n, cfg.transform, rng);
    const Applicability app = applicability_check(empirical_correlation(z));
    row.b_norm = model.b_norm;
    row.applicability_norm = app.norm;
    row.applicable = model.b_norm < 1.0 && app.applicable;
    row.ok = true;
  } catch (const Error& e) {
    row.failure = std::string(to_string(e.kind()));
  }
  return row;
}

template <class Fn>
std::vector<TrialRow> run_slots(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points, Fn trial_fn) {
  const std::size_t per_group = cfg.n_trials;
  const std::size_t total = points.size() * per_group;
  std::vector<TrialRow> rows(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t g = k / per_group, t = k % per_group;
      try {
        rows[k] = trial_fn(cfg, g, t, points[g]);
      } catch (...) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(cfg.threads, std::max<std::size_t>(total, 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);
  return rows;
}

ExperimentReport assemble(const ExperimentConfig& cfg, std::size_t n_groups, std::vector<TrialRow> rows) {
  ExperimentReport report{cfg, std::move(rows), {}};
  for (std::size_t g = 0; g < n_groups; ++g) {
    std::vector<TrialRow> group_rows(report.rows.begin() + static_cast<std::ptrdiff_t>(g * cfg.n_trials),
                                     report.rows.begin() + static_cast<std::ptrdiff_t>((g + 1) * cfg.n_trials));
    report.groups.push_back(summarize(g, group_rows));
  }
  return report;
}

}  // namespace

GroupSummary summarize(std::size_t group, const std::vector<TrialRow>& rows) {
  GroupSummary s;
  s.group = group;
  s.trials = rows.size();
  if (!rows.empty()) {
    s.dim = rows.front().dim;
    s.n_samples = rows.front().n_samples;
  }
  double acc = 0.0, rec = 0.0, prec = 0.0;
  std::size_t checked = 0, false_pass = 0, applicable = 0, scored = 0;
  for (const TrialRow& r : rows) {
    if (r.applicable) {
      ++checked;
      if (r.false_pass) ++false_pass;
    }
    if (!r.ok) {
      ++s.failed;
      continue;
    }
    ++s.succeeded;
    if (r.applicable) ++applicable;
    if (!r.scored) continue;
    ++scored;
    acc += r.metrics.accuracy;
    rec += r.metrics.recall;
    prec += r.metrics.precision;
  }
  if (s.succeeded > 0) s.applicable_proportion = static_cast<double>(applicable) / static_cast<double>(s.succeeded);
  if (scored > 0) {
    const auto n = static_cast<double>(scored);
    s.accuracy_mean = acc / n;
    s.recall_mean = rec / n;
    s.precision_mean = prec / n;
    double va = 0.0, vr = 0.0, vp = 0.0;
    for (const TrialRow& r : rows) {
      if (!r.ok || !r.scored) continue;
      va += (r.metrics.accuracy - s.accuracy_mean) * (r.metrics.accuracy - s.accuracy_mean);
      vr += (r.metrics.recall - s.recall_mean) * (r.metrics.recall - s.recall_mean);
      vp += (r.metrics.precision - s.precision_mean) * (r.metrics.precision - s.precision_mean);
    }
    s.accuracy_std = std::sqrt(va / n);
    s.recall_std = std::sqrt(vr / n);
    s.precision_std = std::sqrt(vp / n);
  }
  s.false_pass_rate = checked == 0 ? 0.0 : static_cast<double>(false_pass) / static_cast<double>(checked);
  return s;
}

ExperimentReport run_table_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  return assemble(cfg, 1, run_slots(cfg, {{cfg.dim, cfg.n_samples}}, learning_trial));
}

ExperimentReport run_applicability_study(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.mode = ExperimentMode::ApplicabilityStudy;
  c.enforce_b_norm = false;
  c.validate();
  return assemble(c, 1, run_slots(c, {{c.dim, c.n_samples}}, learning_trial));
}

ExperimentReport run_applicability_proportion(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.mode = ExperimentMode::ApplicabilityProportion;
  c.enforce_b_norm = false;
  c.validate();
  std::vector<SweepPoint> points;
  for (std::size_t d : c.dims) points.push_back({d, c.n_samples});
  return assemble(c, points.size(), run_slots(c, points, proportion_trial));
}

ExperimentReport run_sample_efficiency(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.mode = ExperimentMode::SampleEfficiency;
  c.validate();
  std::vector<SweepPoint> points;
  for (std::size_t n : c.n_grid) points.push_back({c.dim, n});
  return assemble(c, points.size(), run_slots(c, points, learning_trial));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case ExperimentMode::ErdosRenyi:
    case ExperimentMode::GaltonWatson: return run_table_experiment(cfg);
    case ExperimentMode::ApplicabilityStudy: return run_applicability_study(cfg);
    case ExperimentMode::ApplicabilityProportion: return run_applicability_proportion(cfg);
    case ExperimentMode::SampleEfficiency: return run_sample_efficiency(cfg);
  }
  throw Error(ErrorKind::InvalidArgument, "experiment mode");
}

}  // namespace gnpn
