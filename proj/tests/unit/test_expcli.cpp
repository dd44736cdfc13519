#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gnpn/error.hpp"
#include "gnpn/experiment.hpp"
#include "gnpn/io.hpp"
#include "gnpn/learner.hpp"
#include "gnpn/metrics.hpp"
#include "gnpn/sampling.hpp"

using namespace gnpn;

namespace {

GraphStructure cycle8() { return make_precision_model(circle_precision(8, 1.0 / 22.0)).edges; }

}  // namespace

TEST(Score, IdenticalGraphs) {
  const auto m = score(cycle8(), cycle8());
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.tp + m.fp + m.tn + m.fn, 28u);
}

TEST(Score, OneMissingEdge) {
  auto edges = cycle8().edges();
  edges.pop_back();
  const auto m = score(cycle8(), GraphStructure(8, edges));
  EXPECT_DOUBLE_EQ(m.accuracy, 27.0 / 28.0);
  EXPECT_DOUBLE_EQ(m.recall, 7.0 / 8.0);
  EXPECT_EQ(m.precision, 1.0);
}

TEST(Score, EmptyGraphsUseConvention) {
  const auto m = score(GraphStructure(5), GraphStructure(5));
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_TRUE(m.recall_undefined);
  EXPECT_TRUE(m.precision_undefined);
}

TEST(Score, DimensionMismatch) { EXPECT_THROW(score(GraphStructure(4), GraphStructure(5)), Error); }

TEST(SampleGaussian, CovarianceMatches) {
  const auto m = make_precision_model(circle_precision(8, 1.0 / 22.0));
  RngStream rng(4, 0);
  const auto x = sample_gaussian(m, 100'000, rng);
  const auto c = empirical_covariance(x);
  EXPECT_LT(max_abs_diff(c.dense(), invert_spd(m.gamma_rho).dense()), 0.02);
}

TEST(SampleGaussian, ShapeAndDeterminism) {
  const auto m = make_precision_model(circle_precision(5, 0.2));
  RngStream a(9, 1), b(9, 1);
  const auto xa = sample_gaussian(m, 1, a);
  EXPECT_EQ(xa.rows(), 1);
  EXPECT_EQ(xa.cols(), 5);
  EXPECT_EQ(xa, sample_gaussian(m, 1, b));
}

TEST(Experiment, IdentityTransformIsAccurate) {
  auto cfg = ExperimentConfig::defaults(ExperimentMode::ErdosRenyi);
  cfg.transform.name = "identity";
  cfg.n_trials = 20;
  cfg.seed = 1;
  const auto rep = run_experiment(cfg);
  ASSERT_EQ(rep.groups.size(), 1u);
  EXPECT_GE(rep.groups[0].accuracy_mean, 0.99);
}

TEST(Experiment, ReproducibleAcrossThreads) {
  auto cfg = ExperimentConfig::defaults(ExperimentMode::ErdosRenyi);
  cfg.n_trials = 6;
  cfg.n_samples = 2000;
  cfg.seed = 3;
  const std::string a = to_json(run_experiment(cfg)).dump();
  cfg.threads = 3;
  const std::string b = to_json(run_experiment(cfg)).dump();
  EXPECT_EQ(a, b);
}

TEST(Experiment, AggregatesRecomputeFromRows) {
  auto cfg = ExperimentConfig::defaults(ExperimentMode::ErdosRenyi);
  cfg.n_trials = 10;
  cfg.n_samples = 5000;
  const auto rep = run_experiment(cfg);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rep.rows)
    if (r.ok) sum += r.metrics.accuracy, ++n;
  ASSERT_GT(n, 0u);
  EXPECT_NEAR(rep.groups[0].accuracy_mean, sum / static_cast<double>(n), 1e-12);
}

TEST(Experiment, ProportionNearOneForTinyProblems) {
  auto cfg = ExperimentConfig::defaults(ExperimentMode::ApplicabilityProportion);
  cfg.dims = {2};
  cfg.n_trials = 50;
  cfg.n_samples = 5000;
  cfg.transform.name = "identity";
  const auto rep = run_experiment(cfg);
  EXPECT_GE(rep.groups[0].applicable_proportion, 0.95);
}

TEST(Experiment, GaltonWatsonAndSweeps) {
  auto gw = ExperimentConfig::defaults(ExperimentMode::GaltonWatson);
  gw.n_trials = 3;
  gw.n_samples = 3000;
  EXPECT_EQ(run_experiment(gw).rows.size(), 3u);
  auto eff = ExperimentConfig::defaults(ExperimentMode::SampleEfficiency);
  eff.n_trials = 2;
  eff.n_grid = {200, 400};
  const auto rep = run_experiment(eff);
  ASSERT_EQ(rep.groups.size(), 2u);
  EXPECT_EQ(rep.groups[1].n_samples, 400u);
}

TEST(Experiment, InvalidConfig) {
  auto cfg = ExperimentConfig::defaults(ExperimentMode::ErdosRenyi);
  cfg.n_samples = 5;
  EXPECT_THROW(run_experiment(cfg), Error);
}

TEST(Io, MatrixRoundTripAndSymmetrize) {
  const auto g = circle_precision(4, 0.25);
  EXPECT_EQ(matrix_from_json(to_json(g)), g);
  Json j = to_json(g);
  j["rows"][0][1] = 0.25 + 1e-12;
  EXPECT_NEAR(matrix_from_json(j)(0, 1), 0.25, 1e-12);
  j["rows"][0][1] = 0.5;
  EXPECT_THROW(matrix_from_json(j), Error);
}

TEST(Io, GraphRoundTrip) {
  const auto g = cycle8();
  const Json j = to_json(g);
  EXPECT_EQ(j["edges"][0], Json::array({0, 1}));
  EXPECT_EQ(graph_from_json(j), g);
}

TEST(Io, SamplesCsv) {
  std::istringstream in("a, b\n1,2\n\n3.5,-4e-1\n");
  const auto s = read_samples_csv(in);
  ASSERT_EQ(s.names.size(), 2u);
  EXPECT_EQ(s.names[1], "b");
  EXPECT_EQ(s.batch.rows(), 2);
  EXPECT_EQ(s.batch(1, 1), -0.4);
  std::ostringstream out;
  write_samples_csv(out, s);
  std::istringstream back(out.str());
  EXPECT_EQ(read_samples_csv(back).batch, s.batch);
  std::istringstream bad("a,b\n1,x\n");
  EXPECT_THROW(read_samples_csv(bad), Error);
}

TEST(Io, ExperimentConfigKeys) {
  const auto c = experiment_config_from_json(
      Json{{"mode", "applicability_study"}, {"transform", {{"name", "mixed"}, {"pool", {"sin", "cos"}}}}, {"n_trials", 7}});
  EXPECT_EQ(c.mode, ExperimentMode::ApplicabilityStudy);
  EXPECT_FALSE(c.enforce_b_norm);
  EXPECT_EQ(c.n_trials, 7u);
  EXPECT_EQ(c.transform.pool.size(), 2u);
  EXPECT_THROW(experiment_config_from_json(Json{{"bogus", 1}}), Error);
  EXPECT_THROW(experiment_config_from_json(Json{{"transform", "tanh"}}), Error);
}

namespace {

gnpn::GroupSummary sweep_point(const std::string& transform, std::size_t n, std::uint64_t seed,
                               std::size_t trials = 40) {
  auto cfg = gnpn::ExperimentConfig::defaults(gnpn::ExperimentMode::SampleEfficiency);
  cfg.transform.name = transform;
  cfg.n_grid = {n};
  cfg.n_trials = trials;
  cfg.seed = seed;
  return gnpn::run_experiment(cfg).groups.at(0);
}

}  // namespace

TEST(SampleEfficiency, CubeAtThreeThousand) {
  const auto g = sweep_point("cube", 3000, 31, 500);
  EXPECT_GE(g.accuracy_mean, 0.95);
  EXPECT_GE(g.recall_mean, 0.95);
}

TEST(SampleEfficiency, SquareAtSixThousand) {
  const auto g = sweep_point("square", 6000, 32);
  EXPECT_GT(g.accuracy_mean, 0.90);
  EXPECT_GT(g.precision_mean, 0.85);
}

TEST(SampleEfficiency, MoreSamplesDoNotHurt) {
  for (const std::string t : {"cube", "sin", "square"}) {
    const auto lo = sweep_point(t, 100, 33), hi = sweep_point(t, 10'000, 33);
    EXPECT_GE(hi.accuracy_mean, lo.accuracy_mean - 0.02) << t;
    EXPECT_GE(hi.recall_mean, lo.recall_mean - 0.02) << t;
    EXPECT_GE(hi.precision_mean, lo.precision_mean - 0.02) << t;
  }
}
