#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gnpn/graphgen.hpp"
#include "gnpn/learner.hpp"
#include "gnpn/metrics.hpp"
#include "gnpn/transforms.hpp"

namespace gnpn {

enum class ExperimentMode { ErdosRenyi, GaltonWatson, ApplicabilityStudy, ApplicabilityProportion, SampleEfficiency };
enum class Profile { Desk, Full };

std::string to_string(ExperimentMode m);
ExperimentMode parse_mode(const std::string& s);
Profile parse_profile(const std::string& s);

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::ErdosRenyi;
  std::size_t dim = 10;
  std::size_t n_samples = 50'000;
  std::size_t n_trials = 200;
  TransformConfig transform;
  std::uint64_t seed = 0;
  bool enforce_b_norm = true;  // forced off in applicability modes
  WeightConfig weights;
  double p_min = 0.1, p_max = 0.8;  // Erdos-Renyi
  double gw_lambda = 2.0;           // Galton-Watson
  std::size_t max_regenerations = 1000;
  LearnOptions learn;
  std::vector<std::size_t> dims;       // applicability_proportion sweep
  std::vector<std::size_t> n_grid;     // sample_efficiency sweep
  std::size_t threads = 1;

  /// Defaults for a mode at desk or full scale.
  static ExperimentConfig defaults(ExperimentMode mode, Profile profile = Profile::Desk);
  /// Throws InvalidArgument on inconsistent settings.
  void validate() const;
};

/// One trial slot. `group` indexes the sweep point (0 when there is none).
struct TrialRow {
  std::size_t group = 0;
  std::size_t trial = 0;
  std::size_t dim = 0;
  std::size_t n_samples = 0;
  bool ok = false;
  std::string failure;  // error kind when !ok
  std::size_t generations = 0;
  double b_norm = 0.0;
  double applicability_norm = 0.0;
  bool applicable = false;  // ||R - I|| < 1 (and ||B|| < 1 in the proportion sweep)
  bool false_pass = false;  // ||B|| >= 1 although the check passed
  bool scored = false;  // learn + score ran
  double threshold = 0.0;
  MetricsReport metrics;
};

struct GroupSummary {
  std::size_t group = 0;
  std::size_t dim = 0;
  std::size_t n_samples = 0;
  std::size_t trials = 0;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  // Population mean/std over scored trials, in [0, 1].
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double recall_mean = 0.0, recall_std = 0.0;
  double precision_mean = 0.0, precision_std = 0.0;
  double false_pass_rate = 0.0;        // applicability_study
  double applicable_proportion = 0.0;  // applicability_proportion
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRow> rows;  // ordered by (group, trial)
  std::vector<GroupSummary> groups;
};

/// Dispatches on cfg.mode.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

ExperimentReport run_table_experiment(const ExperimentConfig& cfg);
ExperimentReport run_applicability_study(const ExperimentConfig& cfg);
ExperimentReport run_applicability_proportion(const ExperimentConfig& cfg);
ExperimentReport run_sample_efficiency(const ExperimentConfig& cfg);

/// Folds rows of one group into a summary, in trial order.
GroupSummary summarize(std::size_t group, const std::vector<TrialRow>& rows);

/// Stream id of a trial slot.
constexpr std::uint64_t trial_stream(std::size_t group, std::size_t trial) {
  return (static_cast<std::uint64_t>(group) << 32) | static_cast<std::uint64_t>(trial);
}

}  // namespace gnpn
