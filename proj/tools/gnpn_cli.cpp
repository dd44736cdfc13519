// gnpn command line: graph generation, sampling, exact covariance, structure
// learning, experiments and scoring.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gnpn/error.hpp"
#include "gnpn/exactcov.hpp"
#include "gnpn/experiment.hpp"
#include "gnpn/graphgen.hpp"
#include "gnpn/io.hpp"
#include "gnpn/learner.hpp"
#include "gnpn/metrics.hpp"
#include "gnpn/sampling.hpp"
#include "gnpn/transforms.hpp"

namespace {

using namespace gnpn;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

// "cube", "mixed:sin,cos" or a JSON file via --transform-config.
TransformConfig transform_from_flags(const std::string& name, const std::string& config_path) {
  if (!config_path.empty()) return transform_config_from_json(read_json_file(config_path));
  const auto colon = name.find(':');
  if (colon == std::string::npos) return transform_config_from_json(Json(name));
  Json j{{"name", name.substr(0, colon)}, {"pool", Json::array()}};
  std::stringstream ss(name.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) j["pool"].push_back(item);
  return transform_config_from_json(j);
}

NamedSamples read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  return read_samples_csv(in);
}

std::string samples_text(const NamedSamples& s) {
  std::ostringstream os;
  write_samples_csv(os, s);
  return os.str();
}

std::vector<std::string> default_names(std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back(fmt::format("x{}", j));
  return names;
}

GraphStructure graph_of_file(const std::string& path) {
  const Json j = read_json_file(path);
  if (j.contains("graph")) return graph_from_json(j.at("graph"));       // learn result
  if (j.contains("gamma_rho")) return model_from_json(j).edges;         // model
  if (j.contains("rows")) return GraphStructure::from_support(matrix_from_json(j));
  return graph_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized nonparanormal structure learning"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string out;
  app.add_option("--seed", seed, "RNG seed")->capture_default_str();
  app.add_option("--out", out, "output path (stdout if omitted)");

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "random or circle precision model");
  std::string kind = "er", weight_reading = "std";
  std::size_t dim = 10;
  double alpha = 1.0 / 22.0, lambda = 2.0, weight_scale = 0.3;
  std::optional<double> forced_p;
  bool no_bnorm = false;
  gen->add_option("--kind", kind, "er | gw | circle")->check(CLI::IsMember({"er", "gw", "circle"}))->capture_default_str();
  gen->add_option("--dim", dim)->capture_default_str();
  gen->add_option("--alpha", alpha, "circle edge weight")->capture_default_str();
  gen->add_option("--lambda", lambda, "Galton-Watson offspring mean")->capture_default_str();
  gen->add_option("--p", forced_p, "fixed Erdos-Renyi edge probability");
  gen->add_option("--weight-scale", weight_scale)->capture_default_str();
  gen->add_option("--weight-reading", weight_reading)->check(CLI::IsMember({"std", "variance"}))->capture_default_str();
  gen->add_flag("--no-bnorm", no_bnorm, "do not reject ||B|| >= 1");
  gen->add_option("--stream", stream)->capture_default_str();

  // sample
  auto* sample = app.add_subcommand("sample", "draw Gaussian (optionally transformed) samples from a model");
  std::string model_path, transform_name, transform_config;
  std::size_t n = 1000;
  sample->add_option("--model", model_path, "model or matrix JSON")->required();
  sample->add_option("-n,--n", n)->capture_default_str();
  sample->add_option("--transform", transform_name, "builtin name or mixed:a,b");
  sample->add_option("--transform-config", transform_config, "transform JSON");
  sample->add_option("--stream", stream)->capture_default_str();

  // transform
  auto* transform = app.add_subcommand("transform", "apply a transform to every column of a CSV");
  std::string input;
  transform->add_option("--input", input)->required();
  transform->add_option("--transform", transform_name)->required();
  transform->add_option("--stream", stream)->capture_default_str();

  // exact-cov
  auto* exact = app.add_subcommand("exact-cov", "exact transformed covariance and first-order predictions");
  exact->add_option("--model", model_path, "model or matrix JSON")->required();
  exact->add_option("--transform", transform_name, "builtin name or mixed:a,b");
  exact->add_option("--transform-config", transform_config, "transform JSON");
  exact->add_option("--stream", stream)->capture_default_str();

  // learn
  auto* learn_cmd = app.add_subcommand("learn", "estimate the conditional-independence graph from samples");
  std::optional<double> threshold;
  double sensitivity = 1.0;
  bool offline = false;
  std::string scale = "correlation", csv_path;
  auto* strict_flag = learn_cmd->add_flag("--strict", "stop if ||R - I|| >= 1 (default)");
  auto* permissive_flag = learn_cmd->add_flag("--permissive", "continue when the check fails");
  strict_flag->excludes(permissive_flag);
  learn_cmd->add_option("--input", input, "samples CSV with a header row")->required();
  learn_cmd->add_option("--threshold", threshold, "fixed threshold, skips knee detection");
  learn_cmd->add_option("--sensitivity", sensitivity)->capture_default_str();
  learn_cmd->add_flag("--offline", offline, "first knee instead of last");
  learn_cmd->add_option("--scale", scale)->check(CLI::IsMember({"correlation", "covariance"}))->capture_default_str();
  learn_cmd->add_option("--csv", csv_path, "sorted |gamma| triangle as CSV");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a simulation study");
  std::string config_path, mode, profile = "desk";
  std::optional<std::size_t> trials, exp_n, exp_dim;
  std::size_t threads = 1;
  exp->add_option("--config", config_path, "experiment JSON");
  exp->add_option("--mode", mode,
                  "erdos_renyi | galton_watson | applicability_study | applicability_proportion | sample_efficiency");
  exp->add_option("--profile", profile)->check(CLI::IsMember({"desk", "full"}))->capture_default_str();
  exp->add_option("--transform", transform_name, "builtin name or mixed:a,b");
  exp->add_option("--trials", trials);
  exp->add_option("-n,--n", exp_n);
  exp->add_option("--dim", exp_dim);
  exp->add_option("--threads", threads)->capture_default_str();
  exp->add_option("--csv", csv_path, "per-trial CSV");

  // score
  auto* score_cmd = app.add_subcommand("score", "compare a learned graph to the truth");
  std::string truth_path, learned_path;
  score_cmd->add_option("--truth", truth_path, "graph, model or matrix JSON")->required();
  score_cmd->add_option("--learned", learned_path, "graph, learn result or matrix JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      RngStream rng(seed, stream);
      WeightConfig w{weight_scale, weight_reading == "std" ? WeightScale::StdDev : WeightScale::Variance, 0.1};
      PrecisionModel model = [&] {
        if (kind == "circle") return make_precision_model(circle_precision(dim, alpha));
        if (kind == "gw") return gen_galton_watson(dim, rng, GwConfig{lambda, w, !no_bnorm, true, 10'000});
        ErConfig cfg;
        cfg.forced_p = forced_p;
        cfg.weights = w;
        cfg.enforce_b_norm = !no_bnorm;
        return gen_erdos_renyi(dim, rng, cfg);
      }();
      emit(out, to_json(model).dump(2) + "\n");
    } else if (*sample) {
      RngStream rng(seed, stream);
      const PrecisionModel model = model_from_json(read_json_file(model_path));
      const SymmetricMatrix sigma = invert_spd(model.gamma_rho);
      SampleBatch x = sample_gaussian(sigma, n, rng);
      if (!transform_name.empty() || !transform_config.empty()) {
        const auto specs = resolve_transforms(transform_from_flags(transform_name, transform_config),
                                              marginals_of(sigma), rng);
        x = apply_transforms(x, specs);
      }
      emit(out, samples_text({default_names(model.gamma_rho.dim()), std::move(x)}));
    } else if (*transform) {
      RngStream rng(seed, stream);
      NamedSamples s = read_samples(input);
      // power/cdf calibrate against each column's own mean and sd
      std::vector<MarginalParams> marg;
      for (Eigen::Index j = 0; j < s.batch.cols(); ++j) {
        const double mean = s.batch.col(j).mean();
        const double var = (s.batch.col(j).array() - mean).square().sum() / static_cast<double>(s.batch.rows() - 1);
        marg.push_back({mean, std::sqrt(var)});
      }
      const auto specs = resolve_transforms(transform_from_flags(transform_name, ""), marg, rng);
      s.batch = apply_transforms(s.batch, specs);
      emit(out, samples_text(s));
    } else if (*exact) {
      RngStream rng(seed, stream);
      const PrecisionModel model = model_from_json(read_json_file(model_path));
      const SymmetricMatrix sigma = invert_spd(model.gamma_rho);
      const TransformConfig tc =
          transform_name.empty() && transform_config.empty() ? TransformConfig{} : transform_from_flags(transform_name, transform_config);
      const auto specs = resolve_transforms(tc, marginals_of(sigma), rng);
      const ExactCovResult res = exact_sigma_pi(model, specs);
      Json j{{"transform", to_json(tc)},
             {"sigma_rho", to_json(sigma)},
             {"sigma_pi", to_json(res.sigma_pi)},
             {"gamma_pi", to_json(invert_spd(res.sigma_pi))},
             {"path", res.path == CovPath::Series ? "series" : res.path == CovPath::Quadrature ? "quadrature" : "mixed"}};
      try {
        j["prediction"] = to_json(predict(model, specs));
      } catch (const Error& e) {
        j["prediction"] = nullptr;
        j["prediction_error"] = e.what();
      }
      emit(out, j.dump(2) + "\n");
    } else if (*learn_cmd) {
      const NamedSamples s = read_samples(input);
      LearnOptions opts;
      opts.strict = !permissive_flag->count();
      opts.threshold = threshold;
      opts.sensitivity = sensitivity;
      opts.online = !offline;
      opts.scale = scale == "covariance" ? PrecisionScale::Covariance : PrecisionScale::Correlation;
      LearnResult res = [&] {
        try {
          return learn(s.batch, opts);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::NoKnee) std::cerr << "hint: pass --threshold <t> to skip knee detection\n";
          if (e.kind() == ErrorKind::ApplicabilityFailed) std::cerr << "hint: --permissive continues anyway\n";
          throw;
        }
      }();
      Json j = to_json(res);
      j["names"] = s.names;
      emit(out, j.dump(2) + "\n");
      if (!csv_path.empty()) {
        std::ostringstream os;
        write_gamma_triangle_csv(os, res.gamma_triangle);
        write_text_file(csv_path, os.str());
      }
      if (!res.applicable) std::cerr << fmt::format("warning: ||R - I|| = {:.4f} >= 1\n", res.applicability_norm);
    } else if (*exp) {
      Json j = config_path.empty() ? Json::object() : read_json_file(config_path);
      if (!mode.empty()) j["mode"] = mode;
      if (!j.contains("profile") || exp->count("--profile")) j["profile"] = profile;
      if (app.count("--seed") || !j.contains("seed")) j["seed"] = seed;
      if (trials) j["n_trials"] = *trials;
      if (exp_n) j["n_samples"] = *exp_n;
      if (exp_dim) j["dim"] = *exp_dim;
      if (!transform_name.empty()) j["transform"] = to_json(transform_from_flags(transform_name, ""));
      if (j.contains("transform") && j["transform"].is_object()) j["transform"].erase("label");
      j["threads"] = threads;
      const ExperimentReport report = run_experiment(experiment_config_from_json(j));
      emit(out, to_json(report).dump(2) + "\n");
      if (!csv_path.empty()) {
        std::ostringstream os;
        write_trials_csv(os, report);
        write_text_file(csv_path, os.str());
      }
    } else if (*score_cmd) {
      const MetricsReport m = score(graph_of_file(truth_path), graph_of_file(learned_path));
      Json j{{"tp", m.tp},
             {"fp", m.fp},
             {"tn", m.tn},
             {"fn", m.fn},
             {"accuracy", m.accuracy},
             {"recall", m.recall},
             {"precision", m.precision},
             {"recall_undefined", m.recall_undefined},
             {"precision_undefined", m.precision_undefined}};
      emit(out, j.dump(2) + "\n");
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
