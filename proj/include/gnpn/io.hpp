#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnpn/experiment.hpp"
#include "gnpn/exactcov.hpp"
#include "gnpn/graph.hpp"
#include "gnpn/graphgen.hpp"
#include "gnpn/learner.hpp"
#include "gnpn/matcore.hpp"
#include "gnpn/transforms.hpp"

namespace gnpn {

using Json = nlohmann::json;

// Matrices: {"dim": d, "rows": [[...], ...]}. The reader checks symmetry to
// 1e-9 and averages the two triangles.
Json to_json(const SymmetricMatrix& m);
SymmetricMatrix matrix_from_json(const Json& j);

// Graphs: {"dim": d, "edges": [[i, j], ...]}, i < j, sorted.
Json to_json(const GraphStructure& g);
GraphStructure graph_from_json(const Json& j);

// Models: {"gamma_rho": matrix, "edges": graph, "b_norm": x}. Only
// gamma_rho is read back; the rest is recomputed.
Json to_json(const PrecisionModel& m);
PrecisionModel model_from_json(const Json& j);

// {"name": "cube" | "mixed" | ..., "pool": [...], "alpha", "mu_f0", "sigma_f0"}
Json to_json(const TransformConfig& t);
TransformConfig transform_config_from_json(const Json& j);

Json to_json(const GnpnPrediction& p);
Json to_json(const LearnResult& r);

/// Keys override the mode/profile defaults; unknown keys are rejected.
ExperimentConfig experiment_config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);
Json to_json(const ExperimentReport& r);
/// One row per trial slot.
void write_trials_csv(std::ostream& os, const ExperimentReport& r);

struct NamedSamples {
  std::vector<std::string> names;
  SampleBatch batch;
};

/// Header row of names, then one observation per line.
NamedSamples read_samples_csv(std::istream& is);
void write_samples_csv(std::ostream& os, const NamedSamples& s);

/// rank,i,j,value
void write_gamma_triangle_csv(std::ostream& os, const GammaTriangle& t);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gnpn
