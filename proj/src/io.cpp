#include "gnpn/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "gnpn/error.hpp"

namespace gnpn {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing key '") + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("key '") + key + "': " + e.what());
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    parse_fail(fmt::format("line {}: '{}' is not a number", line_no, s));
  return v;
}

}  // namespace

Json to_json(const SymmetricMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", m.dim()}, {"rows", std::move(rows)}};
}

SymmetricMatrix matrix_from_json(const Json& j) {
  const auto d = get_as<std::size_t>(j, "dim");
  const auto rows = get_as<std::vector<std::vector<double>>>(j, "rows");
  if (d < 1) parse_fail("matrix dim must be >= 1");
  if (rows.size() != d) parse_fail(fmt::format("matrix has {} rows, dim is {}", rows.size(), d));
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) parse_fail(fmt::format("matrix row {} has {} entries", i, rows[i].size()));
    for (std::size_t k = 0; k < d; ++k) m(i, k) = rows[i][k];
  }
  try {
    return SymmetricMatrix::from_dense(m, 1e-9);
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

Json to_json(const GraphStructure& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.lo, e.hi});
  return Json{{"dim", g.dim()}, {"edges", std::move(edges)}};
}

GraphStructure graph_from_json(const Json& j) {
  const auto d = get_as<std::size_t>(j, "dim");
  const auto pairs = get_as<std::vector<std::vector<std::size_t>>>(j, "edges");
  std::vector<Edge> edges;
  for (const auto& p : pairs) {
    if (p.size() != 2) parse_fail("edge entries must be [i, j] pairs");
    try {
      edges.emplace_back(p[0], p[1]);
    } catch (const Error& e) {
      parse_fail(e.what());
    }
  }
  try {
    return GraphStructure(d, std::move(edges));
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

Json to_json(const PrecisionModel& m) {
  return Json{{"gamma_rho", to_json(m.gamma_rho)}, {"edges", to_json(m.edges)}, {"b_norm", m.b_norm}};
}

PrecisionModel model_from_json(const Json& j) {
  // Accept either a model object or a bare matrix.
  const Json& mat = j.contains("gamma_rho") ? j.at("gamma_rho") : j;
  return make_precision_model(matrix_from_json(mat));
}

Json to_json(const TransformConfig& t) {
  Json j{{"name", t.name},
         {"alpha", t.params.alpha},
         {"mu_f0", t.params.mu_f0},
         {"sigma_f0", t.params.sigma_f0},
         {"label", t.label()}};
  if (t.name == "mixed") j["pool"] = t.pool;
  return j;
}

TransformConfig transform_config_from_json(const Json& j) {
  TransformConfig t;
  if (j.is_string()) {
    t.name = j.get<std::string>();
  } else if (j.is_object()) {
    t.name = get_as<std::string>(j, "name");
  } else {
    parse_fail("transform config must be a string or an object");
  }
  if (j.is_object() && j.contains("pool")) t.pool = get_as<std::vector<std::string>>(j, "pool");
  if (j.is_object() && j.contains("alpha")) t.params.alpha = get_as<double>(j, "alpha");
  if (j.is_object() && j.contains("mu_f0")) t.params.mu_f0 = get_as<double>(j, "mu_f0");
  if (j.is_object() && j.contains("sigma_f0")) t.params.sigma_f0 = get_as<double>(j, "sigma_f0");
  const auto& names = builtin_names();
  auto known = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };
  if (t.name == "mixed") {
    if (t.pool.empty()) parse_fail("mixed transform needs a non-empty pool");
    for (const auto& n : t.pool)
      if (!known(n)) throw Error(ErrorKind::UnknownTransform, "'" + n + "'");
  } else if (!known(t.name)) {
    throw Error(ErrorKind::UnknownTransform, "'" + t.name + "'");
  }
  return t;
}

Json to_json(const GnpnPrediction& p) {
  return Json{{"kappa", p.kappa},
              {"lambda", p.lambda},
              {"sigma_pi_first_order", to_json(p.sigma_pi_first_order)},
              {"gamma_pi_first_order", to_json(p.gamma_pi_first_order)}};
}

Json to_json(const LearnResult& r) {
  Json tri = Json::array();
  for (std::size_t k = 0; k < r.gamma_triangle.values.size(); ++k) {
    const auto [i, j] = r.gamma_triangle.pairs[k];
    tri.push_back({{"i", i}, {"j", j}, {"value", r.gamma_triangle.values[k]}});
  }
  return Json{{"r_hat", to_json(r.r_hat)},
              {"gamma_hat", to_json(r.gamma_hat)},
              {"applicability_norm", r.applicability_norm},
              {"applicable", r.applicable},
              {"gamma_triangle", std::move(tri)},
              {"knee", {{"index", r.knee.index}, {"threshold", r.knee.threshold}, {"found", r.knee.found}}},
              {"gamma_thresholded", to_json(r.gamma_thresholded)},
              {"graph", to_json(r.graph)}};
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("experiment config must be an object");
  static const std::set<std::string> allowed{
      "mode",    "profile",     "dim",      "n_samples",         "n_trials",        "transform", "seed",
      "enforce_b_norm", "weight_scale", "weight_reading", "min_weight", "p_min", "p_max", "gw_lambda",
      "max_regenerations", "precision_scale", "sensitivity", "dims", "n_grid", "threads"};
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) parse_fail("unknown experiment config key '" + key + "'");

  const ExperimentMode mode = j.contains("mode") ? parse_mode(get_as<std::string>(j, "mode")) : ExperimentMode::ErdosRenyi;
  const Profile profile = j.contains("profile") ? parse_profile(get_as<std::string>(j, "profile")) : Profile::Desk;
  ExperimentConfig c = ExperimentConfig::defaults(mode, profile);
  if (j.contains("dim")) c.dim = get_as<std::size_t>(j, "dim");
  if (j.contains("n_samples")) c.n_samples = get_as<std::size_t>(j, "n_samples");
  if (j.contains("n_trials")) c.n_trials = get_as<std::size_t>(j, "n_trials");
  if (j.contains("transform")) c.transform = transform_config_from_json(j.at("transform"));
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("enforce_b_norm")) c.enforce_b_norm = get_as<bool>(j, "enforce_b_norm");
  if (j.contains("weight_scale")) c.weights.scale = get_as<double>(j, "weight_scale");
  if (j.contains("weight_reading")) {
    const auto r = get_as<std::string>(j, "weight_reading");
    if (r == "std") c.weights.reading = WeightScale::StdDev;
    else if (r == "variance") c.weights.reading = WeightScale::Variance;
    else parse_fail("weight_reading must be 'std' or 'variance'");
  }
  if (j.contains("min_weight")) c.weights.min_abs = get_as<double>(j, "min_weight");
  if (j.contains("p_min")) c.p_min = get_as<double>(j, "p_min");
  if (j.contains("p_max")) c.p_max = get_as<double>(j, "p_max");
  if (j.contains("gw_lambda")) c.gw_lambda = get_as<double>(j, "gw_lambda");
  if (j.contains("max_regenerations")) c.max_regenerations = get_as<std::size_t>(j, "max_regenerations");
  if (j.contains("precision_scale")) {
    const auto s = get_as<std::string>(j, "precision_scale");
    if (s == "correlation") c.learn.scale = PrecisionScale::Correlation;
    else if (s == "covariance") c.learn.scale = PrecisionScale::Covariance;
    else parse_fail("precision_scale must be 'correlation' or 'covariance'");
  }
  if (j.contains("sensitivity")) c.learn.sensitivity = get_as<double>(j, "sensitivity");
  if (j.contains("dims")) c.dims = get_as<std::vector<std::size_t>>(j, "dims");
  if (j.contains("n_grid")) c.n_grid = get_as<std::vector<std::size_t>>(j, "n_grid");
  if (j.contains("threads")) c.threads = get_as<std::size_t>(j, "threads");
  c.validate();
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json j{{"mode", to_string(c.mode)},
         {"dim", c.dim},
         {"n_samples", c.n_samples},
         {"n_trials", c.n_trials},
         {"transform", to_json(c.transform)},
         {"seed", c.seed},
         {"enforce_b_norm", c.enforce_b_norm},
         {"weight_scale", c.weights.scale},
         {"weight_reading", c.weights.reading == WeightScale::StdDev ? "std" : "variance"},
         {"min_weight", c.weights.min_abs},
         {"p_min", c.p_min},
         {"p_max", c.p_max},
         {"gw_lambda", c.gw_lambda},
         {"max_regenerations", c.max_regenerations},
         {"precision_scale", c.learn.scale == PrecisionScale::Correlation ? "correlation" : "covariance"},
         {"sensitivity", c.learn.sensitivity}};
  if (c.mode == ExperimentMode::ApplicabilityProportion) j["dims"] = c.dims;
  if (c.mode == ExperimentMode::SampleEfficiency) j["n_grid"] = c.n_grid;
  // threads is deliberately left out: reports must not depend on it.
  return j;
}

Json to_json(const ExperimentReport& r) {
  Json groups = Json::array();
  for (const GroupSummary& g : r.groups) {
    groups.push_back({{"group", g.group},
                      {"dim", g.dim},
                      {"n_samples", g.n_samples},
                      {"trials", g.trials},
                      {"succeeded", g.succeeded},
                      {"failed", g.failed},
                      {"accuracy", {{"mean", g.accuracy_mean}, {"std", g.accuracy_std}}},
                      {"recall", {{"mean", g.recall_mean}, {"std", g.recall_std}}},
                      {"precision", {{"mean", g.precision_mean}, {"std", g.precision_std}}},
                      {"false_pass_rate", g.false_pass_rate},
                      {"applicable_proportion", g.applicable_proportion}});
  }
  Json failures = Json::object();
  for (const TrialRow& row : r.rows)
    if (!row.ok) failures[row.failure] = failures.value(row.failure, 0) + 1;
  return Json{{"config", to_json(r.config)}, {"groups", std::move(groups)}, {"failures", std::move(failures)}};
}

void write_trials_csv(std::ostream& os, const ExperimentReport& r) {
  os << "group,trial,dim,n_samples,ok,failure,generations,b_norm,applicability_norm,applicable,false_pass,"
        "threshold,tp,fp,tn,fn,accuracy,recall,precision,recall_undefined,precision_undefined\n";
  for (const TrialRow& t : r.rows) {
    const MetricsReport& m = t.metrics;
    os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", t.group, t.trial, t.dim,
                      t.n_samples, int(t.ok), t.failure, t.generations, t.b_norm, t.applicability_norm,
                      int(t.applicable), int(t.false_pass), t.threshold, m.tp, m.fp, m.tn, m.fn,
                      t.scored ? fmt::format("{}", m.accuracy) : "", t.scored ? fmt::format("{}", m.recall) : "",
                      t.scored ? fmt::format("{}", m.precision) : "", int(m.recall_undefined),
                      int(m.precision_undefined));
  }
}

NamedSamples read_samples_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  NamedSamples out;
  while (std::getline(is, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) parse_fail("empty samples file");
  out.names = split(line);
  const std::size_t d = out.names.size();

  std::vector<double> values;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != d) parse_fail(fmt::format("line {}: expected {} fields, got {}", line_no, d, cells.size()));
    for (const auto& c : cells) values.push_back(parse_double(c, line_no));
    ++n;
  }
  out.batch = SampleBatch(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c)
      out.batch(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * d + c];
  return out;
}

void write_samples_csv(std::ostream& os, const NamedSamples& s) {
  if (s.names.size() != static_cast<std::size_t>(s.batch.cols()))
    throw Error(ErrorKind::DimensionMismatch, "column names vs batch width");
  for (std::size_t c = 0; c < s.names.size(); ++c) os << (c ? "," : "") << s.names[c];
  os << '\n';
  for (Eigen::Index r = 0; r < s.batch.rows(); ++r) {
    for (Eigen::Index c = 0; c < s.batch.cols(); ++c) os << (c ? "," : "") << fmt::format("{}", s.batch(r, c));
    os << '\n';
  }
}

void write_gamma_triangle_csv(std::ostream& os, const GammaTriangle& t) {
  os << "rank,i,j,value\n";
  for (std::size_t k = 0; k < t.values.size(); ++k)
    os << fmt::format("{},{},{},{}\n", k, t.pairs[k].first, t.pairs[k].second, t.values[k]);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

}  // namespace gnpn
