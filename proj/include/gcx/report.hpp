// Experiment runner and machine-readable reporting: named checks over the
// built-in catalog, verdict aggregation, JSON and CSV serialization with
// deterministic field order, atomic file output.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gcx/convexity.hpp"

namespace gcx {

inline constexpr const char* kVersion = "0.1.0";

struct CheckRecord {
  std::string name;
  std::vector<std::pair<std::string, double>> residuals;
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  std::string verdict;  // pass, fail, inconclusive, or an informational word
  std::string anchor;   // stable claim identifier
  std::string data;     // optional payload such as vertex lists
};

struct Report {
  std::string version = kVersion;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<CheckRecord> checks;
  std::string summary;
  double wall_seconds = -1.0;  // negative = omitted from serialized output
};

inline void finalize_summary(Report& report) {
  bool any_inconclusive = false;
  for (const CheckRecord& check : report.checks) {
    if (check.verdict == "fail") {
      report.summary = "fail";
      return;
    }
    if (check.verdict == "inconclusive") any_inconclusive = true;
  }
  report.summary = any_inconclusive ? "inconclusive" : "pass";
}

inline int exit_code_for(const Report& report) {
  if (report.summary == "pass") return 0;
  if (report.summary == "inconclusive") return 2;
  return 1;
}

// ---- serialization ---------------------------------------------------------

inline std::string format_sig(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_rows(const MatrixXd& rows) {
  std::string out;
  for (int i = 0; i < rows.rows(); ++i) {
    if (i) out += ";";
    out += "(";
    for (int j = 0; j < rows.cols(); ++j) {
      if (j) out += ",";
      out += format_sig(rows(i, j));
    }
    out += ")";
  }
  return out;
}

inline std::string format_rows(const Eigen::MatrixXi& rows) {
  return format_rows(MatrixXd(rows.cast<double>()));
}

inline std::string render_json(const Report& report) {
  nlohmann::ordered_json root;
  root["version"] = report.version;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.config) config[key] = value;
  root["config"] = config;
  root["checks"] = nlohmann::ordered_json::array();
  for (const CheckRecord& check : report.checks) {
    nlohmann::ordered_json entry;
    entry["name"] = check.name;
    nlohmann::ordered_json residuals = nlohmann::ordered_json::object();
    for (const auto& [key, value] : check.residuals) residuals[key] = value;
    entry["residuals"] = residuals;
    if (!std::isnan(check.tolerance)) entry["tolerance"] = check.tolerance;
    entry["verdict"] = check.verdict;
    entry["anchor"] = check.anchor;
    if (!check.data.empty()) entry["data"] = check.data;
    root["checks"].push_back(entry);
  }
  root["summary"] = report.summary;
  if (report.wall_seconds >= 0.0) root["wall_seconds"] = report.wall_seconds;
  return root.dump(2) + "\n";
}

inline std::string render_csv(const Report& report) {
  std::string out = "check,residual,tolerance,verdict,anchor\n";
  for (const CheckRecord& check : report.checks) {
    double worst = 0.0;
    bool have = false;
    for (const auto& [key, value] : check.residuals)
      if (!have || std::abs(value) > std::abs(worst)) {
        worst = value;
        have = true;
      }
    out += check.name + ",";
    if (have) out += format_sig(worst);
    out += ",";
    if (!std::isnan(check.tolerance)) out += format_sig(check.tolerance);
    out += "," + check.verdict + "," + check.anchor + "\n";
    if (!check.data.empty())
      out += check.name + "/data,\"" + check.data + "\",," + check.verdict +
             "," + check.anchor + "\n";
  }
  out += "summary,,," + report.summary + ",\n";
  return out;
}

inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
    if (!stream) throw std::runtime_error("cannot open " + tmp.string());
    stream << content;
    stream.flush();
    if (!stream) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

// ---- experiment configuration ----------------------------------------------

struct ExperimentConfig {
  std::string label = "default";
  std::string op;
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
  std::string require(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end())
      throw std::invalid_argument(op + " requires --" + key);
    return it->second;
  }
  int geti(const std::string& key, int fallback) const {
    return has(key) ? std::stoi(params.at(key)) : fallback;
  }
  double getd(const std::string& key, double fallback) const {
    return has(key) ? std::stod(params.at(key)) : fallback;
  }
  uint64_t getu(const std::string& key, uint64_t fallback) const {
    return has(key) ? std::stoull(params.at(key)) : fallback;
  }
};

inline VectorXd parse_vector(const std::string& text) {
  std::vector<double> entries;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ','))
    if (!item.empty()) entries.push_back(std::stod(item));
  VectorXd out(static_cast<int>(entries.size()));
  for (size_t i = 0; i < entries.size(); ++i)
    out[static_cast<int>(i)] = entries[i];
  return out;
}

// Constraints "a,b,offset;c,d,offset;..." with integer normal entries.
inline PolyhedralSet parse_cut(const std::string& text) {
  PolyhedralSet cut;
  std::stringstream stream(text);
  std::string group;
  while (std::getline(stream, group, ';')) {
    if (group.empty()) continue;
    const VectorXd raw = parse_vector(group);
    if (raw.size() < 2)
      throw std::invalid_argument("constraint needs a normal and an offset");
    HalfSpace half;
    half.normal.resize(raw.size() - 1);
    for (int i = 0; i + 1 < raw.size(); ++i) {
      const double entry = raw[i];
      if (std::abs(entry - std::llround(entry)) > 1e-9)
        throw std::invalid_argument("cut normals must be integral");
      half.normal[i] = static_cast<int>(std::llround(entry));
    }
    if (half.normal.isZero())
      throw std::invalid_argument("cut normal must be nonzero");
    half.offset = raw[raw.size() - 1];
    cut.constraints.push_back(std::move(half));
  }
  if (cut.constraints.empty())
    throw std::invalid_argument("empty cut description");
  return cut;
}

// Flat key-value text with [section] headers; one experiment per section.
inline std::vector<ExperimentConfig> parse_config(const std::string& text) {
  std::vector<ExperimentConfig> sections;
  auto trim = [](std::string s) {
    const auto from = s.find_first_not_of(" \t\r");
    const auto to = s.find_last_not_of(" \t\r");
    return from == std::string::npos ? std::string()
                                     : s.substr(from, to - from + 1);
  };
  std::stringstream stream(text);
  std::string line;
  int lineno = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated section header");
      sections.emplace_back();
      sections.back().label = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    if (sections.empty()) sections.emplace_back();
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "op")
      sections.back().op = value;
    else
      sections.back().params[key] = value;
  }
  return sections;
}

// ---- check handlers ----------------------------------------------------------

namespace detail {

inline BuiltinParams builtin_params(const ExperimentConfig& cfg) {
  BuiltinParams params;
  if (cfg.has("w")) {
    const VectorXd w = parse_vector(cfg.params.at("w"));
    if (w.size() != 2) throw std::invalid_argument("--w expects two entries");
    params.w = Eigen::Vector2d(w[0], w[1]);
  }
  params.dim = cfg.geti("dim", params.dim);
  return params;
}

inline const MomentSystem& require_system(const Builtin& builtin) {
  if (!builtin.system)
    throw std::invalid_argument(builtin.chart.name + " carries no torus data");
  return *builtin.system;
}

inline void echo_config(const ExperimentConfig& cfg, Report& report) {
  if (cfg.label != "default") report.config.emplace_back("label", cfg.label);
  report.config.emplace_back("op", cfg.op);
  static const char* keys[] = {"builtin", "check", "d",   "w",     "dim",
                               "xi",      "p",     "n",   "trials", "seed",
                               "eps",     "delta", "tol"};
  for (const char* key : keys)
    if (cfg.has(key)) report.config.emplace_back(key, cfg.params.at(key));
}

inline void run_lint(const ExperimentConfig& cfg, Report& report) {
  const Builtin builtin =
      make_builtin(cfg.require("builtin"), builtin_params(cfg));
  const ChartModel& chart = builtin.chart;
  const int n = cfg.geti("n", 20);
  const uint64_t seed = cfg.getu("seed", 0);

  std::vector<std::string> selected;
  if (cfg.has("check")) {
    std::stringstream stream(cfg.params.at("check"));
    std::string item;
    while (std::getline(stream, item, ','))
      if (!item.empty()) selected.push_back(item);
  } else {
    selected = {"axioms", "integrability"};
    if (chart.has_quadruple()) selected.push_back("quadruple");
    if (builtin.system) selected.push_back("moment-condition");
  }

  std::vector<ChartPoint> points(n);
  {
    Rng rng(derive_seed(seed, "lint-samples"));
    for (ChartPoint& p : points) p = chart.sample(rng);
  }

  for (const std::string& name : selected) {
    CheckRecord record;
    if (name == "axioms") {
      double worst = 0.0;
      for (const ChartPoint& p : points) {
        const StructureValidation v = validate_structure(chart.structure(p));
        worst = std::max({worst, v.square_residual, v.pairing_residual});
      }
      record.name = "axioms/involution-pairing";
      record.residuals = {{"worst", worst}};
      record.tolerance = kAxiomTol;
      record.verdict = worst < kAxiomTol ? "pass" : "fail";
      record.anchor = "axioms/involution-pairing";
    } else if (name == "quadruple") {
      if (!chart.has_quadruple())
        throw std::invalid_argument(chart.name + " carries no quadruple");
      double worst = 0.0;
      double min_eig = std::numeric_limits<double>::infinity();
      for (const ChartPoint& p : points) {
        const QuadrupleValidation v = validate_quadruple(chart.quadruple(p));
        worst = std::max(
            {worst, v.g_symmetry, v.b_skew, v.j_square, v.j_isometry});
        min_eig = std::min(min_eig, v.g_min_eigenvalue);
      }
      record.name = "axioms/quadruple-compatibility";
      record.residuals = {{"worst", worst}, {"metric-floor", min_eig}};
      record.tolerance = kAxiomTol;
      record.verdict = worst < kAxiomTol && min_eig > 0.0 ? "pass" : "fail";
      record.anchor = "axioms/quadruple-compatibility";
    } else if (name == "moment-condition") {
      const MomentSystem& sys = require_system(builtin);
      double worst = 0.0;
      for (const ChartPoint& p : points)
        for (int j = 0; j < sys.m; ++j) {
          VectorXd xi = VectorXd::Zero(sys.m);
          xi[j] = 1.0;
          worst = std::max(worst, hamiltonian_residual(sys, xi, p).worst());
        }
      record.name = "moment-condition/pointwise";
      record.residuals = {{"worst", worst}};
      record.tolerance = cfg.getd("tol", 1e-8);
      record.verdict = worst < record.tolerance ? "pass" : "fail";
      record.anchor = "moment-condition/pointwise";
    } else if (name == "integrability") {
      double worst = 0.0;
      for (const ChartPoint& p : points)
        worst = std::max(worst, integrability_residual(chart, p));
      record.name = "integrability/courant-closure";
      record.residuals = {{"worst", worst}};
      record.tolerance = cfg.getd("tol", 1e-5);
      record.verdict = worst < record.tolerance ? "pass" : "fail";
      record.anchor = "integrability/courant-closure";
    } else if (name == "weak-nondegeneracy") {
      const MomentSystem& sys = require_system(builtin);
      const VectorXd xi = parse_vector(cfg.require("xi"));
      if (xi.size() != sys.m)
        throw std::invalid_argument("--xi needs " + std::to_string(sys.m) +
                                    " entries");
      const WeakNondegeneracyReport wnd =
          weak_nondegeneracy_report(sys, xi, seed);
      record.name = "nondegeneracy/crit-equals-fix";
      record.residuals = {{"hausdorff", wnd.hausdorff}};
      record.verdict = wnd.equal ? "equal" : "unequal";
      record.anchor = "nondegeneracy/crit-equals-fix";
      report.checks.push_back(record);

      record = CheckRecord{};
      record.name = "nondegeneracy/rank-factorization";
      record.residuals = {{"points", double(wnd.rank_points)}};
      record.verdict = wnd.rank_fact_holds ? "holds" : "violated";
      record.anchor = "nondegeneracy/rank-factorization";
    } else {
      throw std::invalid_argument("unknown lint check: " + name);
    }
    report.checks.push_back(record);
  }
}

inline void run_spinor_roundtrip(const ExperimentConfig& cfg, Report& report) {
  const int d = cfg.geti("d", 4);
  const int trials = cfg.geti("trials", 100);
  const uint64_t seed = cfg.getu("seed", 0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, "spinor-roundtrip", static_cast<uint64_t>(t)));
    const GeneralizedStructure s = random_structure(d, rng);
    const GeneralizedStructure back =
        structure_from_spinor(spinor_of_structure(s));
    worst = std::max(worst,
                     (back.mat - s.mat).cwiseAbs().maxCoeff());
  }
  CheckRecord record;
  record.name = "spinor/structure-roundtrip";
  record.residuals = {{"max-deviation", worst}};
  record.tolerance = cfg.getd("tol", 1e-9);
  record.verdict = worst < record.tolerance ? "pass" : "fail";
  record.anchor = "spinor/structure-roundtrip";
  report.checks.push_back(record);
}

inline void run_moment_verify(const ExperimentConfig& cfg, Report& report) {
  const Builtin builtin =
      make_builtin(cfg.require("builtin"), builtin_params(cfg));
  const MomentSystem& sys = require_system(builtin);
  const int n = cfg.geti("n", 10);
  Rng rng(derive_seed(cfg.getu("seed", 0), "moment-verify"));
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const ChartPoint p = sys.chart.sample(rng);
    for (int j = 0; j < sys.m; ++j) {
      VectorXd xi = VectorXd::Zero(sys.m);
      xi[j] = 1.0;
      worst = std::max(worst, hamiltonian_residual(sys, xi, p).worst());
    }
  }
  CheckRecord record;
  record.name = "moment-condition/pointwise";
  record.residuals = {{"worst", worst}};
  record.tolerance = cfg.getd("tol", 1e-8);
  record.verdict = worst < record.tolerance ? "pass" : "fail";
  record.anchor = "moment-condition/pointwise";
  report.checks.push_back(record);
}

inline void run_moment_hull(const ExperimentConfig& cfg, Report& report) {
  const Builtin builtin =
      make_builtin(cfg.require("builtin"), builtin_params(cfg));
  const MomentSystem& sys = require_system(builtin);
  const TheoremAReport hulls =
      theorem_a_report(sys, cfg.geti("n", 20000), cfg.getu("seed", 0));

  CheckRecord record;
  record.name = "convex-image/hull-matches-fixed-values";
  record.residuals = {{"hausdorff", hulls.hausdorff},
                      {"vertex-match", hulls.vertex_match}};
  record.tolerance = cfg.getd("tol", 5e-3);
  record.verdict = hulls.hausdorff < record.tolerance ? "pass" : "fail";
  record.anchor = "convex-image/hull-of-fixed-values";
  record.data = format_rows(hulls.fixed_values);
  report.checks.push_back(record);

  record = CheckRecord{};
  record.name = "convex-image/image-hull";
  record.residuals = {
      {"vertices", double(hulls.image_hull.vertices.rows())},
      {"max-violation", hulls.image_hull.max_violation}};
  record.verdict = "info";
  record.anchor = "convex-image/sampled-hull";
  record.data = format_rows(hulls.image_hull.vertices);
  report.checks.push_back(record);
}

inline void run_moment_levels(const ExperimentConfig& cfg, Report& report) {
  const Builtin builtin =
      make_builtin(cfg.require("builtin"), builtin_params(cfg));
  const MomentSystem& sys = require_system(builtin);
  if (sys.m > 2)
    throw std::invalid_argument("level sweep needs image dimension <= 2");
  const int n = cfg.geti("n", 20000);
  const int trials = cfg.geti("trials", 50);
  const double eps = cfg.getd("eps", 0.01);
  const double delta = cfg.getd("delta", 0.0);
  const uint64_t seed = cfg.getu("seed", 0);

  const LevelCloud cloud = sample_level_cloud(sys, n, seed);
  const HullReport hull = convex_hull(cloud.values);

  auto boundary_distance = [&](const VectorXd& a) {
    if (sys.m == 1) {
      const double lo = hull.vertices.col(0).minCoeff();
      const double hi = hull.vertices.col(0).maxCoeff();
      return std::min(a[0] - lo, hi - a[0]);
    }
    double best = std::numeric_limits<double>::infinity();
    const int k = static_cast<int>(hull.vertices.rows());
    for (int i = 0; i < k; ++i) {
      const Eigen::Vector2d va = hull.vertices.row(i);
      const Eigen::Vector2d vb = hull.vertices.row((i + 1) % k);
      const Eigen::Vector2d ab = vb - va;
      const double len2 = ab.squaredNorm();
      const double t =
          len2 == 0.0
              ? 0.0
              : std::clamp((Eigen::Vector2d(a) - va).dot(ab) / len2, 0.0, 1.0);
      best = std::min(best, (Eigen::Vector2d(a) - (va + t * ab)).norm());
    }
    return best;
  };

  Rng rng(derive_seed(seed, "level-draws"));
  int connected = 0, inconclusive = 0, anomalous = 0;
  for (int t = 0; t < trials; ++t) {
    VectorXd a;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const int idx = rng.uniform_int(n);
      a = cloud.values.row(idx).transpose();
      if (boundary_distance(a) >= 3.0 * eps) break;
      a.resize(0);
    }
    if (a.size() == 0)
      throw std::runtime_error("no interior value found; widen the image");
    const ConnectivityReport level =
        level_connectivity(sys, cloud, a, eps, delta);
    if (level.inconclusive)
      ++inconclusive;
    else if (level.components == 1)
      ++connected;
    else
      ++anomalous;
  }

  CheckRecord record;
  record.name = "levels/connected-fibers";
  record.residuals = {{"trials", double(trials)},
                      {"connected", double(connected)},
                      {"inconclusive", double(inconclusive)},
                      {"anomalous", double(anomalous)}};
  record.verdict = anomalous > 0 ? "fail"
                   : inconclusive > 0 ? "inconclusive"
                                      : "pass";
  record.anchor = "levels/connected-fibers";
  report.checks.push_back(record);
}

inline void run_moment_hessian(const ExperimentConfig& cfg, Report& report) {
  const Builtin builtin =
      make_builtin(cfg.require("builtin"), builtin_params(cfg));
  const MomentSystem& sys = require_system(builtin);
  const VectorXd xi = parse_vector(cfg.require("xi"));
  if (xi.size() != sys.m)
    throw std::invalid_argument("--xi needs " + std::to_string(sys.m) +
                                " entries");
  ZeroSearchOptions opts;
  opts.seed = derive_seed(cfg.getu("seed", 0), "moment-hessian");
  opts.label = "moment-hessian";
  const ZeroSetDescription zeros = classify_zero_set(
      sys.chart, [&](const ChartPoint& p) { return sys.dmu_xi(xi, p); },
      [&](const ChartPoint& p) { return sys.mu_xi(xi, p); }, opts);

  if (zeros.whole_chart) {
    CheckRecord record;
    record.name = "bott-morse/whole-chart-critical";
    record.residuals = {{"components", double(zeros.components.size())}};
    record.verdict = "info";
    record.anchor = "bott-morse/critical-submanifolds";
    report.checks.push_back(record);
    return;
  }
  int k = 0;
  for (const CriticalComponent& comp : zeros.components) {
    const CriticalComponent graded = hessian_report(sys, xi, comp);
    CheckRecord record;
    record.name = "bott-morse/component-" + std::to_string(k++);
    record.residuals = {{"value", graded.value},
                        {"index", double(graded.index)},
                        {"coindex", double(graded.coindex)},
                        {"nullity", double(graded.nullity)},
                        {"tangent-dim", double(graded.tangent_dim)}};
    const bool even =
        graded.index % 2 == 0 && graded.coindex % 2 == 0;
    record.verdict = even && graded.hessian_agrees ? "pass" : "fail";
    record.anchor = "bott-morse/even-index";
    record.data = format_rows(MatrixXd(graded.representative.x.transpose()));
    report.checks.push_back(record);
  }
}

inline void run_cut_faces(const ExperimentConfig& cfg, Report& report) {
  const Builtin builtin =
      make_builtin(cfg.require("builtin"), builtin_params(cfg));
  const MomentSystem& sys = require_system(builtin);
  const std::string fallback =
      sys.m == 2 ? "1,0,-0.3;0,1,-0.3" : std::string();
  const std::string constraints = cfg.get("p", fallback);
  if (constraints.empty()) throw std::invalid_argument("cut faces requires --p");
  const PolyhedralSet cut = parse_cut(constraints);
  const CutReport faces =
      cut_decompose(sys, cut, cfg.geti("n", 4000), cfg.getu("seed", 0));

  CheckRecord record;
  record.name = "cuts/face-partition";
  record.residuals = {{"total", double(faces.total)},
                      {"in-p", double(faces.in_p)}};
  record.verdict = faces.counts_partition ? "pass" : "fail";
  record.anchor = "cuts/face-partition";
  report.checks.push_back(record);

  for (const FaceRecord& face : faces.faces) {
    std::string id = "interior";
    if (!face.active.empty()) {
      id.clear();
      for (int j : face.active) id += (id.empty() ? "" : "+") + std::to_string(j);
    }
    record = CheckRecord{};
    record.name = "cuts/face-" + id;
    record.residuals = {{"dim", double(face.dim)},
                        {"sample-count", double(face.sample_count)},
                        {"population", double(face.population)},
                        {"components", double(face.components)},
                        {"feasible", face.feasible ? 1.0 : 0.0},
                        {"subtorus-full", face.subtorus_full ? 1.0 : 0.0}};
    record.verdict = "info";
    record.anchor = "cuts/subtorus-lattice";
    if (face.subtorus.rows() > 0) record.data = format_rows(face.subtorus);
    report.checks.push_back(record);
  }

  record = CheckRecord{};
  record.name = "cuts/connectivity-equivalence";
  record.residuals = {{"preimage", double(faces.preimage_components)},
                      {"image", double(faces.image_components)}};
  record.verdict = faces.item1_equivalent ? "pass" : "fail";
  record.anchor = "cuts/connectivity-equivalence";
  report.checks.push_back(record);

  record = CheckRecord{};
  record.name = "cuts/compactness";
  record.residuals = {{"certified", faces.compact_certified ? 1.0 : 0.0}};
  record.verdict = "info";
  record.anchor = "cuts/compactness";
  record.data = faces.note;
  report.checks.push_back(record);
}

inline void run_cut_coverage(const ExperimentConfig& cfg, Report& report) {
  const CoverageReport coverage =
      quadrant_coverage(cfg.geti("trials", 50), cfg.getu("seed", 0));
  CheckRecord record;
  record.name = "cuts/weighted-union-coverage";
  record.residuals = {{"grid", double(coverage.grid_total)},
                      {"uncovered", double(coverage.uncovered)}};
  record.verdict = coverage.covered ? "pass" : "fail";
  record.anchor = "cuts/weighted-union-coverage";
  report.checks.push_back(record);
}

}  // namespace detail

inline Report run_suite(const ExperimentConfig& cfg) {
  Report report;
  detail::echo_config(cfg, report);
  if (cfg.op == "lint")
    detail::run_lint(cfg, report);
  else if (cfg.op == "spinor-roundtrip")
    detail::run_spinor_roundtrip(cfg, report);
  else if (cfg.op == "moment-verify")
    detail::run_moment_verify(cfg, report);
  else if (cfg.op == "moment-hull")
    detail::run_moment_hull(cfg, report);
  else if (cfg.op == "moment-levels")
    detail::run_moment_levels(cfg, report);
  else if (cfg.op == "moment-hessian")
    detail::run_moment_hessian(cfg, report);
  else if (cfg.op == "cut-faces")
    detail::run_cut_faces(cfg, report);
  else if (cfg.op == "cut-coverage")
    detail::run_cut_coverage(cfg, report);
  else
    throw std::invalid_argument("unknown operation: " + cfg.op);
  finalize_summary(report);
  return report;
}

}  // namespace gcx
