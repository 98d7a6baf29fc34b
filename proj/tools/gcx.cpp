// gcx: pointwise checks for twisted generalized structures and torus moment
// data on the built-in chart models. Every run emits a machine-readable
// report (JSON or CSV) and exits 0 on pass, 1 on fail, 2 on inconclusive,
// 3 on a configuration error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gcx/report.hpp"

namespace {

struct CliState {
  gcx::ExperimentConfig cfg;
  std::string out_path;
  std::string format = "json";
  std::string config_path;
  bool timing = false;
};

void bind(CLI::App* cmd, CliState& state, const std::string& key,
          const std::string& desc, bool required = false) {
  auto* opt = cmd->add_option_function<std::string>(
      "--" + key,
      [&state, key](const std::string& value) { state.cfg.params[key] = value; },
      desc);
  if (required) opt->required();
}

CLI::App* leaf(CLI::App* parent, CliState& state, const std::string& name,
               const std::string& op, const std::string& desc) {
  CLI::App* cmd = parent->add_subcommand(name, desc);
  cmd->fallthrough();
  cmd->callback([&state, op] { state.cfg.op = op; });
  return cmd;
}

void bind_model(CLI::App* cmd, CliState& state, bool required = true) {
  bind(cmd, state, "builtin", "built-in model name", required);
  bind(cmd, state, "w", "weight pair for the weighted models, e.g. 1,1");
  bind(cmd, state, "dim", "dimension for the flat symplectic family");
}

gcx::Report run_config_file(const CliState& state) {
  std::ifstream in(state.config_path);
  if (!in)
    throw std::runtime_error("cannot read config: " + state.config_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::vector<gcx::ExperimentConfig> sections = gcx::parse_config(buffer.str());
  if (sections.empty())
    throw std::invalid_argument("config defines no experiments");

  gcx::Report merged;
  merged.config.emplace_back("config", state.config_path);
  for (gcx::ExperimentConfig& section : sections) {
    if (section.op.empty())
      throw std::invalid_argument("section [" + section.label +
                                  "] has no op line");
    for (const auto& [key, value] : state.cfg.params)
      section.params[key] = value;  // command line wins over the file
    gcx::Report partial = gcx::run_suite(section);
    for (const auto& [key, value] : partial.config)
      merged.config.emplace_back(section.label + "/" + key, value);
    for (gcx::CheckRecord& check : partial.checks) {
      check.name = section.label + "/" + check.name;
      merged.checks.push_back(std::move(check));
    }
  }
  gcx::finalize_summary(merged);
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointwise checks for twisted generalized structures"};
  app.require_subcommand(1);
  app.fallthrough();

  CliState state;
  app.add_option("--out", state.out_path, "write the report to this file");
  app.add_option("--format", state.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--timing", state.timing, "record wall time in the report");

  CLI::App* lint = leaf(&app, state, "lint", "lint",
                        "validate a model against the structure axioms");
  bind_model(lint, state);
  bind(lint, state, "check", "comma list of checks to run");
  bind(lint, state, "xi", "generator coefficients, e.g. 1,0,0");
  bind(lint, state, "n", "sample count");
  bind(lint, state, "seed", "random seed");
  bind(lint, state, "tol", "override the pass tolerance");

  CLI::App* spinor = app.add_subcommand("spinor", "spinor line operations");
  spinor->require_subcommand(1);
  spinor->fallthrough();
  CLI::App* roundtrip = leaf(spinor, state, "roundtrip", "spinor-roundtrip",
                             "structure to spinor line and back");
  bind(roundtrip, state, "d", "half dimension of the model space");
  bind(roundtrip, state, "trials", "number of random structures");
  bind(roundtrip, state, "seed", "random seed");
  bind(roundtrip, state, "tol", "override the pass tolerance");

  CLI::App* moment = app.add_subcommand("moment", "moment map experiments");
  moment->require_subcommand(1);
  moment->fallthrough();
  CLI::App* verify = leaf(moment, state, "verify", "moment-verify",
                          "check the defining condition at random points");
  bind_model(verify, state);
  bind(verify, state, "n", "sample count");
  bind(verify, state, "seed", "random seed");
  bind(verify, state, "tol", "override the pass tolerance");
  CLI::App* hull = leaf(moment, state, "hull", "moment-hull",
                        "compare the image hull with the fixed-value hull");
  bind_model(hull, state);
  bind(hull, state, "n", "sample count");
  bind(hull, state, "seed", "random seed");
  bind(hull, state, "tol", "override the pass tolerance");
  CLI::App* levels = leaf(moment, state, "levels", "moment-levels",
                          "connectivity of interior level sets");
  bind_model(levels, state);
  bind(levels, state, "n", "sample count");
  bind(levels, state, "trials", "number of level values to test");
  bind(levels, state, "seed", "random seed");
  bind(levels, state, "eps", "level slab half width");
  bind(levels, state, "delta", "linking radius, 0 = automatic");
  CLI::App* hessian = leaf(moment, state, "hessian", "moment-hessian",
                           "grade the critical components of one generator");
  bind_model(hessian, state);
  bind(hessian, state, "xi", "generator coefficients, e.g. 1,1", true);
  bind(hessian, state, "seed", "random seed");

  CLI::App* cut = app.add_subcommand("cut", "polyhedral cut experiments");
  cut->require_subcommand(1);
  cut->fallthrough();
  CLI::App* faces = leaf(cut, state, "faces", "cut-faces",
                         "face decomposition of a polyhedral cut");
  bind_model(faces, state);
  bind(faces, state, "p", "cut constraints, e.g. 1,0,-0.3;0,1,-0.3");
  bind(faces, state, "n", "sample count");
  bind(faces, state, "seed", "random seed");
  CLI::App* coverage = leaf(cut, state, "coverage", "cut-coverage",
                            "weighted image union covers the test window");
  bind(coverage, state, "trials", "number of random weight pairs");
  bind(coverage, state, "seed", "random seed");

  CLI::App* batch = leaf(&app, state, "report", "report",
                         "run every experiment in a config file");
  batch->add_option("--config", state.config_path, "experiment config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 3;
  }

  const auto started = std::chrono::steady_clock::now();
  gcx::Report report;
  try {
    report = state.cfg.op == "report" ? run_config_file(state)
                                      : gcx::run_suite(state.cfg);
  } catch (const std::exception& err) {
    std::cerr << "gcx: " << err.what() << "\n";
    return 3;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  if (state.timing) report.wall_seconds = wall;

  const std::string text = state.format == "csv" ? gcx::render_csv(report)
                                                 : gcx::render_json(report);
  if (state.out_path.empty())
    std::cout << text;
  else
    gcx::write_atomic(state.out_path, text);
  std::fprintf(stderr, "wall %.3f s\n", wall);
  return gcx::exit_code_for(report);
}
