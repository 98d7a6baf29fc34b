// Config parsing, verdict aggregation, serialization, and the determinism
// guarantee of the experiment runner.

#include "gcx/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace gcx {
namespace {

TEST(ParseVector, SplitsCommaLists) {
  const VectorXd v = parse_vector("1,-2.5,0.25");
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[1], -2.5);
  EXPECT_EQ(v[2], 0.25);
  EXPECT_EQ(parse_vector("").size(), 0);
}

TEST(ParseCut, ReadsConstraintGroups) {
  const PolyhedralSet cut = parse_cut("1,0,-0.3;0,1,-0.3");
  ASSERT_EQ(cut.constraints.size(), 2u);
  EXPECT_EQ(cut.constraints[0].normal[0], 1);
  EXPECT_EQ(cut.constraints[0].normal[1], 0);
  EXPECT_EQ(cut.constraints[0].offset, -0.3);
  EXPECT_EQ(cut.constraints[1].normal[0], 0);
  EXPECT_EQ(cut.constraints[1].normal[1], 1);

  EXPECT_THROW(parse_cut(""), std::invalid_argument);
  EXPECT_THROW(parse_cut("0.5,1,-0.3"), std::invalid_argument);
  EXPECT_THROW(parse_cut("0,0,-0.3"), std::invalid_argument);
  EXPECT_THROW(parse_cut("1"), std::invalid_argument);
}

TEST(ParseConfig, SectionsCommentsAndDefaults) {
  const std::string text =
      "# suite\n"
      "[hull]\n"
      "op = moment-hull\n"
      "builtin = cp2_fs   # trailing comment\n"
      "n = 500\n"
      "\n"
      "[roundtrip]\n"
      "op = spinor-roundtrip\n"
      "trials = 5\n";
  const auto sections = parse_config(text);
  ASSERT_EQ(sections.size(), 2u);
  EXPECT_EQ(sections[0].label, "hull");
  EXPECT_EQ(sections[0].op, "moment-hull");
  EXPECT_EQ(sections[0].get("builtin", ""), "cp2_fs");
  EXPECT_EQ(sections[0].geti("n", 0), 500);
  EXPECT_EQ(sections[1].label, "roundtrip");
  EXPECT_EQ(sections[1].geti("trials", 0), 5);

  // Keys before any header land in an implicit default section.
  const auto bare = parse_config("op = lint\nbuiltin = r2_rotation\n");
  ASSERT_EQ(bare.size(), 1u);
  EXPECT_EQ(bare[0].label, "default");
  EXPECT_EQ(bare[0].op, "lint");

  EXPECT_THROW(parse_config("[open\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("just words\n"), std::invalid_argument);
}

TEST(Verdicts, SummaryAggregationAndExitCodes) {
  Report report;
  report.checks.push_back({"a", {}, 0.0, "pass", "x", ""});
  report.checks.push_back({"b", {}, 0.0, "info", "x", ""});
  finalize_summary(report);
  EXPECT_EQ(report.summary, "pass");
  EXPECT_EQ(exit_code_for(report), 0);

  report.checks.push_back({"c", {}, 0.0, "inconclusive", "x", ""});
  finalize_summary(report);
  EXPECT_EQ(report.summary, "inconclusive");
  EXPECT_EQ(exit_code_for(report), 2);

  report.checks.push_back({"d", {}, 0.0, "fail", "x", ""});
  finalize_summary(report);
  EXPECT_EQ(report.summary, "fail");
  EXPECT_EQ(exit_code_for(report), 1);
}

TEST(Serialization, JsonShapeAndOptionalFields) {
  Report report;
  report.config.emplace_back("op", "lint");
  CheckRecord bare;
  bare.name = "axioms/involution-pairing";
  bare.residuals = {{"worst", 1e-12}};
  bare.verdict = "pass";
  bare.anchor = "axioms/involution-pairing";
  report.checks.push_back(bare);
  finalize_summary(report);

  const auto parsed = nlohmann::json::parse(render_json(report));
  EXPECT_EQ(parsed["version"], kVersion);
  EXPECT_EQ(parsed["config"]["op"], "lint");
  EXPECT_EQ(parsed["summary"], "pass");
  ASSERT_EQ(parsed["checks"].size(), 1u);
  EXPECT_FALSE(parsed["checks"][0].contains("tolerance"));  // NaN = omitted
  EXPECT_FALSE(parsed["checks"][0].contains("data"));
  EXPECT_FALSE(parsed.contains("wall_seconds"));

  report.checks[0].tolerance = 1e-10;
  report.checks[0].data = "(0,0);(1,0)";
  report.wall_seconds = 0.25;
  const auto full = nlohmann::json::parse(render_json(report));
  EXPECT_EQ(full["checks"][0]["tolerance"], 1e-10);
  EXPECT_EQ(full["checks"][0]["data"], "(0,0);(1,0)");
  EXPECT_EQ(full["wall_seconds"], 0.25);
}

TEST(Serialization, CsvQuotesDataAndPicksWorstResidual) {
  Report report;
  CheckRecord check;
  check.name = "convex-image/hull";
  check.residuals = {{"hausdorff", 1e-3}, {"vertex-match", -2e-3}};
  check.tolerance = 5e-3;
  check.verdict = "pass";
  check.anchor = "convex-image/hull";
  check.data = "(0,0);(-0.5,0);(0,-0.5)";
  report.checks.push_back(check);
  finalize_summary(report);

  const std::string csv = render_csv(report);
  std::stringstream stream(csv);
  std::string line;
  std::getline(stream, line);
  EXPECT_EQ(line, "check,residual,tolerance,verdict,anchor");
  std::getline(stream, line);
  EXPECT_EQ(line, "convex-image/hull,-0.002,0.005,pass,convex-image/hull");
  std::getline(stream, line);
  EXPECT_EQ(line,
            "convex-image/hull/data,\"(0,0);(-0.5,0);(0,-0.5)\",,pass,"
            "convex-image/hull");
  std::getline(stream, line);
  EXPECT_EQ(line, "summary,,,pass,");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Serialization, WriteAtomicLeavesNoTempFile) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gcx_report_test";
  fs::create_directories(dir);
  const fs::path target = dir / "out.json";
  write_atomic(target.string(), "first\n");
  write_atomic(target.string(), "second\n");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "second\n");
  EXPECT_FALSE(fs::exists(target.string() + ".tmp"));
  fs::remove_all(dir);
}

ExperimentConfig config_for(const std::string& op,
                            std::map<std::string, std::string> params) {
  ExperimentConfig cfg;
  cfg.op = op;
  cfg.params = std::move(params);
  return cfg;
}

TEST(Runner, RepeatRunsAreByteIdentical) {
  const std::vector<ExperimentConfig> cases = {
      config_for("spinor-roundtrip", {{"d", "4"}, {"trials", "10"}, {"seed", "1"}}),
      config_for("lint", {{"builtin", "r2_rotation"}, {"n", "5"}, {"seed", "2"}}),
      config_for("moment-hull",
                 {{"builtin", "cp2_fs"}, {"w", "1,1"}, {"n", "20000"}, {"seed", "7"}}),
      config_for("moment-hessian",
                 {{"builtin", "r2_rotation"}, {"xi", "1"}, {"seed", "3"}}),
  };
  for (const ExperimentConfig& cfg : cases) {
    const Report first = run_suite(cfg);
    const Report second = run_suite(cfg);
    EXPECT_EQ(render_json(first), render_json(second)) << cfg.op;
    EXPECT_EQ(render_csv(first), render_csv(second)) << cfg.op;
    EXPECT_EQ(first.summary, "pass") << cfg.op;
  }
}

TEST(Runner, ConfigEchoRoundTripsThroughJson) {
  const ExperimentConfig cfg = config_for(
      "moment-hull",
      {{"builtin", "cp2_fs"}, {"w", "2,1"}, {"n", "2000"}, {"seed", "7"}});
  const auto parsed = nlohmann::json::parse(render_json(run_suite(cfg)));
  EXPECT_EQ(parsed["config"]["op"], "moment-hull");
  EXPECT_EQ(parsed["config"]["builtin"], "cp2_fs");
  EXPECT_EQ(parsed["config"]["w"], "2,1");
  EXPECT_EQ(parsed["config"]["n"], "2000");
  EXPECT_EQ(parsed["config"]["seed"], "7");
}

TEST(Runner, ThinLevelSamplingReportsInconclusive) {
  const ExperimentConfig cfg = config_for(
      "moment-levels", {{"builtin", "cp2_fs"}, {"n", "1500"},
                        {"trials", "2"}, {"eps", "0.01"}, {"seed", "5"}});
  const Report report = run_suite(cfg);
  EXPECT_EQ(report.summary, "inconclusive");
  EXPECT_EQ(exit_code_for(report), 2);
  ASSERT_EQ(report.checks.size(), 1u);
  EXPECT_EQ(report.checks[0].verdict, "inconclusive");
}

TEST(Runner, RejectsUnknownOperationsAndChecks) {
  EXPECT_THROW(run_suite(config_for("no-such-op", {})), std::invalid_argument);
  EXPECT_THROW(run_suite(config_for("lint", {{"builtin", "r2_rotation"},
                                             {"check", "no-such-check"}})),
               std::invalid_argument);
  EXPECT_THROW(run_suite(config_for("moment-hessian",
                                    {{"builtin", "cp2_fs"}, {"xi", "1"}})),
               std::invalid_argument);
  EXPECT_THROW(run_suite(config_for("lint", {})), std::invalid_argument);
}

}  // namespace
}  // namespace gcx
