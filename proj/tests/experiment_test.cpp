#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "grwalk/experiment.hpp"

namespace grwalk::experiment {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "grwalk-experiment-test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto path = dir / "test.conf";
  std::ofstream(path) << text;
  return path;
}

int check_quietly(const std::string& target) {
  std::ostringstream out, err;
  return check_command(target, out, err);
}

TEST(Config, ParsesKeysListsAndComments) {
  const auto c = Config::parse_text("# header\nseed = 5\ngroup = S3   # trailing\natom = e 1/2\natom = (12) 1/2\n");
  EXPECT_EQ(c.get("group"), "S3");
  EXPECT_EQ(c.get_seed(), 5u);
  EXPECT_EQ(c.get_list("atom"), (std::vector<std::string>{"e 1/2", "(12) 1/2"}));
  EXPECT_EQ(c.get("missing", "x"), "x");
  EXPECT_EQ(c.get_int("absent", 9), 9);
  EXPECT_EQ(c.get_int_csv("n", "3, 7"), (std::vector<std::int64_t>{3, 7}));
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(Config::parse_text("no equals sign"), UsageError);
  EXPECT_THROW(Config::parse_text("a = 1\na = 2"), UsageError);
  EXPECT_THROW(Config::parse_text("a ="), UsageError);
  EXPECT_THROW(Config::parse_text("= 3"), UsageError);
  EXPECT_THROW(Config::parse_text("seed = -1").get_seed(), UsageError);
  EXPECT_THROW(Config::parse_text("seed = 12abc").get_seed(), UsageError);
  EXPECT_THROW(Config::parse_text("x = 1").get_seed(), UsageError);
  EXPECT_THROW(Config::parse_text("n = 2.5").get_int("n"), UsageError);
  EXPECT_THROW(Config::parse_text("t = fast").get_double("t", 0.0), UsageError);
  EXPECT_THROW(Config::parse_text("bogus = 1").require_known({"seed"}), UsageError);
}

TEST(Config, OverlayReplacesScalarsAndWholeLists) {
  const auto base = Config::parse_text("a = 1\nb = 2\natom = e 1\n");
  const auto merged = base.overlay(Config::parse_text("b = 3\natom = (12) 1/2\natom = e 1/2\n"));
  EXPECT_EQ(merged.get("a"), "1");
  EXPECT_EQ(merged.get("b"), "3");
  EXPECT_EQ(merged.get_list("atom").size(), 2u);
}

TEST(Config, WeightsAreExact) {
  EXPECT_EQ(parse_weight("1/3"), Rational(1, 3));
  EXPECT_EQ(parse_weight("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_weight("1"), Rational(1));
  EXPECT_EQ(parse_weight("0.05"), Rational(1, 20));
  EXPECT_EQ(parse_weight("010/020"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-007"), Rational(-7));
  EXPECT_EQ(parse_rational("0"), Rational(0));
  EXPECT_THROW(parse_weight("1."), UsageError);
  EXPECT_THROW(parse_weight("x"), UsageError);
}

TEST(Descriptors, GroupsRepsAndVectors) {
  EXPECT_EQ(make_group("S3").order(), 6);
  EXPECT_EQ(make_group("C5").order(), 5);
  EXPECT_EQ(make_group("D4").order(), 8);
  EXPECT_EQ(make_group("Q8").order(), 8);
  EXPECT_THROW(make_group("G7"), UsageError);
  EXPECT_THROW(make_group("S"), UsageError);

  const auto s3 = make_group("S3");
  EXPECT_EQ(make_rep(s3, "standard+sign").dimension(), 3);
  EXPECT_EQ(make_rep(make_group("C4"), "character:2").dimension(), 1);
  EXPECT_THROW(make_rep(s3, "character:1"), UsageError);
  EXPECT_THROW(make_rep(s3, "adjoint"), UsageError);

  EXPECT_EQ(make_vector("e2", 3), basis_vector(3, 1));
  const auto x = make_vector("0.5, -1", 2);
  EXPECT_EQ(x(0), std::complex<double>(0.5, 0.0));
  EXPECT_EQ(x(1), std::complex<double>(-1.0, 0.0));
  EXPECT_THROW(make_vector("e4", 3), UsageError);
  EXPECT_THROW(make_vector("1, 2", 3), UsageError);
}

TEST(Descriptors, MeasuresFromAtomLines) {
  const auto s3 = make_group("S3");
  const auto mu = make_finite_measure(s3, {"e 1/3", "(12) 1/3", "(23) 1/3"});
  EXPECT_EQ(mu.weight_of(s3.index_of("(12)")), Rational(1, 3));
  EXPECT_THROW(make_finite_measure(s3, {"e 1/2"}), UsageError);
  EXPECT_THROW(make_finite_measure(s3, {"(45) 1"}), UsageError);
  EXPECT_THROW(make_finite_measure(s3, {"e"}), UsageError);
  const auto z = make_z_measure({"-1 1/4", "0 0.5", "1 1/4"});
  EXPECT_DOUBLE_EQ(z.weight_of(0), 0.5);
}

TEST(Presets, AllResolveAndNameTheirScenario) {
  ASSERT_EQ(presets().size(), 7u);
  for (const auto& p : presets()) {
    const auto c = resolve_config(p.name, Config{});
    EXPECT_TRUE(scenario_keys().contains(c.get("scenario"))) << p.name;
  }
  EXPECT_THROW(resolve_config("nope", Config{}), UsageError);
  EXPECT_THROW(resolve_config("regular-z", Config::parse_text("horizon = 5")), UsageError);
}

TEST(Presets, ConfigFilesMatchEmbeddedPresets) {
  for (const auto& p : presets()) {
    const auto file = fs::path(GRWALK_CONFIG_DIR) / (p.name + ".conf");
    ASSERT_TRUE(fs::exists(file)) << file;
    std::ifstream in(file);
    const auto from_file = Config::parse(in, file.string());
    const auto embedded = Config::parse_text(p.text);
    EXPECT_EQ(from_file.values(), embedded.values()) << p.name;
    EXPECT_EQ(from_file.lists(), embedded.lists()) << p.name;
  }
}

TEST(Scenarios, KawadaItoPresetConverges) {
  const auto r = run_scenario(resolve_config("kawada-ito-s3", Config{}));
  EXPECT_TRUE(r.passed);
  ASSERT_EQ(r.curves.size(), 200u);
  EXPECT_LT(r.curves.back().value, 1e-6);
}

TEST(Scenarios, PeriodicMeasureKeepsDistance) {
  const auto r = run_scenario(
      resolve_config("kawada-ito-s3", Config::parse_text("atom = (12) 1/2\natom = (23) 1/2")));
  EXPECT_FALSE(r.results["strictly_aperiodic"].get<bool>());
  EXPECT_GE(r.results["tail_limsup"].get<double>(), 0.4);
  EXPECT_TRUE(r.passed);
}

TEST(Scenarios, AffineFolnerReportsHalfTranslationRow) {
  const auto r = run_scenario(resolve_config("affine-folner", Config{}));
  EXPECT_TRUE(r.passed);
  bool found = false;
  for (const auto& row : r.results["defects"]) {
    if (row["element"] == "(1,1/2)" && row["n"] == 3) {
      found = true;
      EXPECT_NEAR(row["defect2"].get<double>(), 1.0, 1e-9);
    }
    EXPECT_LE(row["abs_error"].get<double>(), 1e-9);
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(r.leaked_mass, 0.0);
}

TEST(Scenarios, MooreRowsFollowCheckpoints) {
  const auto c = resolve_config("moore-s3", Config::parse_text("horizon = 400\npaths = 6\nrep = sign"));
  const auto r = run_scenario(c);
  ASSERT_EQ(r.ratios.size(), 4u * 6u * 4u);
  EXPECT_EQ(r.ratios.front().checkpoint, 50u);
  EXPECT_EQ(r.ratios[3].checkpoint, 400u);
  EXPECT_EQ(r.ratios.front().series, "sign/power:0.25");
  EXPECT_EQ(r.results["rate_tests"].size(), 4u);
}

TEST(CheckCommand, ExitCodes) {
  EXPECT_EQ(check_quietly("quotient-lemma"), kOk);
  EXPECT_EQ(check_quietly("regular-z"), kOk);
  EXPECT_EQ(check_quietly("affine-folner"), kOk);

  const auto dir = scratch("exit-codes");
  EXPECT_EQ(check_quietly(write_config(dir, "scenario = regular-z\nseed = 1\natom 1/2\n").string()), kUsage);
  EXPECT_EQ(check_quietly(write_config(dir, "scenario = regular-z\natom = 1 1\n").string()), kUsage);
  EXPECT_EQ(check_quietly((dir / "missing.conf").string()), kUsage);
  EXPECT_EQ(check_quietly("not-a-preset"), kUsage);
  EXPECT_EQ(check_quietly(write_config(dir, "preset = affine-folner\noverflow = clamp\nwindow_margin = 0\n").string()),
            kNumerical);
  EXPECT_EQ(check_quietly(write_config(dir, "preset = affine-folner\nwindow_margin = 0\n").string()), kNumerical);
  EXPECT_EQ(check_quietly(write_config(dir, "preset = regular-z\nratio_tolerance = 0.00001\n").string()),
            kCheckFailed);
}

TEST(RunCommand, WritesProvenancedArtifacts) {
  const auto dir = scratch("run");
  ::setenv("GRWALK_OUTPUT_DIR", dir.c_str(), 1);
  std::ostringstream out, err;
  EXPECT_EQ(run_command("quotient-lemma", out, err), kOk);
  ::unsetenv("GRWALK_OUTPUT_DIR");

  const auto manifest = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["preset"], "quotient-lemma");
  EXPECT_EQ(manifest["seed"], "7");
  EXPECT_EQ(manifest["version"], kVersion);
  EXPECT_EQ(manifest["modules"].size(), 7u);
  EXPECT_EQ(manifest["config"]["group"], "S3");

  std::istringstream curves(slurp(dir / "curves.csv"));
  std::string line;
  std::getline(curves, line);
  EXPECT_EQ(line, std::string("# grwalk ") + kVersion + " preset=quotient-lemma seed=7");
  std::getline(curves, line);
  EXPECT_EQ(line, "series,n,value");
  EXPECT_EQ(slurp(dir / "ratios.csv"), "series,path,checkpoint,maxRatio\n");

  const auto verdict = json::parse(slurp(dir / "verdict.json"));
  EXPECT_TRUE(verdict["passed"].get<bool>());
  EXPECT_EQ(verdict["preset"], "quotient-lemma");
  EXPECT_TRUE(verdict["results"]["pathwise_equal"].get<bool>());
  EXPECT_TRUE(verdict.contains("thresholds"));
}

TEST(RunCommand, IdenticalConfigGivesIdenticalBytes) {
  const auto a = scratch("det-a"), b = scratch("det-b");
  const std::string text = "preset = moore-s3\nhorizon = 800\npaths = 20\nthreads = ";
  std::ostringstream out, err;
  run_command(write_config(a, text + "1\noutput_dir = " + a.string() + "\n").string(), out, err);
  run_command(write_config(b, text + "1\noutput_dir = " + b.string() + "\n").string(), out, err);
  for (const char* file : {"curves.csv", "ratios.csv"}) EXPECT_EQ(slurp(a / file), slurp(b / file)) << file;
  const auto va = json::parse(slurp(a / "verdict.json")), vb = json::parse(slurp(b / "verdict.json"));
  EXPECT_EQ(va, vb);
}

TEST(RunCommand, ThreadCountDoesNotChangeResults) {
  const auto base = resolve_config("moore-q8", Config::parse_text("horizon = 600\npaths = 13"));
  const auto one = run_scenario(base.overlay(Config::parse_text("threads = 1")));
  const auto many = run_scenario(base.overlay(Config::parse_text("threads = 4")));
  ASSERT_EQ(one.curves.size(), many.curves.size());
  for (std::size_t i = 0; i < one.curves.size(); ++i) EXPECT_EQ(one.curves[i].value, many.curves[i].value);
  EXPECT_EQ(one.results, many.results);
}

}  // namespace
}  // namespace grwalk::experiment
