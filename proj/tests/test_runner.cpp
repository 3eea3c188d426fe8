#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "fga/error.hpp"
#include "fga/runner.hpp"

using namespace fga;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fgap_test_runner_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

const char* kSquare =
    R"({"planes": [{"a": [1, 0], "b": 1}, {"a": [-1, 0], "b": 0}, {"a": [0, 1], "b": 1}, {"a": [0, -1], "b": 0}]})";

std::string read_all(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Config, MinimalDrumGetsDefaults) {
  const fs::path dir = scratch("minimal");
  write(dir / "square.json", kSquare);
  const auto m = parse_config(write(dir / "run.json", R"({"command": "drum", "instance": "square.json"})"));
  EXPECT_EQ(m.command, Command::drum);
  EXPECT_EQ(m.instance, dir / "square.json");
  EXPECT_EQ(m.parameters.at("N"), 128);
  EXPECT_EQ(m.parameters.at("mode"), "direct");
  EXPECT_EQ(m.constants.at("sigma_constant"), 1.0);
  for (const auto& name : parameter_names(Command::drum)) EXPECT_TRUE(m.parameters.contains(name)) << name;
}

TEST(Config, TypoInConstantIsNamed) {
  const fs::path dir = scratch("typo");
  write(dir / "square.json", kSquare);
  const auto p = write(dir / "run.json",
                       R"({"command": "drum", "instance": "square.json", "constants": {"sigma_constnat": 2}})");
  try {
    parse_config(p);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma_constnat"), std::string::npos);
  }
}

TEST(Config, NonPowerOfTwoRejected) {
  const fs::path dir = scratch("pow2");
  write(dir / "square.json", kSquare);
  const auto p = write(dir / "run.json", R"({"command": "drum", "instance": "square.json", "parameters": {"N": 100}})");
  EXPECT_THROW(parse_config(p), ConfigError);
}

TEST(Config, StrictTopLevelAndTypes) {
  const fs::path dir = scratch("strict");
  EXPECT_THROW(parse_config(write(dir / "a.json", R"({"command": "verify", "sed": 3})")), ConfigError);
  EXPECT_THROW(parse_config(write(dir / "b.json", R"({"command": "verify", "parameters": {"suite": 3}})")), ConfigError);
  EXPECT_THROW(parse_config(write(dir / "c.json", R"({"command": "verify", "parameters": {"N": 64}})")), ConfigError);
  EXPECT_THROW(parse_config(write(dir / "d.json", R"({"command": "drum", "instance": "nope.json"})")), ConfigError);
  EXPECT_THROW(parse_config(write(dir / "e.json", R"({"command": "fga"})"), Command::drum), ConfigError);
}

TEST(Override, TypedAssignments) {
  RunManifest m = default_manifest(Command::fga);
  m.parameters["potential"] = json{{"type", "isotropic_quadratic"}, {"n", 1}, {"curvature", 1.0}};
  apply_override(m, "N=64");
  apply_override(m, "measure=sample");
  apply_override(m, "t_sweep=[1,2]");
  apply_override(m, "time_constant=2.5");
  apply_override(m, "seed=42");
  EXPECT_EQ(m.parameters.at("N"), 64);
  EXPECT_EQ(m.parameters.at("measure"), "sample");
  EXPECT_EQ(m.constants.at("time_constant"), 2.5);
  EXPECT_EQ(m.seed, 42u);
  EXPECT_NO_THROW(validate_manifest(m));
  EXPECT_THROW(apply_override(m, "bogus=1"), ConfigError);
  EXPECT_THROW(apply_override(m, "N=100"), ConfigError);
  EXPECT_THROW(apply_override(m, "suite=all"), ConfigError);
  EXPECT_THROW(apply_override(m, "noequals"), ConfigError);
}

TEST(Run, VerifyAliasingWritesOnlyIntoOutput) {
  const fs::path dir = scratch("verify");
  RunManifest m = default_manifest(Command::verify);
  apply_override(m, "suite=aliasing");
  m.output = dir / "out";
  const auto outcome = run(m);
  EXPECT_EQ(outcome.exit_code, kExitPass);
  std::set<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files.insert(e.path().filename().string());
  EXPECT_EQ(files, std::set<std::string>{"out"});
  for (const char* f : {"result.json", "probes.json", "summary.csv"}) EXPECT_TRUE(fs::exists(m.output / f)) << f;
  const json j = read_json_file(m.output / "result.json");
  EXPECT_EQ(j.at("schema_version"), "1");
  EXPECT_EQ(result_from_json(j), outcome.record);
}

TEST(Run, SpectrumIsDeterministic) {
  const fs::path dir = scratch("determinism");
  RunManifest m = default_manifest(Command::spectrum);
  m.parameters["potential"] = json{{"type", "isotropic_quadratic"}, {"n", 1}, {"curvature", 1.0}};
  apply_override(m, "N=64");
  apply_override(m, "reference=1.0");
  m.output = dir / "a";
  const auto a = run(m);
  m.output = dir / "b";
  const auto b = run(m);
  EXPECT_EQ(a.exit_code, kExitPass);
  EXPECT_NEAR(*a.record.lambda0_estimate, 1.0, 1e-8);
  json ja = read_json_file(dir / "a" / "result.json");
  json jb = read_json_file(dir / "b" / "result.json");
  ja.erase("timings");
  jb.erase("timings");
  ja["inputs"].erase("output");
  jb["inputs"].erase("output");
  EXPECT_EQ(ja.dump(), jb.dump());
  EXPECT_EQ(read_all(dir / "a" / "ground_state.json"), read_all(dir / "b" / "ground_state.json"));
}

TEST(Run, ComponentErrorNamesStage) {
  const fs::path dir = scratch("stage");
  RunManifest m = default_manifest(Command::spectrum);
  // tabulated on an 8-point grid, run on the default 128-point grid
  m.parameters["potential"] = json{{"type", "tabulated"}, {"grid", {{"n", 1}, {"N", 8}, {"L", 1.0}}},
                                   {"values", std::vector<double>(8, 1.0)}};
  m.output = dir / "out";
  const auto outcome = run(m);
  EXPECT_EQ(outcome.exit_code, kExitCheckFailure);
  ASSERT_FALSE(outcome.record.error.is_null());
  EXPECT_EQ(outcome.record.error.at("stage"), "hamiltonian");
}
