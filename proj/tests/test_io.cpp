#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fga/error.hpp"
#include "fga/io.hpp"

using namespace fga;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fgap_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}
}  // namespace

TEST(PotentialJson, RoundTrip) {
  const auto V = saturated(quadratic({0.5, 0.0}, {1.0, 2.0}), 16.0, 1.0);
  const json j = to_json(*V);
  const auto back = potential_from_json(j);
  EXPECT_EQ(to_json(*back), j);
  const std::vector<double> x{1.0, -0.5};
  EXPECT_DOUBLE_EQ(evaluate(*back, x), evaluate(*V, x));
}

TEST(PotentialJson, StrictKeys) {
  EXPECT_THROW(potential_from_json(json{{"type", "quadratic"}, {"center", {0.0}}, {"curvature", {1.0}}, {"curvatur", 1}}),
               ConfigError);
  EXPECT_THROW(potential_from_json(json{{"type", "banana"}}), ConfigError);
  EXPECT_THROW(potential_from_json(json{{"type", "quadratic"}, {"center", {0.0}}, {"curvature", {-1.0}}}), ConfigError);
}

TEST(DrumJson, BareListAndObject) {
  const json planes = json::array({{{"a", {1, 0}}, {"b", 1}}, {{"a", {-1, 0}}, {"b", 0}},
                                    {{"a", {0, 1}}, {"b", 1}}, {{"a", {0, -1}}, {"b", 0}}});
  EXPECT_EQ(drum_file_from_json(planes).planes.size(), 4u);
  const auto f = drum_file_from_json(json{{"planes", planes}, {"reference", 19.7}});
  ASSERT_TRUE(f.reference.has_value());
  EXPECT_DOUBLE_EQ(*f.reference, 19.7);
  EXPECT_THROW(drum_file_from_json(json{{"planes", planes}, {"refrence", 1}}), ConfigError);
}

TEST(ResultJson, RoundTripEquality) {
  ResultRecord r;
  r.command = "spectrum";
  r.lambda0_estimate = 1.25;
  r.checks["x"] = true;
  r.deltas["d"] = -0.1;
  r.artifacts = {"result.json"};
  EXPECT_EQ(result_from_json(to_json(r)), r);
  EXPECT_TRUE(r.pass());
  r.checks["y"] = false;
  EXPECT_FALSE(r.pass());
  json bad = to_json(r);
  bad["extra"] = 1;
  EXPECT_THROW(result_from_json(bad), ConfigError);
}

TEST(ResultJson, RejectsNonFinite) {
  json j = {{"a", {1.0, std::numeric_limits<double>::quiet_NaN()}}};
  EXPECT_THROW(require_finite(j), NonFiniteValue);
  EXPECT_NO_THROW(require_finite(json{{"a", 1.0}}));
}

TEST(JsonFile, ParseErrorNamesLocation) {
  const fs::path dir = scratch("parse");
  std::ofstream(dir / "bad.json") << "{\n  \"a\": 1,\n  \"b\": ]\n}\n";
  try {
    read_json_file(dir / "bad.json");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(read_json_file(dir / "missing.json"), ConfigError);
}

TEST(Wavefunction, InlineAndBinary) {
  const fs::path dir = scratch("wave");
  std::mt19937_64 rng(9);
  const WaveState small = WaveState::random(build_grid(1, 64, 2.0), rng);
  EXPECT_EQ(write_wavefunction(dir, "small", small).size(), 1u);
  const WaveState s2 = read_wavefunction(dir / "small.json");
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(s2[i], small[i]);

  const WaveState big = WaveState::random(build_grid(2, 128, 2.0), rng);
  const auto files = write_wavefunction(dir, "big", big);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(fs::file_size(dir / "big.bin"), big.size() * 8);
  const WaveState b2 = read_wavefunction(dir / "big.json");
  EXPECT_EQ(b2.grid(), big.grid());
  for (std::size_t i = 0; i < big.size(); i += 97) EXPECT_NEAR(std::abs(b2[i] - big[i]), 0.0, 1e-6);

  // corrupt one byte: checksum must catch it
  {
    std::fstream f(dir / "big.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    f.put('\x7f');
  }
  EXPECT_THROW(read_wavefunction(dir / "big.json"), ConfigError);
}

TEST(Csv, XyColumns) {
  const fs::path dir = scratch("csv");
  write_xy_csv(dir / "xy.csv", "s", "gap", {0.0, 0.5}, {1.0, 2.0});
  std::ifstream in(dir / "xy.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "s,gap");
  EXPECT_EQ(row, "0,1");
  EXPECT_THROW(write_xy_csv(dir / "bad.csv", "a", "b", {0.0}, {1.0, 2.0}), InvalidArgument);
}
