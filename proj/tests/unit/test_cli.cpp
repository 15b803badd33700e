#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "iontopo/cli/run.hpp"

using namespace iontopo;
using namespace iontopo::cli;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("iontopo_cli_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, MinimalBandsConfigGetsDefaults) {
  const RunConfig c = parse_config(R"({"command": "bands", "model": {"beta_x": 0.02, "v_b": -0.1}})");
  EXPECT_EQ(c.command, Command::Bands);
  EXPECT_EQ(c.lattice.geometry, Geometry::Torus);
  EXPECT_EQ(c.lattice.n1, 1);
  EXPECT_EQ(c.numerics.grid_n, 40);
  EXPECT_DOUBLE_EQ(c.numerics.cutoff_radius, 12.0);
  EXPECT_DOUBLE_EQ(c.effective_model().gamma_y, 1.0);
  EXPECT_TRUE(c.output.csv && c.output.json);
}

TEST(Config, CommandDefaultLattices) {
  const RunConfig cyl = parse_config(R"({"command": "cylinder", "model": {}})");
  EXPECT_EQ(cyl.lattice.geometry, Geometry::Cylinder);
  EXPECT_EQ(cyl.lattice.n1 * cyl.lattice.n2 * 2, 400);
  const RunConfig plane = parse_config(R"({"command": "edges", "model": {}})");
  EXPECT_EQ(plane.lattice.options.plane_shape, PlaneShape::Hexagon);
}

TEST(Config, ConflictingBlocksNameBothKeys) {
  const std::string msg = error_of(R"({"command": "bands", "model": {"beta_x": 0.02}, "physical": {"rabi_y_hz": 4e5}})");
  EXPECT_NE(msg.find("model.beta_x"), std::string::npos) << msg;
  EXPECT_NE(msg.find("physical.rabi_y_hz"), std::string::npos) << msg;
}

TEST(Config, UnknownKeysAndBadValuesCarryPath) {
  EXPECT_NE(error_of(R"({"command": "bands", "model": {}, "numerics": {"grd_n": 3}})").find("numerics.grd_n"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"command": "bands", "model": {}, "lattice": {"n1": "x"}})").find("lattice.n1"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"command": "cylinder", "model": {}, "lattice": {"geometry": "plane"}})")
                .find("lattice.geometry"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"command": "nope"})").find("command"), std::string::npos);
  EXPECT_NE(error_of(R"({"command": "bands"})").find("model"), std::string::npos);
  EXPECT_NE(error_of(R"({"command": "params", "model": {}})").find("physical"), std::string::npos);
  EXPECT_NE(error_of("{").find("malformed"), std::string::npos);
  EXPECT_NE(error_of(R"({"command": "bands", "model": {"beta_x": -0.1}})").find("model"), std::string::npos);
}

TEST(Config, RoundTripKeepsHash) {
  const RunConfig a = parse_config(R"({
    "command": "drive", "seed": 5,
    "physical": {"eta": 0.4, "rabi_y_hz": 6e5, "spacing_um": 60},
    "experiment": {"drive": {"omega_d": [0.7, 1.0], "t_f": 200}},
    "output": {"formats": ["json"]}})");
  const RunConfig b = parse_config(effective_config(a));
  EXPECT_EQ(effective_config(a), effective_config(b));
  EXPECT_EQ(config_hash(a), config_hash(b));
  const RunConfig other = parse_config(R"({"command": "drive", "seed": 6, "physical": {"eta": 0.4}})");
  EXPECT_NE(config_hash(a), config_hash(other));
}

TEST(Run, DeterministicOutputs) {
  const RunConfig c = parse_config(R"({
    "command": "drive", "seed": 1,
    "lattice": {"n1": 2, "n2": 2},
    "model": {"beta_x": 0.04, "v_b": -0.1},
    "experiment": {"drive": {"omega_d": [0.7], "t_f": 50}}})");
  const auto d1 = scratch("a");
  const auto d2 = scratch("b");
  const RunReport r1 = run(c, d1.string());
  const RunReport r2 = run(c, d2.string());
  EXPECT_EQ(r1.outputs_digest, r2.outputs_digest);
  ASSERT_EQ(r1.files.size(), 2u);
  for (const auto& f : r1.files) EXPECT_EQ(slurp(d1 / f), slurp(d2 / f));
  const std::string density = slurp(d1 / "density_0.7.csv");
  EXPECT_EQ(density.rfind("site_index,x,y,rho,rho_bar,is_boundary\n", 0), 0u);
  const std::string manifest = slurp(d1 / "manifest.json");
  EXPECT_NE(manifest.find(r1.config_hash), std::string::npos);
  EXPECT_NE(manifest.find("\"schema_version\": 1"), std::string::npos);
  EXPECT_NE(slurp(d1 / "sweep.json").find("boundary_fraction"), std::string::npos);
}

TEST(Run, ChernAtReferencePoint) {
  const RunConfig c = parse_config(R"({"command": "chern", "model": {"beta_x": 0.02, "v_b": -0.2},
                                       "output": {"formats": ["csv"]}})");
  const auto d = scratch("chern");
  run(c, d.string());
  const std::string csv = slurp(d / "chern.csv");
  EXPECT_NE(csv.find("0.02,-0.2,0,-1,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("0.02,-0.2,1,1,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("0.02,-0.2,2,0,"), std::string::npos) << csv;
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), 2);
  EXPECT_EQ(exit_code_for(std::invalid_argument("x")), 2);
  EXPECT_EQ(exit_code_for(GapClosedError("x", 1, 0.0)), 3);
  EXPECT_EQ(exit_code_for(IoError("x")), 4);
  const RunConfig c = parse_config(R"({"command": "params", "physical": {}})");
  try {
    run(c, "/proc/iontopo_cannot_exist");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(exit_code_for(e), 4);
  }
}
