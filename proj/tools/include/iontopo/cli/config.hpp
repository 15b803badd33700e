#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iontopo/dynamics.hpp"
#include "iontopo/edges.hpp"
#include "iontopo/physical.hpp"
#include "iontopo/topology.hpp"

namespace iontopo::cli {

enum class Command { Bands, Chern, Cylinder, Plane, Edges, Disorder, Drive, FlatnessMap, Params };

const char* to_string(Command c);

struct LatticeBlock {
  Geometry geometry = Geometry::Torus;
  int n1 = 1;
  int n2 = 1;
  LatticeOptions options;
};

// Laboratory inputs in the units used by the config file.
struct PhysicalBlock {
  double mass_amu = 40.0;
  double omega_x_hz = 1e5;
  double omega_y_hz = 1e5;
  double rabi_x_hz = 1e5;
  double rabi_y_hz = 5e5;
  double wavevector = 0.0;  // 1/m
  double spacing_um = 50.0;
  double charge_e = 1.0;

  PhysicalParams to_params() const;
};

struct NumericsBlock {
  int grid_n = 40;
  int max_grid_n = 160;
  bool auto_refine = true;
  int cylinder_points = 200;
  double cutoff_radius = 12.0;
  bool nn_only = false;
  bool include_onsite_coulomb = false;
  double grouping_tolerance = kDefaultGroupingTolerance;
  double residual_limit = 0.05;
  int shell_width = 2;
  double edge_threshold = 0.5;
  double window_margin = 0.02;
  double ode_dt = 0.0;  // 0 disables the integration check
};

struct DisorderBlock {
  DisorderSpec spec;
  int trials = 20;
};

struct DriveBlock {
  std::vector<double> omega_d{0.6, 0.7, 1.0, 2.0};
  double t_f = 1000.0;
  double amplitude = 1.0;
  std::vector<double> profile;
};

struct SweepBlock {
  Interval v_b_range{-0.3, -0.05};
  Interval beta_range{0.01, 0.05};
  int v_b_points = 20;
  int beta_points = 20;
};

struct ExperimentBlock {
  DisorderBlock disorder;
  DriveBlock drive;
  SweepBlock sweep;
  std::vector<std::pair<double, double>> points;  // (beta_x, v_b) for chern
  std::vector<double> profile_energies;           // edges: modes nearest these energies
};

struct OutputBlock {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct RunConfig {
  Command command = Command::Bands;
  std::uint64_t seed = 0;
  LatticeBlock lattice;
  std::optional<ModelParams> model;
  std::optional<PhysicalBlock> physical;
  NumericsBlock numerics;
  ExperimentBlock experiment;
  OutputBlock output;

  // Model parameters, mapped from the physical block when that is present.
  ModelParams effective_model() const;
  CouplingOptions coupling() const;
};

// Parses JSON text. Throws ConfigError naming the offending key path.
RunConfig parse_config(const std::string& text);

// Fully expanded configuration as canonical JSON text (keys sorted).
std::string effective_config(const RunConfig& c);

// FNV-1a 64 of the canonical configuration.
std::uint64_t config_hash(const RunConfig& c);
std::string hex_digest(std::uint64_t h);
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace iontopo::cli
