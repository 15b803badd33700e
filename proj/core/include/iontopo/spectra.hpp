#pragma once

#include <optional>
#include <vector>

#include "iontopo/hamiltonian.hpp"

namespace iontopo {

// Separates "touching" from "gapped" adjacent bands (units of omega_tilde_x).
inline constexpr double kDefaultGroupingTolerance = 0.015;

struct Spectrum {
  RVector energies;  // ascending
  CMatrix modes;     // column l is eigenvector u^l
  Representation source = Representation::RealSpace;
  Vec2 momentum = Vec2::Zero();

  Eigen::Index size() const { return energies.size(); }
  // max_l |H u_l - E_l u_l|
  double residual(const CMatrix& h) const;
};

// Full hermitian decomposition. Each eigenvector is phase fixed so that its
// largest-magnitude component is real and positive (first index on ties).
Spectrum eigensolve(const HamiltonianMatrix& h);
Spectrum eigensolve(const CMatrix& h, Representation source = Representation::RealSpace);
// Eigenvalues only, ascending.
RVector eigenvalues(const CMatrix& h);

// Throws NumericalError if ||H - H^dagger||_max exceeds tol.
void require_hermitian(const CMatrix& h, double tol = 1e-10);

struct BandGroup {
  int first = 0;  // inclusive band indices
  int last = 0;
  int size() const { return last - first + 1; }
};

struct Bands {
  Geometry geometry = Geometry::Torus;
  int grid_n = 0;
  std::vector<Vec2> k_points;  // cylinder: (k_x, 0)
  Eigen::MatrixXd energies;    // rows: k points, cols: bands ascending
  std::vector<CMatrix> modes;  // optional eigenvectors per k
  Eigen::MatrixXd symmetry_energies;  // torus: rows at Gamma, M and K points
  std::vector<BandGroup> groups;
  double grouping_tolerance = kDefaultGroupingTolerance;

  int num_bands() const { return static_cast<int>(energies.cols()); }
  int num_k() const { return static_cast<int>(energies.rows()); }
  // Grid rows followed by the high-symmetry rows; band extrema and gaps use these.
  Eigen::MatrixXd sampled_energies() const;
  double min_spacing(int band) const;  // min over sampled k of E_{band+1} - E_band
};

struct BandOptions {
  int grid_n = 40;             // torus: grid_n x grid_n
  int cylinder_points = 200;   // cylinder: points in [-pi/|a1|, pi/|a1|)
  double grouping_tolerance = kDefaultGroupingTolerance;
  bool keep_modes = false;
  Vec2 offset = Vec2::Zero();  // torus grid shift in units of a grid cell
};

// Torus grid points k = ((i + o1) b1 + (j + o2) b2) / n, row index i * n + j.
std::vector<Vec2> torus_grid(const std::array<Vec2, 2>& reciprocal, int n, const Vec2& offset);

// Gamma, the three M points and the two K points. Band touchings at K are
// missed by grids with n not divisible by 3.
std::vector<Vec2> high_symmetry_points(const std::array<Vec2, 2>& reciprocal);

// Adjacent bands share a group when the window between them, min_k E_{b+1} -
// max_k E_b, is narrower than the tolerance.
std::vector<BandGroup> group_bands(const Eigen::MatrixXd& energies, double tolerance);

Bands band_structure(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u,
                     const BandOptions& options = {});
Bands band_structure(const BlochModel& model, const ModelParams& p, const BandOptions& options = {});
Bands band_structure(const CylinderModel& model, const ModelParams& p, const BandOptions& options = {});

struct GapWindow {
  int below_group = 0;
  double low = 0.0;   // max of the lower group's top band
  double high = 0.0;  // min of the upper group's bottom band
  bool open() const { return high > low; }
  double width() const { return open() ? high - low : 0.0; }
};

std::vector<GapWindow> band_gaps(const Bands& b);

enum class FlatnessStatus { Ok, FlatBand, GapClosed };

struct FlatnessResult {
  int band_index = 0;  // group index
  double bandwidth = 0.0;
  double gap = 0.0;
  double flatness = 0.0;  // +inf for FlatBand, NaN for GapClosed
  FlatnessStatus status = FlatnessStatus::Ok;
};

FlatnessResult flatness(const Bands& b, int group_index);

// Coulomb matrices C(k) on a torus grid; H(k) = compose(p, C(k)).
struct BlochGrid {
  std::vector<Vec2> k_points;
  std::vector<CMatrix> coulomb;
  std::vector<CMatrix> symmetry_coulomb;  // at high_symmetry_points
  int grid_n = 0;
};

BlochGrid make_bloch_grid(const BlochModel& model, int grid_n, const Vec2& offset = Vec2::Zero());
Bands band_structure(const BlochGrid& grid, const ModelParams& p,
                     double grouping_tolerance = kDefaultGroupingTolerance);

struct FlatnessMapSpec {
  Interval v_b_range{-0.3, -0.05};
  Interval beta_range{0.01, 0.05};
  int v_b_points = 20;
  int beta_points = 20;
  int grid_n = 40;
  double gamma_y = 1.0;
  double grouping_tolerance = kDefaultGroupingTolerance;
  CouplingOptions coupling;
  LatticeOptions lattice;
};

struct FlatnessMapEntry {
  double v_b = 0.0;
  double beta_x = 0.0;
  FlatnessResult result;
};

// Flatness of the lowest band group over the grid, ordered with beta_x
// varying fastest.
std::vector<FlatnessMapEntry> flatness_map(const FlatnessMapSpec& spec);

// Largest finite flatness in a map, or nullopt if none is finite.
std::optional<FlatnessMapEntry> max_flatness(const std::vector<FlatnessMapEntry>& map);

}  // namespace iontopo
