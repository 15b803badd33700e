#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "iontopo/spectra.hpp"

namespace iontopo {

struct EdgeOptions {
  int shell_width = 2;
  double threshold = 0.5;
  double margin = 0.02;  // fraction of the window width removed on each side
  int grid_n = 40;
  double grouping_tolerance = kDefaultGroupingTolerance;
};

// Bulk gap windows of the torus band structure, shrunk by margin * width.
std::vector<Interval> bulk_gap_windows(const BlochModel& model, const ModelParams& p,
                                       const EdgeOptions& options = {});
// Same, for the primitive torus built from the given lattice and coupling options.
std::vector<Interval> bulk_gap_windows(const ModelParams& p, const CouplingOptions& coupling,
                                       const LatticeOptions& lattice = {},
                                       const EdgeOptions& options = {});

enum class EdgeSide { None, Bottom, Top };
const char* to_string(EdgeSide side);

struct EdgeMode {
  int index = 0;  // eigenvector column in the spectrum
  double energy = 0.0;
  double edge_weight = 0.0;
  EdgeSide side = EdgeSide::None;
};

struct EdgeModeSet {
  int window_id = 0;
  Interval window;
  int in_gap_count = 0;  // all modes in the window
  std::vector<EdgeMode> modes;  // edge-classified modes
  int shell_width = 2;
  double threshold = 0.5;
};

// Per-site membership in the boundary shell for the sites a spectrum is
// expressed in: all lattice sites for a plane, the strip for a cylinder.
std::vector<bool> spectrum_shell(const Lattice& lat, int dim, int shell_width);

// Weight sum_{i in shell, alpha} |u_{i alpha}|^2 of one mode.
double edge_weight(const Spectrum& spec, int mode, const std::vector<bool>& shell);

std::vector<EdgeModeSet> find_edge_modes(const Spectrum& spec, const Lattice& lat,
                                         const std::vector<Interval>& windows, int shell_width = 2,
                                         double threshold = 0.5);

struct ProfileEntry {
  int site_index = 0;
  Vec2 position = Vec2::Zero();
  double dens_x = 0.0;
  double dens_y = 0.0;
};

std::vector<ProfileEntry> localization_profile(const Spectrum& spec, const Lattice& lat, int mode);

// In-gap branch crossing the centre of a window on the cylinder.
struct EdgeBranch {
  int band_index = 0;
  double k = 0.0;  // midpoint of the bracketing k interval
  double slope = 0.0;
  EdgeSide side = EdgeSide::None;
  double edge_weight = 0.0;
};

struct EdgeVelocity {
  Interval window;
  std::vector<EdgeBranch> branches;
  int chirality_bottom = 0;  // sum of slope signs of branches on each side
  int chirality_top = 0;
  // Nonzero, opposite net chirality on the two boundaries.
  bool counter_propagating() const {
    return chirality_bottom != 0 && chirality_bottom == -chirality_top;
  }
};

// Requires bands computed with keep_modes on a cylinder. Never throws for an
// empty result.
EdgeVelocity edge_crossings(const Bands& bands, const Lattice& lat, const Interval& window,
                            int shell_width = 2);
// As edge_crossings, but throws NoEdgeBranch when no branch crosses the window.
EdgeVelocity edge_velocity(const Bands& bands, const Lattice& lat, const Interval& window,
                           int shell_width = 2);

class NoEdgeBranch : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct TrialResult {
  std::uint64_t seed = 0;
  int in_gap_count = 0;
  int edge_count = 0;
  double max_edge_weight = 0.0;
  std::vector<int> edge_count_per_window;
};

struct RobustnessReport {
  int trials = 0;
  std::vector<TrialResult> per_trial;
  double persistence_rate = 0.0;
  // Fraction of trials with an edge mode in every window.
  double all_windows_rate = 0.0;
};

// Trial t uses seed spec.seed + t.
RobustnessReport disorder_robustness(const Lattice& plane, const ModelParams& p, const CouplingMatrix& u,
                                     const DisorderSpec& spec, int trials,
                                     const std::vector<Interval>& windows, int shell_width = 2,
                                     double threshold = 0.5);

}  // namespace iontopo
