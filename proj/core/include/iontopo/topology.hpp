#pragma once

#include <vector>

#include "iontopo/spectra.hpp"

namespace iontopo {

// Sign convention: Berry connection A = i <u|grad u>, so that a band whose
// curvature integrates to -2 pi has Chern number -1.

// Cumulative Chern number of the lowest `occupied` bands from the velocity
// matrix elements, as a Riemann sum over a grid_n x grid_n grid. Throws
// GapClosedError when the occupied/empty spacing drops below 1e-6.
double chern_tknn(const BlochModel& model, const ModelParams& p, int occupied, int grid_n,
                  const Vec2& offset = Vec2::Zero());
double chern_tknn(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u, int occupied,
                  int grid_n);

// Link-variable (plaquette) Chern number of the lowest `occupied` bands.
// Throws NumericalError when a link overlap determinant is below 1e-12.
int chern_fhs(const BlochModel& model, const ModelParams& p, int occupied, int grid_n,
              const Vec2& offset = Vec2::Zero());
int chern_fhs(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u, int occupied,
              int grid_n);

struct ChernOptions {
  int grid_n = 40;
  int max_grid_n = 160;
  bool auto_refine = true;
  double residual_limit = 0.05;
  double grouping_tolerance = kDefaultGroupingTolerance;
  Vec2 offset = Vec2::Zero();
};

struct ChernResult {
  ModelParams params;
  int grid_n = 0;
  std::vector<BandGroup> groups;
  std::vector<bool> merged;          // per group: more than one band
  std::vector<GapWindow> gaps;       // per boundary between groups
  std::vector<bool> gap_open;        // indirect gap window non-empty
  std::vector<bool> gap_computable;  // direct spacing above 1e-6
  std::vector<double> cumulative_raw;  // TKNN, per boundary
  std::vector<int> cumulative_fhs;     // link variables, per boundary
  std::vector<double> per_group_raw;   // differenced TKNN sums
  std::vector<int> per_group;          // reported integers (link variables)
  std::vector<double> residuals;       // |raw - round(raw)| per boundary
  bool method_agreement = false;

  double max_residual() const;
};

ChernResult band_chern_numbers(const BlochModel& model, const ModelParams& p,
                               const ChernOptions& options = {});
ChernResult band_chern_numbers(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u,
                               const ChernOptions& options = {});

}  // namespace iontopo
