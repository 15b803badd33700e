#include "iontopo/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace iontopo {

namespace {

void fix_phases(CMatrix& modes) {
  for (Eigen::Index l = 0; l < modes.cols(); ++l) {
    auto col = modes.col(l);
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      const double a = std::abs(col(i));
      if (a > best_abs + 1e-12) {
        best_abs = a;
        best = i;
      }
    }
    if (best_abs > 0.0) col *= std::conj(col(best)) / best_abs;
  }
}

double sample_range(const Interval& r, int points, int i) {
  if (points <= 1) return r.low;
  return r.low + (r.high - r.low) * i / (points - 1);
}

}  // namespace

void require_hermitian(const CMatrix& h, double tol) {
  if (h.rows() != h.cols()) throw NumericalError("eigensolve: matrix is not square");
  const double err = h.size() == 0 ? 0.0 : (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (!(err <= tol)) {
    throw NumericalError("eigensolve: matrix is not hermitian (deviation " + std::to_string(err) + ")");
  }
}

double Spectrum::residual(const CMatrix& h) const {
  const CMatrix r = h * modes - modes * energies.cast<Complex>().asDiagonal();
  return r.size() == 0 ? 0.0 : r.colwise().norm().maxCoeff();
}

Spectrum eigensolve(const CMatrix& h, Representation source) {
  require_hermitian(h);
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolve: decomposition failed");
  Spectrum s;
  s.energies = solver.eigenvalues();
  s.modes = solver.eigenvectors();
  s.source = source;
  fix_phases(s.modes);
  return s;
}

Spectrum eigensolve(const HamiltonianMatrix& h) {
  Spectrum s = eigensolve(h.matrix, h.representation);
  s.momentum = h.momentum;
  return s;
}

RVector eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolve: decomposition failed");
  return solver.eigenvalues();
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd Bands::sampled_energies() const {
  if (symmetry_energies.rows() == 0) return energies;
  Eigen::MatrixXd all(energies.rows() + symmetry_energies.rows(), energies.cols());
  all << energies, symmetry_energies;
  return all;
}

double Bands::min_spacing(int band) const {
  const Eigen::MatrixXd e = sampled_energies();
  return (e.col(band + 1) - e.col(band)).minCoeff();
}

std::vector<Vec2> torus_grid(const std::array<Vec2, 2>& reciprocal, int n, const Vec2& offset) {
  if (n < 1) throw std::invalid_argument("torus_grid: grid_n must be >= 1");
  std::vector<Vec2> ks;
  ks.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ks.push_back(((i + offset.x()) * reciprocal[0] + (j + offset.y()) * reciprocal[1]) / n);
    }
  }
  return ks;
}

std::vector<Vec2> high_symmetry_points(const std::array<Vec2, 2>& reciprocal) {
  // The thirds cover both K points for either choice of reciprocal basis angle.
  const std::array<std::array<double, 2>, 8> reduced = {{
      {0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}, {0.5, 0.5},
      {1.0 / 3.0, 2.0 / 3.0}, {2.0 / 3.0, 1.0 / 3.0}, {1.0 / 3.0, 1.0 / 3.0}, {2.0 / 3.0, 2.0 / 3.0},
  }};
  std::vector<Vec2> ks;
  for (const auto& r : reduced) ks.push_back(r[0] * reciprocal[0] + r[1] * reciprocal[1]);
  return ks;
}

std::vector<BandGroup> group_bands(const Eigen::MatrixXd& energies, double tolerance) {
  std::vector<BandGroup> groups;
  if (energies.cols() == 0) return groups;
  BandGroup current{0, 0};
  for (Eigen::Index b = 0; b + 1 < energies.cols(); ++b) {
    const double window = energies.col(b + 1).minCoeff() - energies.col(b).maxCoeff();
    if (window < tolerance) {
      current.last = static_cast<int>(b + 1);
    } else {
      groups.push_back(current);
      current = {static_cast<int>(b + 1), static_cast<int>(b + 1)};
    }
  }
  groups.push_back(current);
  return groups;
}

BlochGrid make_bloch_grid(const BlochModel& model, int grid_n, const Vec2& offset) {
  BlochGrid grid;
  grid.grid_n = grid_n;
  grid.k_points = torus_grid(model.reciprocal(), grid_n, offset);
  grid.coulomb.resize(grid.k_points.size());
  parallel_for(grid.k_points.size(), [&](std::size_t i) { grid.coulomb[i] = model.coulomb(grid.k_points[i]); });
  for (const Vec2& k : high_symmetry_points(model.reciprocal())) grid.symmetry_coulomb.push_back(model.coulomb(k));
  return grid;
}

namespace {

Bands bands_from_grid(const BlochGrid& grid, const ModelParams& p, double grouping_tolerance, bool parallel) {
  Bands b;
  b.geometry = Geometry::Torus;
  b.grid_n = grid.grid_n;
  b.k_points = grid.k_points;
  b.grouping_tolerance = grouping_tolerance;
  b.energies.resize(static_cast<Eigen::Index>(grid.k_points.size()), 4);
  auto row = [&](std::size_t i) {
    b.energies.row(static_cast<Eigen::Index>(i)) = eigenvalues(BlochModel::compose(p, grid.coulomb[i])).transpose();
  };
  if (parallel) {
    parallel_for(grid.k_points.size(), row);
  } else {
    for (std::size_t i = 0; i < grid.k_points.size(); ++i) row(i);
  }
  b.symmetry_energies.resize(static_cast<Eigen::Index>(grid.symmetry_coulomb.size()), 4);
  for (std::size_t i = 0; i < grid.symmetry_coulomb.size(); ++i) {
    b.symmetry_energies.row(static_cast<Eigen::Index>(i)) =
        eigenvalues(BlochModel::compose(p, grid.symmetry_coulomb[i])).transpose();
  }
  b.groups = group_bands(b.sampled_energies(), grouping_tolerance);
  return b;
}

}  // namespace

Bands band_structure(const BlochGrid& grid, const ModelParams& p, double grouping_tolerance) {
  p.validate();
  return bands_from_grid(grid, p, grouping_tolerance, true);
}

Bands band_structure(const BlochModel& model, const ModelParams& p, const BandOptions& options) {
  p.validate();
  Bands b;
  b.geometry = Geometry::Torus;
  b.grid_n = options.grid_n;
  b.k_points = torus_grid(model.reciprocal(), options.grid_n, options.offset);
  b.grouping_tolerance = options.grouping_tolerance;
  const auto nk = b.k_points.size();
  b.energies.resize(static_cast<Eigen::Index>(nk), 4);
  if (options.keep_modes) b.modes.resize(nk);
  parallel_for(nk, [&](std::size_t i) {
    const CMatrix h = model.hamiltonian(p, b.k_points[i]);
    if (options.keep_modes) {
      Spectrum s = eigensolve(h, Representation::Bloch);
      b.energies.row(static_cast<Eigen::Index>(i)) = s.energies.transpose();
      b.modes[i] = std::move(s.modes);
    } else {
      b.energies.row(static_cast<Eigen::Index>(i)) = eigenvalues(h).transpose();
    }
  });
  const auto symmetry = high_symmetry_points(model.reciprocal());
  b.symmetry_energies.resize(static_cast<Eigen::Index>(symmetry.size()), 4);
  for (std::size_t i = 0; i < symmetry.size(); ++i) {
    b.symmetry_energies.row(static_cast<Eigen::Index>(i)) = eigenvalues(model.hamiltonian(p, symmetry[i])).transpose();
  }
  b.groups = group_bands(b.sampled_energies(), options.grouping_tolerance);
  return b;
}

Bands band_structure(const CylinderModel& model, const ModelParams& p, const BandOptions& options) {
  p.validate();
  if (options.cylinder_points < 2) throw std::invalid_argument("band_structure: cylinder_points must be >= 2");
  Bands b;
  b.geometry = Geometry::Cylinder;
  b.grid_n = options.cylinder_points;
  b.grouping_tolerance = options.grouping_tolerance;
  const double a = model.period();
  for (int i = 0; i < options.cylinder_points; ++i) {
    b.k_points.emplace_back(-kPi / a + 2.0 * kPi * i / (options.cylinder_points * a), 0.0);
  }
  const auto nk = b.k_points.size();
  b.energies.resize(static_cast<Eigen::Index>(nk), 2 * model.strip_size());
  if (options.keep_modes) b.modes.resize(nk);
  parallel_for(nk, [&](std::size_t i) {
    const CMatrix h = model.hamiltonian(p, b.k_points[i].x());
    if (options.keep_modes) {
      Spectrum s = eigensolve(h, Representation::Cylinder);
      b.energies.row(static_cast<Eigen::Index>(i)) = s.energies.transpose();
      b.modes[i] = std::move(s.modes);
    } else {
      b.energies.row(static_cast<Eigen::Index>(i)) = eigenvalues(h).transpose();
    }
  });
  b.groups = group_bands(b.energies, options.grouping_tolerance);
  return b;
}

Bands band_structure(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u,
                     const BandOptions& options) {
  switch (lat.geometry()) {
    case Geometry::Torus:
      return band_structure(BlochModel(lat, u), p, options);
    case Geometry::Cylinder:
      return band_structure(CylinderModel(lat, u), p, options);
    case Geometry::Plane:
      break;
  }
  throw std::invalid_argument("band_structure: requires a torus or cylinder lattice");
}

std::vector<GapWindow> band_gaps(const Bands& b) {
  std::vector<GapWindow> gaps;
  const Eigen::MatrixXd e = b.sampled_energies();
  for (std::size_t g = 0; g + 1 < b.groups.size(); ++g) {
    GapWindow w;
    w.below_group = static_cast<int>(g);
    w.low = e.col(b.groups[g].last).maxCoeff();
    w.high = e.col(b.groups[g + 1].first).minCoeff();
    gaps.push_back(w);
  }
  return gaps;
}

FlatnessResult flatness(const Bands& b, int group_index) {
  if (group_index < 0 || group_index >= static_cast<int>(b.groups.size())) {
    throw std::invalid_argument("flatness: group index out of range");
  }
  const BandGroup& g = b.groups[static_cast<std::size_t>(group_index)];
  FlatnessResult r;
  r.band_index = group_index;
  const Eigen::MatrixXd e = b.sampled_energies();
  const auto block = e.middleCols(g.first, g.size());
  r.bandwidth = block.maxCoeff() - block.minCoeff();
  const auto gaps = band_gaps(b);
  if (group_index >= static_cast<int>(gaps.size()) || !gaps[static_cast<std::size_t>(group_index)].open()) {
    r.gap = 0.0;
    r.flatness = std::numeric_limits<double>::quiet_NaN();
    r.status = FlatnessStatus::GapClosed;
    return r;
  }
  r.gap = gaps[static_cast<std::size_t>(group_index)].width();
  if (r.bandwidth < 1e-12) {
    r.flatness = std::numeric_limits<double>::infinity();
    r.status = FlatnessStatus::FlatBand;
  } else {
    r.flatness = r.gap / r.bandwidth;
  }
  return r;
}

std::vector<FlatnessMapEntry> flatness_map(const FlatnessMapSpec& spec) {
  if (spec.v_b_points < 1 || spec.beta_points < 1) {
    throw std::invalid_argument("flatness_map: resolution must be >= 1");
  }
  const Lattice lat = build_lattice(Geometry::Torus, 1, 1, spec.lattice);
  const CouplingMatrix u = coulomb_coupling(lat, spec.coupling);
  const BlochModel model(lat, u);
  const BlochGrid grid = make_bloch_grid(model, spec.grid_n);

  std::vector<FlatnessMapEntry> map(static_cast<std::size_t>(spec.v_b_points) * spec.beta_points);
  parallel_for(map.size(), [&](std::size_t idx) {
    const int iv = static_cast<int>(idx) / spec.beta_points;
    const int ib = static_cast<int>(idx) % spec.beta_points;
    ModelParams p;
    p.v_b = sample_range(spec.v_b_range, spec.v_b_points, iv);
    p.beta_x = sample_range(spec.beta_range, spec.beta_points, ib);
    p.gamma_y = spec.gamma_y;
    p.validate();
    map[idx] = {p.v_b, p.beta_x, flatness(bands_from_grid(grid, p, spec.grouping_tolerance, false), 0)};
  });
  return map;
}

std::optional<FlatnessMapEntry> max_flatness(const std::vector<FlatnessMapEntry>& map) {
  std::optional<FlatnessMapEntry> best;
  for (const auto& e : map) {
    if (e.result.status != FlatnessStatus::Ok) continue;
    if (!best || e.result.flatness > best->result.flatness) best = e;
  }
  return best;
}

}  // namespace iontopo
