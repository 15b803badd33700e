#include "iontopo/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace iontopo {

namespace {

constexpr double kGapClosed = 1e-6;
constexpr double kSingularLink = 1e-12;

// Eigensystem and velocity matrix elements on one grid point.
struct KData {
  RVector energies;
  CMatrix frame;  // eigenvectors in the periodic gauge
  CMatrix vx;     // <s1| dH/dkx |s2>
  CMatrix vy;
};

struct GridData {
  int grid_n = 0;
  double cell_area = 0.0;
  std::vector<KData> points;
  std::vector<RVector> symmetry_energies;
};

GridData solve_grid(const BlochModel& model, const ModelParams& p, int grid_n, const Vec2& offset) {
  if (grid_n < 2) throw std::invalid_argument("chern: grid_n must be >= 2");
  p.validate();
  GridData g;
  g.grid_n = grid_n;
  g.cell_area = model.bz_area() / (static_cast<double>(grid_n) * grid_n);
  const auto ks = torus_grid(model.reciprocal(), grid_n, offset);
  const auto& basis = model.basis_positions();
  g.points.resize(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const BlochMatrices m = model.evaluate(p, ks[i]);
    Spectrum s = eigensolve(m.h.matrix, Representation::Bloch);
    KData& d = g.points[i];
    d.vx = s.modes.adjoint() * m.dh_dkx * s.modes;
    d.vy = s.modes.adjoint() * m.dh_dky * s.modes;
    // Periodic gauge u_p(k) = diag(exp(-i k.r_a)) u(k) is single valued on the torus grid.
    for (int a = 0; a < 2; ++a) s.modes.middleRows(2 * a, 2) *= std::polar(1.0, -ks[i].dot(basis[a]));
    d.energies = std::move(s.energies);
    d.frame = std::move(s.modes);
  });
  for (const Vec2& k : high_symmetry_points(model.reciprocal())) {
    g.symmetry_energies.push_back(eigenvalues(model.hamiltonian(p, k)));
  }
  return g;
}

void check_occupied(int occupied) {
  if (occupied < 1 || occupied > 3) throw std::invalid_argument("chern: occupied band count must be 1..3");
}

void require_gap(const GridData& g, int occupied, const char* who) {
  double min_spacing = std::numeric_limits<double>::infinity();
  for (const auto& d : g.points) min_spacing = std::min(min_spacing, d.energies(occupied) - d.energies(occupied - 1));
  for (const auto& e : g.symmetry_energies) min_spacing = std::min(min_spacing, e(occupied) - e(occupied - 1));
  if (min_spacing < kGapClosed) {
    throw GapClosedError(std::string(who) + ": gap above band " + std::to_string(occupied) + " closes",
                         occupied, min_spacing);
  }
}

double tknn_sum(const GridData& g, int occupied) {
  require_gap(g, occupied, "chern_tknn");
  double total = 0.0;
  for (const auto& d : g.points) {
    for (int a = 0; a < occupied; ++a) {
      for (int b = occupied; b < d.energies.size(); ++b) {
        const double de = d.energies(a) - d.energies(b);
        total += (d.vx(a, b) * d.vy(b, a)).imag() / (de * de);
      }
    }
  }
  return -total * g.cell_area / kPi;
}

Complex link(const CMatrix& a, const CMatrix& b, int occupied) {
  const Complex det = (a.leftCols(occupied).adjoint() * b.leftCols(occupied)).determinant();
  const double mag = std::abs(det);
  if (mag < kSingularLink) throw NumericalError("chern_fhs: singular link variable, refine the grid");
  return det / mag;
}

int fhs_sum(const GridData& g, int occupied) {
  require_gap(g, occupied, "chern_fhs");
  const auto n = static_cast<std::size_t>(g.grid_n);
  auto at = [&](std::size_t i, std::size_t j) -> const CMatrix& { return g.points[(i % n) * n + (j % n)].frame; };
  std::vector<double> flux(g.points.size(), 0.0);
  parallel_for(g.points.size(), [&](std::size_t idx) {
    const std::size_t i = idx / n;
    const std::size_t j = idx % n;
    const Complex u1 = link(at(i, j), at(i + 1, j), occupied);
    const Complex u2 = link(at(i + 1, j), at(i + 1, j + 1), occupied);
    const Complex u3 = link(at(i, j + 1), at(i + 1, j + 1), occupied);
    const Complex u4 = link(at(i, j), at(i, j + 1), occupied);
    flux[idx] = std::arg(u1 * u2 * std::conj(u3) * std::conj(u4));
  });
  double total = 0.0;
  for (double f : flux) total += f;
  return static_cast<int>(std::lround(-total / (2.0 * kPi)));
}

}  // namespace

double chern_tknn(const BlochModel& model, const ModelParams& p, int occupied, int grid_n,
                  const Vec2& offset) {
  check_occupied(occupied);
  return tknn_sum(solve_grid(model, p, grid_n, offset), occupied);
}

double chern_tknn(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u, int occupied,
                  int grid_n) {
  return chern_tknn(BlochModel(lat, u), p, occupied, grid_n);
}

int chern_fhs(const BlochModel& model, const ModelParams& p, int occupied, int grid_n,
              const Vec2& offset) {
  check_occupied(occupied);
  return fhs_sum(solve_grid(model, p, grid_n, offset), occupied);
}

int chern_fhs(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u, int occupied,
              int grid_n) {
  return chern_fhs(BlochModel(lat, u), p, occupied, grid_n);
}

double ChernResult::max_residual() const {
  double m = 0.0;
  for (double r : residuals) {
    if (std::isfinite(r)) m = std::max(m, r);
  }
  return m;
}

namespace {

ChernResult chern_at_grid(const BlochModel& model, const ModelParams& p, const ChernOptions& options,
                          int grid_n) {
  const GridData grid = solve_grid(model, p, grid_n, options.offset);
  Eigen::MatrixXd energies(static_cast<Eigen::Index>(grid.points.size()), 4);
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    energies.row(static_cast<Eigen::Index>(i)) = grid.points[i].energies.transpose();
  }
  Bands bands;
  bands.grid_n = grid_n;
  bands.energies = energies;
  bands.symmetry_energies.resize(static_cast<Eigen::Index>(grid.symmetry_energies.size()), 4);
  for (std::size_t i = 0; i < grid.symmetry_energies.size(); ++i) {
    bands.symmetry_energies.row(static_cast<Eigen::Index>(i)) = grid.symmetry_energies[i].transpose();
  }
  bands.grouping_tolerance = options.grouping_tolerance;
  bands.groups = group_bands(bands.sampled_energies(), options.grouping_tolerance);

  ChernResult r;
  r.params = p;
  r.grid_n = grid_n;
  r.groups = bands.groups;
  r.gaps = band_gaps(bands);
  for (const auto& g : r.groups) r.merged.push_back(g.size() > 1);

  const std::size_t boundaries = r.gaps.size();
  r.cumulative_raw.assign(boundaries, std::numeric_limits<double>::quiet_NaN());
  r.cumulative_fhs.assign(boundaries, 0);
  r.residuals.assign(boundaries, std::numeric_limits<double>::quiet_NaN());
  r.method_agreement = true;
  for (std::size_t g = 0; g < boundaries; ++g) {
    const int occupied = r.groups[g].last + 1;
    r.gap_open.push_back(r.gaps[g].open());
    const bool computable = bands.min_spacing(occupied - 1) >= kGapClosed;
    r.gap_computable.push_back(computable);
    if (!computable) {
      r.method_agreement = false;
      continue;
    }
    r.cumulative_raw[g] = tknn_sum(grid, occupied);
    r.cumulative_fhs[g] = fhs_sum(grid, occupied);
    r.residuals[g] = std::abs(r.cumulative_raw[g] - std::round(r.cumulative_raw[g]));
    if (std::lround(r.cumulative_raw[g]) != r.cumulative_fhs[g]) r.method_agreement = false;
  }

  // C_s = C~_s - C~_{s-1}, with C~_0 = 0 and the full band set summing to zero.
  double prev_raw = 0.0;
  int prev_int = 0;
  for (std::size_t g = 0; g < r.groups.size(); ++g) {
    const double raw = g < boundaries ? r.cumulative_raw[g] : 0.0;
    const int whole = g < boundaries ? r.cumulative_fhs[g] : 0;
    r.per_group_raw.push_back(raw - prev_raw);
    r.per_group.push_back(whole - prev_int);
    prev_raw = raw;
    prev_int = whole;
  }
  return r;
}

}  // namespace

ChernResult band_chern_numbers(const BlochModel& model, const ModelParams& p, const ChernOptions& options) {
  p.validate();
  int n = options.grid_n;
  ChernResult r = chern_at_grid(model, p, options, n);
  while (options.auto_refine && r.max_residual() >= options.residual_limit && 2 * n <= options.max_grid_n) {
    n *= 2;
    r = chern_at_grid(model, p, options, n);
  }
  return r;
}

ChernResult band_chern_numbers(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u,
                               const ChernOptions& options) {
  return band_chern_numbers(BlochModel(lat, u), p, options);
}

}  // namespace iontopo
