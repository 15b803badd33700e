#include "iontopo/edges.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iontopo {

namespace {

// Lattice sites that the rows of a spectrum refer to.
std::vector<int> spectrum_sites(const Lattice& lat, int dim) {
  if (dim == 2 * lat.size()) {
    std::vector<int> all(static_cast<std::size_t>(lat.size()));
    for (int i = 0; i < lat.size(); ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  if (lat.geometry() == Geometry::Cylinder && dim == 4 * lat.n2()) return lat.strip_sites();
  throw std::invalid_argument("edges: spectrum dimension " + std::to_string(dim) +
                              " does not match the lattice");
}

double site_weight(const CMatrix& modes, int mode, int row) {
  return std::norm(modes(2 * row, mode)) + std::norm(modes(2 * row + 1, mode));
}

struct Halves {
  double shell = 0.0;
  double bottom = 0.0;
  double top = 0.0;
};

Halves weigh(const CMatrix& modes, int mode, const Lattice& lat, const std::vector<int>& sites,
             const std::vector<bool>& shell) {
  Halves h;
  for (std::size_t r = 0; r < sites.size(); ++r) {
    const double w = site_weight(modes, mode, static_cast<int>(r));
    if (shell[r]) h.shell += w;
    if (2 * lat.site(sites[r]).cell[1] < lat.n2()) {
      h.bottom += w;
    } else {
      h.top += w;
    }
  }
  return h;
}

}  // namespace

const char* to_string(EdgeSide side) {
  switch (side) {
    case EdgeSide::Bottom:
      return "bottom";
    case EdgeSide::Top:
      return "top";
    case EdgeSide::None:
      break;
  }
  return "none";
}

std::vector<Interval> bulk_gap_windows(const BlochModel& model, const ModelParams& p,
                                       const EdgeOptions& options) {
  BandOptions bo;
  bo.grid_n = options.grid_n;
  bo.grouping_tolerance = options.grouping_tolerance;
  const Bands bands = band_structure(model, p, bo);
  std::vector<Interval> windows;
  for (const auto& g : band_gaps(bands)) {
    if (!g.open()) continue;
    const double shrink = options.margin * g.width();
    windows.push_back({g.low + shrink, g.high - shrink});
  }
  return windows;
}

std::vector<Interval> bulk_gap_windows(const ModelParams& p, const CouplingOptions& coupling,
                                       const LatticeOptions& lattice, const EdgeOptions& options) {
  const Lattice lat = build_lattice(Geometry::Torus, 1, 1, lattice);
  return bulk_gap_windows(BlochModel(lat, coulomb_coupling(lat, coupling)), p, options);
}

std::vector<bool> spectrum_shell(const Lattice& lat, int dim, int shell_width) {
  const auto sites = spectrum_sites(lat, dim);
  const auto full = lat.boundary_shell(shell_width);
  std::vector<bool> shell(sites.size());
  for (std::size_t r = 0; r < sites.size(); ++r) shell[r] = full[static_cast<std::size_t>(sites[r])];
  return shell;
}

double edge_weight(const Spectrum& spec, int mode, const std::vector<bool>& shell) {
  double w = 0.0;
  for (std::size_t r = 0; r < shell.size(); ++r) {
    if (shell[r]) w += site_weight(spec.modes, mode, static_cast<int>(r));
  }
  return w;
}

std::vector<EdgeModeSet> find_edge_modes(const Spectrum& spec, const Lattice& lat,
                                         const std::vector<Interval>& windows, int shell_width,
                                         double threshold) {
  const int dim = static_cast<int>(spec.size());
  const auto sites = spectrum_sites(lat, dim);
  const auto shell = spectrum_shell(lat, dim, shell_width);
  const bool sided = lat.geometry() == Geometry::Cylinder;
  std::vector<EdgeModeSet> sets;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    EdgeModeSet set;
    set.window_id = static_cast<int>(w);
    set.window = windows[w];
    set.shell_width = shell_width;
    set.threshold = threshold;
    for (int l = 0; l < dim; ++l) {
      const double e = spec.energies(l);
      if (!(e > windows[w].low && e < windows[w].high)) continue;
      ++set.in_gap_count;
      const Halves h = weigh(spec.modes, l, lat, sites, shell);
      if (h.shell < threshold) continue;
      EdgeSide side = EdgeSide::None;
      if (sided) side = h.bottom >= h.top ? EdgeSide::Bottom : EdgeSide::Top;
      set.modes.push_back({l, e, h.shell, side});
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<ProfileEntry> localization_profile(const Spectrum& spec, const Lattice& lat, int mode) {
  if (mode < 0 || mode >= spec.size()) throw std::invalid_argument("localization_profile: mode out of range");
  const auto sites = spectrum_sites(lat, static_cast<int>(spec.size()));
  std::vector<ProfileEntry> out;
  out.reserve(sites.size());
  for (std::size_t r = 0; r < sites.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    out.push_back({sites[r], lat.site(sites[r]).position, std::norm(spec.modes(2 * row, mode)),
                   std::norm(spec.modes(2 * row + 1, mode))});
  }
  return out;
}

EdgeVelocity edge_crossings(const Bands& bands, const Lattice& lat, const Interval& window,
                            int shell_width) {
  if (bands.geometry != Geometry::Cylinder || lat.geometry() != Geometry::Cylinder) {
    throw std::invalid_argument("edge_velocity: requires cylinder bands");
  }
  if (bands.modes.size() != static_cast<std::size_t>(bands.num_k())) {
    throw std::invalid_argument("edge_velocity: bands must keep eigenvectors");
  }
  const int dim = bands.num_bands();
  const auto sites = spectrum_sites(lat, dim);
  const auto shell = spectrum_shell(lat, dim, shell_width);
  const double centre = 0.5 * (window.low + window.high);
  const double span = 2.0 * kPi / lat.bravais()[0].norm();
  const int nk = bands.num_k();

  EdgeVelocity out;
  out.window = window;
  for (int b = 0; b < dim; ++b) {
    for (int i = 0; i < nk; ++i) {
      const int j = (i + 1) % nk;
      const double ei = bands.energies(i, b) - centre;
      const double ej = bands.energies(j, b) - centre;
      if (!(ei * ej < 0.0)) continue;
      double dk = bands.k_points[static_cast<std::size_t>(j)].x() - bands.k_points[static_cast<std::size_t>(i)].x();
      if (j == 0) dk += span;
      const int near = std::abs(ei) <= std::abs(ej) ? i : j;
      const Halves h = weigh(bands.modes[static_cast<std::size_t>(near)], b, lat, sites, shell);
      EdgeBranch br;
      br.band_index = b;
      br.k = bands.k_points[static_cast<std::size_t>(i)].x() + 0.5 * dk;
      br.slope = (ej - ei) / dk;
      br.side = h.bottom >= h.top ? EdgeSide::Bottom : EdgeSide::Top;
      br.edge_weight = h.shell;
      const int sign = br.slope > 0.0 ? 1 : -1;
      (br.side == EdgeSide::Bottom ? out.chirality_bottom : out.chirality_top) += sign;
      out.branches.push_back(br);
    }
  }
  return out;
}

EdgeVelocity edge_velocity(const Bands& bands, const Lattice& lat, const Interval& window,
                           int shell_width) {
  EdgeVelocity v = edge_crossings(bands, lat, window, shell_width);
  if (v.branches.empty()) throw NoEdgeBranch("edge_velocity: no branch crosses the window");
  return v;
}

RobustnessReport disorder_robustness(const Lattice& plane, const ModelParams& p, const CouplingMatrix& u,
                                     const DisorderSpec& spec, int trials,
                                     const std::vector<Interval>& windows, int shell_width,
                                     double threshold) {
  if (plane.geometry() != Geometry::Plane) {
    throw std::invalid_argument("disorder_robustness: requires a plane lattice");
  }
  if (trials < 1) throw std::invalid_argument("disorder_robustness: trials must be >= 1");
  spec.validate();
  const HamiltonianMatrix clean = assemble_real_space(plane, p, u);
  RobustnessReport report;
  report.trials = trials;
  report.per_trial.resize(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    DisorderSpec s = spec;
    s.seed = spec.seed + t;
    const Spectrum sp = eigensolve(apply_disorder(clean, s, p));
    const auto sets = find_edge_modes(sp, plane, windows, shell_width, threshold);
    TrialResult r;
    r.seed = s.seed;
    for (const auto& set : sets) {
      r.in_gap_count += set.in_gap_count;
      r.edge_count += static_cast<int>(set.modes.size());
      r.edge_count_per_window.push_back(static_cast<int>(set.modes.size()));
      for (const auto& m : set.modes) r.max_edge_weight = std::max(r.max_edge_weight, m.edge_weight);
    }
    report.per_trial[t] = std::move(r);
  });
  int persisted = 0;
  int all = 0;
  for (const auto& r : report.per_trial) {
    if (r.edge_count > 0) ++persisted;
    bool every = !r.edge_count_per_window.empty();
    for (int c : r.edge_count_per_window) every = every && c > 0;
    if (every) ++all;
  }
  report.persistence_rate = static_cast<double>(persisted) / trials;
  report.all_windows_rate = static_cast<double>(all) / trials;
  return report;
}

}  // namespace iontopo
