#include <gtest/gtest.h>

#include <cmath>

#include "iontopo/edges.hpp"

using namespace iontopo;

namespace {

ModelParams params(double beta, double v) {
  ModelParams p;
  p.beta_x = beta;
  p.v_b = v;
  return p;
}

Lattice hexagon(int n) {
  LatticeOptions o;
  o.plane_shape = PlaneShape::Hexagon;
  return build_lattice(Geometry::Plane, n, n, o);
}

}  // namespace

TEST(Windows, SingleWindowWithoutStiffness) {
  const auto w = bulk_gap_windows(params(0.0, -0.1), CouplingOptions{});
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NEAR(w[0].high - w[0].low, 0.2 * 0.96, 1e-12);
}

TEST(Windows, TwoWindowsAndRefinement) {
  EdgeOptions o;
  const auto a = bulk_gap_windows(params(0.02, -0.1), CouplingOptions{}, {}, o);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_GT(a[0].high - a[0].low, a[1].high - a[1].low);
  o.grid_n = 80;
  const auto b = bulk_gap_windows(params(0.02, -0.1), CouplingOptions{}, {}, o);
  ASSERT_EQ(b.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT(std::abs(a[i].low - b[i].low), 1e-3);
    EXPECT_LT(std::abs(a[i].high - b[i].high), 1e-3);
  }
}

TEST(EdgeModes, WeightsAndWindows) {
  const Lattice lat = hexagon(4);
  const ModelParams p = params(0.04, -0.1);
  const Spectrum s = eigensolve(assemble_real_space(lat, p, coulomb_coupling(lat)));
  const auto windows = bulk_gap_windows(p, CouplingOptions{});
  const auto sets = find_edge_modes(s, lat, windows);
  ASSERT_EQ(sets.size(), windows.size());
  for (const auto& set : sets) {
    EXPECT_LE(set.modes.size(), static_cast<std::size_t>(set.in_gap_count));
    for (const auto& m : set.modes) {
      EXPECT_GT(m.energy, set.window.low);
      EXPECT_LT(m.energy, set.window.high);
      EXPECT_GE(m.edge_weight, 0.5);
      EXPECT_LE(m.edge_weight, 1.0 + 1e-12);
    }
  }
  const auto shell = spectrum_shell(lat, static_cast<int>(s.size()), 2);
  Spectrum rotated = s;
  rotated.modes *= std::polar(1.0, 0.83);
  for (int l = 0; l < s.size(); l += 17) {
    EXPECT_NEAR(edge_weight(s, l, shell), edge_weight(rotated, l, shell), 1e-14);
  }
}

TEST(Profile, NormalizedAndPhaseInvariant) {
  const Lattice lat = hexagon(3);
  const Spectrum s = eigensolve(assemble_real_space(lat, params(0.04, -0.1), coulomb_coupling(lat)));
  Spectrum rotated = s;
  rotated.modes *= std::polar(1.0, -1.2);
  for (int l : {0, 10, 50}) {
    const auto a = localization_profile(s, lat, l);
    const auto b = localization_profile(rotated, lat, l);
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      total += a[i].dens_x + a[i].dens_y;
      EXPECT_NEAR(a[i].dens_x, b[i].dens_x, 1e-14);
      EXPECT_EQ(a[i].position, lat.site(a[i].site_index).position);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_THROW(localization_profile(s, lat, -1), std::invalid_argument);
}

class CylinderEdges : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    lattice_ = new Lattice(build_lattice(Geometry::Cylinder, 10, 12));
    model_ = new CylinderModel(*lattice_, coulomb_coupling(*lattice_));
  }
  static void TearDownTestSuite() {
    delete model_;
    delete lattice_;
  }
  static Bands bands(const ModelParams& p, int points) {
    BandOptions o;
    o.keep_modes = true;
    o.cylinder_points = points;
    return band_structure(*model_, p, o);
  }
  static Lattice* lattice_;
  static CylinderModel* model_;
};

Lattice* CylinderEdges::lattice_ = nullptr;
CylinderModel* CylinderEdges::model_ = nullptr;

TEST_F(CylinderEdges, ChiralBranchesOnlyInTopologicalGap) {
  const ModelParams p = params(0.02, -0.2);
  const auto windows = bulk_gap_windows(p, CouplingOptions{});
  ASSERT_EQ(windows.size(), 2u);
  const Bands b = bands(p, 200);
  const EdgeVelocity first = edge_velocity(b, *lattice_, windows[0]);
  EXPECT_EQ(first.branches.size(), 2u);
  EXPECT_TRUE(first.counter_propagating());
  const EdgeVelocity second = edge_crossings(b, *lattice_, windows[1]);
  EXPECT_FALSE(second.counter_propagating());
  if (second.branches.empty()) {
    EXPECT_THROW(edge_velocity(b, *lattice_, windows[1]), NoEdgeBranch);
  }
}

TEST_F(CylinderEdges, SlopesConvergeUnderRefinement) {
  const ModelParams p = params(0.04, -0.1);
  const auto windows = bulk_gap_windows(p, CouplingOptions{});
  const EdgeVelocity coarse = edge_velocity(bands(p, 200), *lattice_, windows[0]);
  const EdgeVelocity fine = edge_velocity(bands(p, 400), *lattice_, windows[0]);
  ASSERT_EQ(coarse.branches.size(), fine.branches.size());
  for (std::size_t i = 0; i < coarse.branches.size(); ++i) {
    EXPECT_LT(std::abs(coarse.branches[i].slope - fine.branches[i].slope), 0.05 * std::abs(fine.branches[i].slope));
  }
}

TEST_F(CylinderEdges, RequiresModes) {
  BandOptions o;
  o.cylinder_points = 8;
  const Bands b = band_structure(*model_, params(0.02, -0.2), o);
  EXPECT_THROW(edge_crossings(b, *lattice_, {0.7, 0.8}), std::invalid_argument);
}

TEST(Robustness, ZeroWidthDisorderMatchesCleanCase) {
  const Lattice lat = hexagon(4);
  const ModelParams p = params(0.04, -0.1);
  const CouplingMatrix u = coulomb_coupling(lat);
  const auto windows = bulk_gap_windows(p, CouplingOptions{});
  const Spectrum clean = eigensolve(assemble_real_space(lat, p, u));
  int clean_edges = 0;
  for (const auto& set : find_edge_modes(clean, lat, windows)) clean_edges += static_cast<int>(set.modes.size());
  DisorderSpec spec;
  spec.v_b_interval = {0.1, 0.1};
  spec.omega_interval = {1.0, 1.0};
  const RobustnessReport r = disorder_robustness(lat, p, u, spec, 3, windows);
  EXPECT_EQ(r.trials, 3);
  for (const auto& t : r.per_trial) EXPECT_EQ(t.edge_count, clean_edges);
  EXPECT_EQ(r.persistence_rate, clean_edges > 0 ? 1.0 : 0.0);
  EXPECT_EQ(r.per_trial[2].seed, 2u);
}

TEST(Robustness, RequiresPlane) {
  const Lattice lat = build_lattice(Geometry::Cylinder, 3, 3);
  EXPECT_THROW(disorder_robustness(lat, params(0.04, -0.1), coulomb_coupling(lat), {}, 1, {}),
               std::invalid_argument);
}
