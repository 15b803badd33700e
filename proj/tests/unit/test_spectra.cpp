#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "iontopo/spectra.hpp"

using namespace iontopo;

namespace {

ModelParams params(double beta, double v) {
  ModelParams p;
  p.beta_x = beta;
  p.v_b = v;
  return p;
}

const BlochModel& primitive() {
  static const Lattice lat = build_lattice(Geometry::Torus, 1, 1);
  static const BlochModel model(lat, coulomb_coupling(lat));
  return model;
}

CMatrix random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return a + a.adjoint();
}

}  // namespace

TEST(Eigensolve, TwoByTwo) {
  const Spectrum s = eigensolve(CMatrix(onsite_block(params(0.0, 0.25))));
  EXPECT_NEAR(s.energies(0), 0.75, 1e-14);
  EXPECT_NEAR(s.energies(1), 1.25, 1e-14);
}

TEST(Eigensolve, Identity) {
  const Spectrum s = eigensolve(CMatrix::Identity(6, 6));
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(s.energies(i), 1.0, 1e-15);
  EXPECT_LT((s.modes.adjoint() * s.modes - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Eigensolve, ResidualOrthonormalityAndPhase) {
  const CMatrix h = random_hermitian(60, 3);
  const Spectrum s = eigensolve(h);
  EXPECT_LT(s.residual(h), 1e-9);
  EXPECT_LT((s.modes.adjoint() * s.modes - CMatrix::Identity(60, 60)).cwiseAbs().maxCoeff(), 1e-9);
  for (int i = 1; i < 60; ++i) EXPECT_LE(s.energies(i - 1), s.energies(i));
  for (int l = 0; l < 60; ++l) {
    Eigen::Index best = 0;
    s.modes.col(l).cwiseAbs().maxCoeff(&best);
    EXPECT_NEAR(s.modes(best, l).imag(), 0.0, 1e-14);
    EXPECT_GT(s.modes(best, l).real(), 0.0);
  }
}

TEST(Eigensolve, RejectsNonHermitian) {
  CMatrix h = CMatrix::Identity(3, 3);
  h(0, 1) = 0.5;
  EXPECT_THROW(eigensolve(h), NumericalError);
}

TEST(Eigensolve, PlanarResidual) {
  const Lattice lat = build_lattice(Geometry::Plane, 6, 5);
  const HamiltonianMatrix h = assemble_real_space(lat, params(0.04, -0.1), coulomb_coupling(lat));
  const Spectrum s = eigensolve(h);
  EXPECT_EQ(s.size(), 2 * lat.size());
  EXPECT_LT(s.residual(h.matrix), 1e-9);
}

TEST(Bands, FlatWithoutStiffness) {
  BandOptions o;
  o.grid_n = 8;
  const Bands b = band_structure(primitive(), params(0.0, -0.1), o);
  EXPECT_EQ(b.num_bands(), 4);
  EXPECT_EQ(b.num_k(), 64);
  EXPECT_NEAR(b.energies.col(0).maxCoeff(), 0.9, 1e-14);
  EXPECT_NEAR(b.energies.col(3).minCoeff(), 1.1, 1e-14);
  const auto gaps = band_gaps(b);
  ASSERT_EQ(gaps.size(), 1u);
  EXPECT_NEAR(gaps[0].width(), 0.2, 1e-13);
  const FlatnessResult f = flatness(b, 0);
  EXPECT_EQ(f.status, FlatnessStatus::FlatBand);
  EXPECT_TRUE(std::isinf(f.flatness));
}

TEST(Bands, CylinderBandCount) {
  const Lattice lat = build_lattice(Geometry::Cylinder, 4, 5);
  BandOptions o;
  o.cylinder_points = 16;
  const Bands b = band_structure(lat, params(0.02, -0.1), coulomb_coupling(lat), o);
  EXPECT_EQ(b.num_bands(), 20);
  EXPECT_EQ(b.num_k(), 16);
  EXPECT_EQ(b.geometry, Geometry::Cylinder);
}

TEST(Bands, ReflectionReality) {
  const ModelParams p = params(0.04, -0.2);
  for (const Vec2& k : {Vec2(0.4, 1.1), Vec2(-2.3, 0.2)}) {
    const RVector a = eigenvalues(primitive().hamiltonian(p, k));
    const RVector b = eigenvalues(CMatrix(primitive().hamiltonian(p, -k).conjugate()));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Bands, GapStructureAtSmallStiffness) {
  BandOptions o;
  const Bands b = band_structure(primitive(), params(0.02, -0.1), o);
  const auto gaps = band_gaps(b);
  ASSERT_EQ(gaps.size(), 2u);
  EXPECT_TRUE(gaps[0].open());
  EXPECT_TRUE(gaps[1].open());
  EXPECT_GT(gaps[0].width(), 2.0 * gaps[1].width());
}

TEST(Bands, GroupingStableUnderHalvedTolerance) {
  for (double beta : {0.02, 0.04}) {
    for (double v : {-0.1, -0.2}) {
      BandOptions o;
      const Bands a = band_structure(primitive(), params(beta, v), o);
      o.grouping_tolerance *= 0.5;
      const Bands b = band_structure(primitive(), params(beta, v), o);
      ASSERT_EQ(a.groups.size(), b.groups.size());
      EXPECT_EQ(a.groups.size(), 3u);
      for (std::size_t g = 0; g < a.groups.size(); ++g) {
        EXPECT_EQ(a.groups[g].first, b.groups[g].first);
        EXPECT_EQ(a.groups[g].last, b.groups[g].last);
      }
    }
  }
}

// The 80 grid contains the 40 grid, so windows can only shrink.
TEST(Bands, GapWindowsShrinkUnderRefinement) {
  BandOptions o;
  o.grid_n = 40;
  const auto coarse = band_gaps(band_structure(primitive(), params(0.04, -0.1), o));
  o.grid_n = 80;
  const auto fine = band_gaps(band_structure(primitive(), params(0.04, -0.1), o));
  ASSERT_EQ(coarse.size(), fine.size());
  for (std::size_t g = 0; g < coarse.size(); ++g) {
    EXPECT_GE(fine[g].low, coarse[g].low - 1e-12);
    EXPECT_LE(fine[g].high, coarse[g].high + 1e-12);
    EXPECT_LT(coarse[g].width() - fine[g].width(), 1e-3);
  }
}

TEST(Flatness, GapClosedIsExplicit) {
  Bands b;
  b.energies.resize(2, 2);
  b.energies << 0.0, 0.5, 0.6, 1.0;
  b.groups = {{0, 0}, {1, 1}};
  const FlatnessResult f = flatness(b, 0);
  EXPECT_EQ(f.status, FlatnessStatus::GapClosed);
  EXPECT_TRUE(std::isnan(f.flatness));
  EXPECT_THROW(flatness(b, 5), std::invalid_argument);
}

TEST(FlatnessMap, SinglePointEqualsDirectCall) {
  FlatnessMapSpec spec;
  spec.v_b_range = {-0.1, -0.1};
  spec.beta_range = {0.04, 0.04};
  spec.v_b_points = 1;
  spec.beta_points = 1;
  const auto map = flatness_map(spec);
  ASSERT_EQ(map.size(), 1u);
  const FlatnessResult direct = flatness(band_structure(primitive(), params(0.04, -0.1)), 0);
  EXPECT_EQ(map[0].result.flatness, direct.flatness);
  EXPECT_GT(direct.flatness, 1.0);
}

TEST(FlatnessMap, SymmetricUnderSignOfCoupling) {
  FlatnessMapSpec spec;
  spec.v_b_points = 3;
  spec.beta_points = 3;
  spec.grid_n = 24;
  const auto neg = flatness_map(spec);
  spec.v_b_range = {0.3, 0.05};
  const auto pos = flatness_map(spec);
  ASSERT_EQ(neg.size(), pos.size());
  for (std::size_t i = 0; i < neg.size(); ++i) {
    EXPECT_DOUBLE_EQ(neg[i].v_b, -pos[i].v_b);
    EXPECT_LT(std::abs(neg[i].result.flatness - pos[i].result.flatness), 1e-6 * neg[i].result.flatness);
  }
  ASSERT_TRUE(max_flatness(neg).has_value());
}
