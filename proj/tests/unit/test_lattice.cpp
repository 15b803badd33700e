#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "iontopo/lattice.hpp"

using namespace iontopo;

namespace {

LatticeOptions unit_bond() {
  LatticeOptions o;
  o.bond_length = 1.0;
  return o;
}

Mat2 rotation(double angle) {
  Mat2 r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

TEST(Lattice, SmallestTorusHasThreeNeighbourImages) {
  const Lattice lat = build_lattice(Geometry::Torus, 1, 1, unit_bond());
  ASSERT_EQ(lat.size(), 2);
  CouplingOptions opt;
  opt.nn_only = true;
  const CouplingMatrix u = coulomb_coupling(lat, opt);
  for (int i = 0; i < 2; ++i) {
    const auto terms = u.terms_from(i);
    ASSERT_EQ(terms.size(), 3u);
    for (const auto& t : terms) {
      EXPECT_NEAR(t.displacement.norm(), 1.0, 1e-12);
      EXPECT_NE(t.j, i);
    }
  }
}

TEST(Lattice, SiteCountsAndSublattices) {
  for (auto g : {Geometry::Torus, Geometry::Cylinder, Geometry::Plane}) {
    const Lattice lat = build_lattice(g, 5, 4);
    EXPECT_EQ(lat.size(), 40);
    for (const auto& s : lat.sites()) {
      const auto& nb = lat.neighbors()[static_cast<std::size_t>(s.index)];
      EXPECT_LE(nb.size(), 3u);
      EXPECT_EQ(s.is_boundary, nb.size() < 3);
      for (int j : nb) {
        EXPECT_NE(lat.site(j).sublattice, s.sublattice);
        if (g == Geometry::Plane) {
          EXPECT_NEAR((lat.site(j).position - s.position).norm(), lat.bond_length(), 1e-12);
        }
      }
    }
  }
}

TEST(Lattice, TorusNeighboursUseMinimumImage) {
  const Lattice lat = build_lattice(Geometry::Torus, 4, 3);
  for (const auto& s : lat.sites()) {
    EXPECT_EQ(lat.neighbors()[static_cast<std::size_t>(s.index)].size(), 3u);
    EXPECT_FALSE(s.is_boundary);
  }
  CouplingOptions opt;
  opt.nn_only = true;
  const CouplingMatrix u = coulomb_coupling(lat, opt);
  for (int i = 0; i < lat.size(); ++i) EXPECT_EQ(u.terms_from(i).size(), 3u);
}

TEST(Lattice, CylinderHasTwoBoundaryRows) {
  const Lattice lat = build_lattice(Geometry::Cylinder, 10, 20);
  EXPECT_EQ(lat.size(), 400);
  int boundary = 0;
  for (const auto& s : lat.sites()) {
    if (!s.is_boundary) continue;
    ++boundary;
    EXPECT_TRUE(s.cell[1] == 0 || s.cell[1] == 19);
  }
  EXPECT_EQ(boundary, 20);
}

TEST(Lattice, PlaneShapes) {
  const Lattice par = build_lattice(Geometry::Plane, 16, 12);
  EXPECT_EQ(par.size(), 384);
  LatticeOptions hex;
  hex.plane_shape = PlaneShape::Hexagon;
  for (int n : {1, 2, 4, 8}) {
    const Lattice lat = build_lattice(Geometry::Plane, n, n, hex);
    EXPECT_EQ(lat.size(), 6 * n * n);
    int boundary = 0;
    for (const auto& s : lat.sites()) {
      const auto nb = lat.neighbors()[static_cast<std::size_t>(s.index)].size();
      EXPECT_GE(nb, 2u);
      boundary += s.is_boundary;
    }
    EXPECT_EQ(boundary, 6 * n);
  }
  EXPECT_THROW(build_lattice(Geometry::Torus, 4, 4, hex), std::invalid_argument);
  EXPECT_THROW(build_lattice(Geometry::Plane, 4, 5, hex), std::invalid_argument);
}

TEST(Lattice, DistinctPositions) {
  LatticeOptions hex;
  hex.plane_shape = PlaneShape::Hexagon;
  const Lattice lat = build_lattice(Geometry::Plane, 4, 4, hex);
  for (int i = 0; i < lat.size(); ++i) {
    for (int j = i + 1; j < lat.size(); ++j) {
      EXPECT_GT((lat.site(i).position - lat.site(j).position).norm(), 0.5 * lat.bond_length());
    }
  }
}

TEST(Lattice, InvalidArguments) {
  EXPECT_THROW(build_lattice(Geometry::Torus, 0, 3), std::invalid_argument);
  EXPECT_THROW(build_lattice(Geometry::Plane, 200, 200), std::invalid_argument);
  LatticeOptions bad;
  bad.bond_length = -1.0;
  EXPECT_THROW(build_lattice(Geometry::Plane, 2, 2, bad), std::invalid_argument);
  const Lattice lat = build_lattice(Geometry::Plane, 2, 2);
  CouplingOptions opt;
  opt.cutoff_radius = 0.5;
  EXPECT_THROW(coulomb_coupling(lat, opt), std::invalid_argument);
}

TEST(Lattice, BoundaryShell) {
  const Lattice torus = build_lattice(Geometry::Torus, 3, 3);
  for (int d : torus.boundary_distance()) EXPECT_EQ(d, -1);
  const Lattice cyl = build_lattice(Geometry::Cylinder, 4, 6);
  const auto shell = cyl.boundary_shell(1);
  for (const auto& s : cyl.sites()) EXPECT_EQ(shell[static_cast<std::size_t>(s.index)], s.is_boundary);
}

TEST(Coupling, TwoSitesAlongX) {
  const double r = 2.5;
  const Mat2 u = dipolar_tensor(Vec2(r, 0.0));
  EXPECT_NEAR(u(0, 0), -2.0 / (r * r * r), 1e-15);
  EXPECT_NEAR(u(1, 1), 1.0 / (r * r * r), 1e-15);
  EXPECT_NEAR(u(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(u(1, 0), 0.0, 1e-15);
}

TEST(Coupling, SymmetricUnderTransposition) {
  for (auto g : {Geometry::Torus, Geometry::Cylinder, Geometry::Plane}) {
    const Lattice lat = build_lattice(g, 4, 3);
    const Eigen::MatrixXd dense = coulomb_coupling(lat).dense();
    EXPECT_LT((dense - dense.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Coupling, StoredPairsRespectCutoff) {
  const Lattice lat = build_lattice(Geometry::Torus, 3, 3);
  CouplingOptions opt;
  opt.cutoff_radius = 5.0;
  const CouplingMatrix u = coulomb_coupling(lat, opt);
  for (const auto& t : u.terms()) {
    EXPECT_LE(t.displacement.norm(), 5.0 + 1e-9);
    EXPECT_GT(t.displacement.norm(), 0.0);
  }
}

TEST(Coupling, NearestNeighbourSubsetOfCutoff) {
  const Lattice lat = build_lattice(Geometry::Cylinder, 4, 3);
  CouplingOptions nn;
  nn.nn_only = true;
  const CouplingMatrix full = coulomb_coupling(lat);
  const CouplingMatrix near = coulomb_coupling(lat, nn);
  std::size_t expected = 0;
  for (const auto& t : full.terms()) {
    if (std::abs(t.displacement.norm() - lat.bond_length()) < 1e-9) ++expected;
  }
  EXPECT_EQ(near.terms().size(), expected);
  for (const auto& t : near.terms()) {
    EXPECT_LT((t.block - dipolar_tensor(t.displacement)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

// Brute-force image sum with a large cutoff as the truncation oracle.
TEST(Coupling, TruncationAtEightVersusThirty) {
  const Lattice lat = build_lattice(Geometry::Torus, 1, 1);
  const Vec2 k(1.3, 2.9);
  auto site_sum = [&](double cutoff) {
    CouplingOptions opt;
    opt.cutoff_radius = cutoff;
    const CouplingMatrix u = coulomb_coupling(lat, opt);
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    for (const auto& t : u.terms_from(0)) sum += t.block.cast<Complex>() * std::polar(1.0, -k.dot(t.displacement));
    return sum;
  };
  const Eigen::Matrix2cd s8 = site_sum(8.0);
  const Eigen::Matrix2cd s30 = site_sum(30.0);
  EXPECT_LT((s8 - s30).norm() / s30.norm(), 1e-2);
}

TEST(Coupling, ShellSumsInvariantUnderThreefoldRotation) {
  const Lattice lat = build_lattice(Geometry::Torus, 1, 1);
  const CouplingMatrix u = coulomb_coupling(lat);
  std::map<long, Mat2> shells;
  for (const auto& t : u.terms_from(0)) {
    const long key = std::lround(t.displacement.norm() * 1e6);
    if (!shells.count(key)) shells[key] = Mat2::Zero();
    shells[key] += t.block;
  }
  ASSERT_GE(shells.size(), 3u);
  const Mat2 rot = rotation(2.0 * kPi / 3.0);
  int checked = 0;
  for (const auto& [key, block] : shells) {
    if (checked++ == 3) break;
    EXPECT_LT((rot * block * rot.transpose() - block).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Coupling, OnsiteSelfTermsOptional) {
  const Lattice lat = build_lattice(Geometry::Plane, 3, 3);
  CouplingOptions opt;
  for (const auto& t : coulomb_coupling(lat, opt).terms()) EXPECT_NE(t.i, t.j);
  opt.include_onsite_coulomb = true;
  const CouplingMatrix u = coulomb_coupling(lat, opt);
  Mat2 row = Mat2::Zero();
  for (const auto& t : u.terms_from(0)) row += t.block;
  EXPECT_LT(row.cwiseAbs().maxCoeff(), 1e-12);
}
