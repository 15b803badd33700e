#include <gtest/gtest.h>

#include <cmath>

#include "iontopo/dynamics.hpp"

using namespace iontopo;

namespace {

ModelParams params(double beta, double v) {
  ModelParams p;
  p.beta_x = beta;
  p.v_b = v;
  return p;
}

Spectrum plane_spectrum(int n1, int n2, const ModelParams& p) {
  const Lattice lat = build_lattice(Geometry::Plane, n1, n2);
  return eigensolve(assemble_real_space(lat, p, coulomb_coupling(lat)));
}

}  // namespace

TEST(Drive, ZeroTimeGivesZeroDensity) {
  const Spectrum s = plane_spectrum(3, 2, params(0.04, -0.1));
  DriveSpec d;
  d.t_f = 0.0;
  for (double r : drive_response(s, d).rho) EXPECT_EQ(r, 0.0);
}

// Fourth-order integration as the oracle for the closed form.
TEST(Drive, ClosedFormMatchesIntegrationOnTwoSites) {
  const Spectrum s = plane_spectrum(1, 1, params(0.04, -0.1));
  DriveSpec d;
  d.omega_d = 0.83;
  d.t_f = 40.0;
  d.profile = {1.0, 0.4};
  const DensityField a = drive_response(s, d);
  const DensityField b = drive_response_ode(s, d, 1e-3);
  EXPECT_LT(relative_difference(b, a), 1e-8);
}

TEST(Drive, ResonantLimit) {
  const Spectrum s = plane_spectrum(1, 1, params(0.04, -0.1));
  DriveSpec d;
  d.t_f = 30.0;
  d.omega_d = s.energies(1);
  const DensityField exact = drive_response(s, d);
  d.omega_d = s.energies(1) + 1e-6;
  const DensityField above = drive_response(s, d);
  d.omega_d = s.energies(1) - 1e-6;
  const DensityField below = drive_response(s, d);
  EXPECT_LT(relative_difference(above, exact), 1e-4);
  EXPECT_LT(relative_difference(below, exact), 1e-4);
  d.omega_d = s.energies(1);
  EXPECT_LT(relative_difference(drive_response_ode(s, d, 1e-3), exact), 1e-8);
}

TEST(Drive, ZeroForceGivesZeroDensity) {
  const Spectrum s = plane_spectrum(2, 2, params(0.04, -0.1));
  DriveSpec d;
  d.profile.assign(8, 0.0);
  for (double r : drive_response(s, d).rho) EXPECT_EQ(r, 0.0);
  d.t_f = 5.0;
  for (double r : drive_response_ode(s, d, 1e-2).rho) EXPECT_EQ(r, 0.0);
}

TEST(Drive, StepHalvingConverges) {
  const Spectrum s = plane_spectrum(2, 2, params(0.04, -0.1));
  DriveSpec d;
  d.omega_d = 0.7;
  d.t_f = 50.0;
  const DensityField a = drive_response_ode(s, d, 2e-3);
  const DensityField b = drive_response_ode(s, d, 1e-3);
  EXPECT_LT(relative_difference(a, b), 1e-7);
  EXPECT_THROW(drive_response_ode(s, d, 3.0), NumericalError);
}

TEST(Drive, QuadraticInAmplitudeAndNonNegative) {
  const Spectrum s = plane_spectrum(3, 3, params(0.04, -0.1));
  DriveSpec d;
  d.omega_d = 0.7;
  const DensityField a = drive_response(s, d);
  d.amplitude = 3.0;
  const DensityField b = drive_response(s, d);
  for (std::size_t j = 0; j < a.rho.size(); ++j) {
    EXPECT_GE(a.rho[j], 0.0);
    EXPECT_LT(std::abs(b.rho[j] - 9.0 * a.rho[j]), 1e-10 * 9.0 * a.rho[j] + 1e-300);
  }
}

TEST(Density, Normalization) {
  DensityField f;
  f.rho.assign(8, 2.5);
  std::vector<bool> shell(8, false);
  shell[0] = shell[1] = true;
  const DensityField n = normalized_density(f, shell);
  for (double r : n.rho_bar) EXPECT_DOUBLE_EQ(r, 0.125);
  EXPECT_DOUBLE_EQ(n.boundary_fraction, 0.25);
  f.rho.assign(8, 0.0);
  EXPECT_THROW(normalized_density(f, shell), NumericalError);
}

TEST(Drive, Preconditions) {
  const Spectrum s = plane_spectrum(1, 1, params(0.04, -0.1));
  DriveSpec d;
  d.omega_d = -1.0;
  EXPECT_THROW(drive_response(s, d), std::invalid_argument);
  d.omega_d = 1.0;
  d.profile = {1.0};
  EXPECT_THROW(drive_response(s, d), std::invalid_argument);
  Spectrum bloch = s;
  bloch.source = Representation::Bloch;
  d.profile.clear();
  EXPECT_THROW(drive_response(bloch, d), std::invalid_argument);
}
