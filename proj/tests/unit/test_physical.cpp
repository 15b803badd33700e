#include <gtest/gtest.h>

#include <cmath>

#include "iontopo/physical.hpp"

using namespace iontopo;

namespace {

PhysicalParams calcium(double rabi_y_mhz, double eta) {
  PhysicalParams pp;
  pp.rabi_y = 2.0 * kPi * rabi_y_mhz * 1e6;
  pp.wavevector = eta / std::sqrt(constants::kHbar / (2.0 * pp.mass * pp.omega_x));
  return pp;
}

}  // namespace

TEST(Physical, NoDipoleForce) {
  PhysicalParams pp = calcium(0.5, 0.5);
  pp.rabi_x = 0.0;
  const MappedParams m = map_physical_params(pp);
  EXPECT_EQ(m.derived.coupling, 0.0);
  EXPECT_EQ(m.model.v_b, 0.0);
  EXPECT_EQ(m.derived.lambda_x, 1.0);
}

TEST(Physical, CouplingFormsAgree) {
  for (double oy : {0.3, 0.55, 1.0}) {
    for (double eta : {0.1, 0.5, 0.8}) {
      const PhysicalParams pp = calcium(oy, eta);
      const double a = coupling_from_wavevector(pp);
      const double b = coupling_from_lamb_dicke(pp);
      EXPECT_LT(std::abs(a - b) / std::abs(a), 1e-12);
    }
  }
}

TEST(Physical, DerivedQuantities) {
  const PhysicalParams pp = calcium(0.5, 0.8);
  const MappedParams m = map_physical_params(pp);
  EXPECT_NEAR(m.derived.eta_x, 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(m.derived.omega_tilde_x, m.derived.lambda_x * pp.omega_x);
  EXPECT_DOUBLE_EQ(m.derived.omega_tilde_y, pp.omega_y / std::sqrt(m.derived.lambda_y));
  EXPECT_NEAR(m.model.gamma_y, std::sqrt(m.derived.omega_tilde_y / m.derived.omega_tilde_x), 1e-15);
  const double beta = constants::kCoulomb * pp.charge * pp.charge /
                      (pp.mass * std::pow(m.derived.omega_tilde_x, 2) * std::pow(pp.spacing, 3));
  EXPECT_NEAR(m.model.beta_x / beta, 1.0, 1e-14);
  EXPECT_LT(m.model.v_b, 0.0);
  EXPECT_TRUE(m.derived.validity.lamb_dicke);
}

TEST(Physical, Errors) {
  PhysicalParams pp = calcium(0.5, 0.5);
  pp.rabi_y = pp.omega_x;
  EXPECT_THROW(map_physical_params(pp), std::invalid_argument);
  pp = calcium(0.5, 0.5);
  pp.mass = -1.0;
  EXPECT_THROW(map_physical_params(pp), std::invalid_argument);
  // Omega_y just above omega_x with a strong force makes lambda_x^2 negative.
  pp = calcium(0.1001, 0.9);
  pp.rabi_x = 2.0 * kPi * 1e6;
  EXPECT_THROW(map_physical_params(pp), std::invalid_argument);
}

TEST(Interaction, Strength) {
  EXPECT_EQ(interaction_strength(1e4, 0.0), 0.0);
  const double u1 = interaction_strength(1e4, 0.2);
  const double u2 = interaction_strength(1e4, 0.4);
  EXPECT_NEAR(u2 / u1, 16.0, 1e-12);
  EXPECT_NEAR(u1, 2.0 * 1e4 * std::pow(0.2, 4), 1e-12);
  EXPECT_THROW(interaction_strength(1e4, 1.0), std::invalid_argument);
}

TEST(Interaction, Window) {
  const InteractionWindow w = interaction_window(10e3, 100e3, 0.07, 0.22);
  EXPECT_NEAR(w.u_int, 0.1, 1e-15);
  EXPECT_TRUE(w.inside);
  EXPECT_FALSE(interaction_window(30e3, 100e3, 0.07, 0.22).inside);
  EXPECT_FALSE(interaction_window(5e3, 100e3, 0.07, 0.22).inside);
}
