#pragma once

#include "iontopo/hamiltonian.hpp"

namespace iontopo {

namespace constants {
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kCoulomb = 8.9875517923e9;         // 1 / (4 pi eps0), N m^2 / C^2
inline constexpr double kAtomicMass = 1.66053906660e-27;   // kg
}  // namespace constants

// Laboratory parameters of a single microtrap and its laser fields (SI units,
// angular frequencies in rad/s).
struct PhysicalParams {
  double mass = 40.0 * constants::kAtomicMass;
  double omega_x = 2.0 * kPi * 1e5;
  double omega_y = 2.0 * kPi * 1e5;
  double rabi_x = 2.0 * kPi * 1e5;   // Omega_x
  double rabi_y = 2.0 * kPi * 5e5;   // Omega_y
  double wavevector = 0.0;           // K, 1/m
  double spacing = 50e-6;            // d, m
  double charge = constants::kElementaryCharge;

  void validate() const;
  // Lamb-Dicke parameter K sqrt(hbar / (2 M omega)) for the given frequency.
  double lamb_dicke(double omega) const;
};

struct ValidityFlags {
  double adiabatic_ratio = 0.0;  // min |Omega_y +- omega_a| / max(Omega_x eta_x, omega_y eta_y)
  bool adiabatic = false;        // ratio >= 10
  bool stiff = false;            // beta_x < 0.3
  bool lamb_dicke = false;       // eta_x, eta_y <= 1
};

struct DerivedParams {
  double lambda_x = 1.0;
  double lambda_y = 1.0;
  double omega_tilde_x = 0.0;
  double omega_tilde_y = 0.0;
  double coupling = 0.0;  // Omega, rad/s
  double eta_x = 0.0;
  double eta_y = 0.0;
  ValidityFlags validity;
};

struct MappedParams {
  DerivedParams derived;
  ModelParams model;
};

MappedParams map_physical_params(const PhysicalParams& pp);

// The r_x p_y coupling written with K (mass form) and with Lamb-Dicke
// parameters. Both evaluate the same expression.
double coupling_from_wavevector(const PhysicalParams& pp);
double coupling_from_lamb_dicke(const PhysicalParams& pp);

// U_int = 2 Omega_int eta^4.
double interaction_strength(double omega_int, double eta);

struct InteractionWindow {
  double u_int = 0.0;      // units of omega_tilde_x
  double bandwidth = 0.0;  // units of omega_tilde_x
  double gap = 0.0;        // units of omega_tilde_x
  bool inside = false;     // bandwidth < u_int < gap
};

// u_int and omega_tilde_x must share units; bandwidth and gap are dimensionless.
InteractionWindow interaction_window(double u_int, double omega_tilde_x, double bandwidth, double gap);

}  // namespace iontopo
