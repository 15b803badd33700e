#pragma once

#include <vector>

#include "iontopo/spectra.hpp"

namespace iontopo {

struct DriveSpec {
  double omega_d = 1.0;    // units of omega_tilde_x
  double t_f = 1000.0;     // units of 1 / omega_tilde_x
  double amplitude = 1.0;  // uniform Omega_0 when profile is empty
  std::vector<double> profile;  // per-site Omega_j

  void validate() const;
  double site_amplitude(int site) const;
};

struct DensityField {
  std::vector<double> rho;
  std::vector<double> rho_bar;  // empty until normalized
  double boundary_fraction = 0.0;

  double total() const;
};

// f_l = sum_j Omega_j u^l_{j,x}.
CVector drive_projection(const Spectrum& spec, const DriveSpec& d);

// Closed-form x-phonon density rho_j(t_f) for a real-space spectrum.
DensityField drive_response(const Spectrum& spec, const DriveSpec& d);

// rho_bar = rho / sum(rho); boundary_fraction = sum of rho_bar over the shell.
DensityField normalized_density(const DensityField& f, const std::vector<bool>& boundary_shell);

// Fourth-order Runge-Kutta integration of i dc_l/dt = E_l c_l + conj(f_l) cos(omega_d t).
DensityField drive_response_ode(const HamiltonianMatrix& h, const DriveSpec& d, double dt);
DensityField drive_response_ode(const Spectrum& spec, const DriveSpec& d, double dt);

// max_j |a_j - b_j| / max_j |b_j|.
double relative_difference(const DensityField& a, const DensityField& b);

}  // namespace iontopo
