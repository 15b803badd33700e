#include "iontopo/physical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iontopo {

void PhysicalParams::validate() const {
  for (double v : {mass, omega_x, omega_y, rabi_y, spacing, charge}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("physical: mass, frequencies, spacing and charge must be positive");
    }
  }
  if (!(rabi_x >= 0.0) || !(wavevector >= 0.0)) {
    throw std::invalid_argument("physical: rabi_x and wavevector must be >= 0");
  }
  if (rabi_y == omega_x || rabi_y == omega_y) {
    throw std::invalid_argument("physical: rabi_y must differ from both trap frequencies");
  }
}

double PhysicalParams::lamb_dicke(double omega) const {
  return wavevector * std::sqrt(constants::kHbar / (2.0 * mass * omega));
}

double coupling_from_wavevector(const PhysicalParams& pp) {
  const double k2 = constants::kHbar * pp.wavevector * pp.wavevector;
  double sum = 0.0;
  for (double w : {pp.omega_x, pp.omega_y}) {
    sum += pp.rabi_x * pp.rabi_y * k2 / (2.0 * pp.mass * (pp.rabi_y * pp.rabi_y - w * w));
  }
  return -sum;
}

double coupling_from_lamb_dicke(const PhysicalParams& pp) {
  double sum = 0.0;
  for (double w : {pp.omega_x, pp.omega_y}) {
    const double eta = pp.lamb_dicke(w);
    sum += pp.rabi_x * pp.rabi_y * w * eta * eta / (pp.rabi_y * pp.rabi_y - w * w);
  }
  return -sum;
}

MappedParams map_physical_params(const PhysicalParams& pp) {
  pp.validate();
  const double hk2 = constants::kHbar * pp.wavevector * pp.wavevector;
  const double wx = pp.omega_x;
  const double wy = pp.omega_y;
  const double oy = pp.rabi_y;

  const double lx_arg =
      1.0 - 2.0 * oy * pp.rabi_x * pp.rabi_x * hk2 / (pp.mass * wx * wx * (oy * oy - wx * wx));
  if (!(lx_arg > 0.0)) {
    throw std::invalid_argument("physical: laser parameters destabilize the x trap (lambda_x^2 <= 0)");
  }
  const double ly = 1.0 - oy * hk2 / (2.0 * pp.mass * (oy * oy - wy * wy));
  if (!(ly > 0.0)) {
    throw std::invalid_argument("physical: lambda_y <= 0");
  }

  MappedParams out;
  DerivedParams& d = out.derived;
  d.lambda_x = std::sqrt(lx_arg);
  d.lambda_y = ly;
  d.omega_tilde_x = d.lambda_x * wx;
  d.omega_tilde_y = wy / std::sqrt(ly);
  d.coupling = coupling_from_wavevector(pp);
  d.eta_x = pp.lamb_dicke(wx);
  d.eta_y = pp.lamb_dicke(wy);

  ModelParams& m = out.model;
  m.gamma_y = std::sqrt(d.omega_tilde_y / d.omega_tilde_x);
  m.beta_x = constants::kCoulomb * pp.charge * pp.charge /
             (pp.mass * d.omega_tilde_x * d.omega_tilde_x * std::pow(pp.spacing, 3));
  m.v_b = d.coupling * m.gamma_y / (2.0 * d.omega_tilde_x);

  const double force = std::max(pp.rabi_x * d.eta_x, wy * d.eta_y);
  double detuning = std::abs(oy - wx);
  for (double w : {wx, wy}) detuning = std::min({detuning, std::abs(oy - w), oy + w});
  d.validity.adiabatic_ratio = force > 0.0 ? detuning / force : std::numeric_limits<double>::infinity();
  d.validity.adiabatic = d.validity.adiabatic_ratio >= 10.0;
  d.validity.stiff = m.beta_x < 0.3;
  d.validity.lamb_dicke = d.eta_x <= 1.0 && d.eta_y <= 1.0;
  return out;
}

double interaction_strength(double omega_int, double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw std::invalid_argument("interaction_strength: eta must lie in [0, 1)");
  }
  return 2.0 * omega_int * std::pow(eta, 4);
}

InteractionWindow interaction_window(double u_int, double omega_tilde_x, double bandwidth, double gap) {
  if (!(omega_tilde_x > 0.0)) {
    throw std::invalid_argument("interaction_window: omega_tilde_x must be positive");
  }
  InteractionWindow w;
  w.u_int = u_int / omega_tilde_x;
  w.bandwidth = bandwidth;
  w.gap = gap;
  w.inside = bandwidth < w.u_int && w.u_int < gap;
  return w;
}

}  // namespace iontopo
