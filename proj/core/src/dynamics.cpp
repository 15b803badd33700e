#include "iontopo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace iontopo {

namespace {

constexpr double kResonance = 1e-8;

void check_real_space(const Spectrum& spec, const DriveSpec& d) {
  if (spec.source != Representation::RealSpace) {
    throw std::invalid_argument("drive_response: requires a real-space spectrum");
  }
  if (!d.profile.empty() && static_cast<Eigen::Index>(2 * d.profile.size()) != spec.size()) {
    throw std::invalid_argument("drive_response: drive profile size does not match the lattice");
  }
}

// (e^{-iEt} - e^{imwt}) / (E + mw), or its limit -i t e^{-iEt}.
Complex kernel(double e, double m_omega, double t) {
  const double denom = e + m_omega;
  const Complex phase = std::polar(1.0, -e * t);
  if (std::abs(denom) < kResonance) return -kI * t * phase;
  return (phase - std::polar(1.0, m_omega * t)) / denom;
}

DensityField densities(const Spectrum& spec, const CVector& amplitudes) {
  const Eigen::Index n = spec.size() / 2;
  DensityField f;
  f.rho.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex a = 0.0;
    for (Eigen::Index l = 0; l < spec.size(); ++l) a += spec.modes(2 * j, l) * amplitudes(l);
    f.rho[static_cast<std::size_t>(j)] = std::norm(a);
  }
  return f;
}

}  // namespace

void DriveSpec::validate() const {
  if (!(omega_d > 0.0)) throw std::invalid_argument("drive: omega_d must be positive");
  if (!(t_f >= 0.0)) throw std::invalid_argument("drive: t_f must be non-negative");
}

double DriveSpec::site_amplitude(int site) const {
  return profile.empty() ? amplitude : profile[static_cast<std::size_t>(site)];
}

double DensityField::total() const { return std::accumulate(rho.begin(), rho.end(), 0.0); }

CVector drive_projection(const Spectrum& spec, const DriveSpec& d) {
  const Eigen::Index n = spec.size() / 2;
  CVector f = CVector::Zero(spec.size());
  for (Eigen::Index l = 0; l < spec.size(); ++l) {
    for (Eigen::Index j = 0; j < n; ++j) f(l) += d.site_amplitude(static_cast<int>(j)) * spec.modes(2 * j, l);
  }
  return f;
}

DensityField drive_response(const Spectrum& spec, const DriveSpec& d) {
  d.validate();
  check_real_space(spec, d);
  const CVector f = drive_projection(spec, d);
  CVector c(spec.size());
  parallel_for(static_cast<std::size_t>(spec.size()), [&](std::size_t i) {
    const auto l = static_cast<Eigen::Index>(i);
    const double e = spec.energies(l);
    c(l) = 0.5 * std::conj(f(l)) * (kernel(e, d.omega_d, d.t_f) + kernel(e, -d.omega_d, d.t_f));
  });
  return densities(spec, c);
}

DensityField normalized_density(const DensityField& f, const std::vector<bool>& boundary_shell) {
  if (boundary_shell.size() != f.rho.size()) {
    throw std::invalid_argument("normalized_density: shell size does not match the density");
  }
  const double total = f.total();
  if (!(total > 0.0)) throw NumericalError("normalized_density: total density is zero");
  DensityField out = f;
  out.rho_bar.resize(f.rho.size());
  out.boundary_fraction = 0.0;
  for (std::size_t j = 0; j < f.rho.size(); ++j) {
    out.rho_bar[j] = f.rho[j] / total;
    if (boundary_shell[j]) out.boundary_fraction += out.rho_bar[j];
  }
  return out;
}

DensityField drive_response_ode(const Spectrum& spec, const DriveSpec& d, double dt) {
  d.validate();
  check_real_space(spec, d);
  if (!(dt > 0.0)) throw std::invalid_argument("drive_response_ode: dt must be positive");
  const double emax = spec.energies.cwiseAbs().maxCoeff();
  if (emax * dt > 2.5) {
    throw NumericalError("drive_response_ode: step size too large (|E| dt = " + std::to_string(emax * dt) + ")");
  }
  const CVector g = drive_projection(spec, d).conjugate();
  const auto steps = static_cast<long long>(std::ceil(d.t_f / dt - 1e-9));
  const double h = steps > 0 ? d.t_f / static_cast<double>(steps) : 0.0;
  const double w = d.omega_d;

  CVector c = CVector::Zero(spec.size());
  parallel_for(static_cast<std::size_t>(spec.size()), [&](std::size_t i) {
    const auto l = static_cast<Eigen::Index>(i);
    const double e = spec.energies(l);
    const Complex gl = g(l);
    auto rhs = [&](double t, Complex y) { return -kI * (e * y + gl * std::cos(w * t)); };
    Complex y = 0.0;
    for (long long s = 0; s < steps; ++s) {
      const double t = h * static_cast<double>(s);
      const Complex k1 = rhs(t, y);
      const Complex k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
      const Complex k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
      const Complex k4 = rhs(t + h, y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) {
      throw NumericalError("drive_response_ode: integration diverged");
    }
    c(l) = y;
  });
  return densities(spec, c);
}

DensityField drive_response_ode(const HamiltonianMatrix& h, const DriveSpec& d, double dt) {
  if (h.representation != Representation::RealSpace) {
    throw std::invalid_argument("drive_response_ode: requires a real-space Hamiltonian");
  }
  return drive_response_ode(eigensolve(h), d, dt);
}

double relative_difference(const DensityField& a, const DensityField& b) {
  if (a.rho.size() != b.rho.size()) throw std::invalid_argument("relative_difference: size mismatch");
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < a.rho.size(); ++j) {
    diff = std::max(diff, std::abs(a.rho[j] - b.rho[j]));
    scale = std::max(scale, std::abs(b.rho[j]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace iontopo
