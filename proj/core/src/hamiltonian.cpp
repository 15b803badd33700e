#include "iontopo/hamiltonian.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace iontopo {

namespace {

// Adds scaled real coupling blocks and on-site blocks to a block matrix.
CMatrix compose_blocks(const ModelParams& p, const CMatrix& coulomb) {
  const Mat2 scale = coupling_scale(p);
  const Eigen::Matrix2cd onsite = onsite_block(p);
  CMatrix h = coulomb;
  const Eigen::Index blocks = h.rows() / 2;
  for (Eigen::Index a = 0; a < blocks; ++a) {
    for (Eigen::Index b = 0; b < blocks; ++b) {
      auto blk = h.block<2, 2>(2 * a, 2 * b);
      blk = blk.cwiseProduct(scale.cast<Complex>());
    }
    h.block<2, 2>(2 * a, 2 * a) += onsite;
  }
  return h;
}

void scale_derivative(const ModelParams& p, CMatrix& d) {
  const Mat2 scale = coupling_scale(p);
  const Eigen::Index blocks = d.rows() / 2;
  for (Eigen::Index a = 0; a < blocks; ++a) {
    for (Eigen::Index b = 0; b < blocks; ++b) {
      auto blk = d.block<2, 2>(2 * a, 2 * b);
      blk = blk.cwiseProduct(scale.cast<Complex>());
    }
  }
}

int sublattice_index(int site) { return site % 2; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double sample(const Interval& in, double u) { return in.low + u * (in.high - in.low); }

}  // namespace

void ModelParams::validate() const {
  if (!(beta_x >= 0.0) || !std::isfinite(beta_x)) {
    throw std::invalid_argument("model: beta_x must be finite and >= 0");
  }
  if (!std::isfinite(v_b)) throw std::invalid_argument("model: v_b must be finite");
  if (!(gamma_y > 0.0) || !std::isfinite(gamma_y)) {
    throw std::invalid_argument("model: gamma_y must be positive");
  }
}

double HamiltonianMatrix::hermiticity_error() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::Matrix2cd onsite_block(const ModelParams& p) {
  Eigen::Matrix2cd m;
  m << Complex(1.0, 0.0), Complex(0.0, -p.v_b), Complex(0.0, p.v_b),
      Complex(p.gamma_y * p.gamma_y, 0.0);
  return m;
}

Mat2 coupling_scale(const ModelParams& p) {
  const double gamma[2] = {1.0, p.gamma_y};
  Mat2 s;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) s(a, b) = p.beta_x / (2.0 * gamma[a] * gamma[b]);
  }
  return s;
}

HamiltonianMatrix assemble_real_space(const Lattice& lat, const ModelParams& p,
                                      const CouplingMatrix& u) {
  p.validate();
  if (u.num_sites() != lat.size()) {
    throw std::invalid_argument("assemble_real_space: coupling built for " +
                                std::to_string(u.num_sites()) + " sites, lattice has " +
                                std::to_string(lat.size()));
  }
  const int n = lat.size();
  CMatrix c = CMatrix::Zero(2 * n, 2 * n);
  for (const auto& t : u.terms()) c.block<2, 2>(2 * t.i, 2 * t.j) += t.block.cast<Complex>();
  return {compose_blocks(p, c), Representation::RealSpace, Vec2::Zero()};
}

// ---------------------------------------------------------------------------

BlochModel::BlochModel(const Lattice& lat, const CouplingMatrix& u)
    : reciprocal_(lat.reciprocal()) {
  if (lat.geometry() != Geometry::Torus) {
    throw std::invalid_argument("BlochModel: requires a torus lattice");
  }
  if (u.num_sites() != lat.size()) {
    throw std::invalid_argument("BlochModel: coupling does not match lattice");
  }
  basis_ = {lat.site(0).position, lat.site(1).position};
  for (int i = 0; i < 2; ++i) {
    for (const auto& t : u.terms_from(i)) {
      terms_.push_back(Term{i, sublattice_index(t.j), t.displacement, t.block});
    }
  }
}

double BlochModel::bz_area() const {
  return std::abs(reciprocal_[0].x() * reciprocal_[1].y() - reciprocal_[0].y() * reciprocal_[1].x());
}

CMatrix BlochModel::coulomb(const Vec2& k) const {
  CMatrix c = CMatrix::Zero(4, 4);
  for (const auto& t : terms_) {
    const Complex phase = std::polar(1.0, -k.dot(t.displacement));
    c.block<2, 2>(2 * t.row, 2 * t.col) += phase * t.block.cast<Complex>();
  }
  return c;
}

void BlochModel::coulomb_with_derivatives(const Vec2& k, CMatrix& c, CMatrix& dcx,
                                          CMatrix& dcy) const {
  c = CMatrix::Zero(4, 4);
  dcx = CMatrix::Zero(4, 4);
  dcy = CMatrix::Zero(4, 4);
  for (const auto& t : terms_) {
    const Complex phase = std::polar(1.0, -k.dot(t.displacement));
    const Eigen::Matrix2cd blk = phase * t.block.cast<Complex>();
    c.block<2, 2>(2 * t.row, 2 * t.col) += blk;
    dcx.block<2, 2>(2 * t.row, 2 * t.col) += (-kI * t.displacement.x()) * blk;
    dcy.block<2, 2>(2 * t.row, 2 * t.col) += (-kI * t.displacement.y()) * blk;
  }
}

CMatrix BlochModel::compose(const ModelParams& p, const CMatrix& coulomb) {
  return compose_blocks(p, coulomb);
}

CMatrix BlochModel::hamiltonian(const ModelParams& p, const Vec2& k) const {
  return compose_blocks(p, coulomb(k));
}

BlochMatrices BlochModel::evaluate(const ModelParams& p, const Vec2& k) const {
  CMatrix c, dcx, dcy;
  coulomb_with_derivatives(k, c, dcx, dcy);
  scale_derivative(p, dcx);
  scale_derivative(p, dcy);
  return {{compose_blocks(p, c), Representation::Bloch, k}, dcx, dcy};
}

BlochMatrices bloch_hamiltonian(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u,
                                const Vec2& k) {
  p.validate();
  return BlochModel(lat, u).evaluate(p, k);
}

// ---------------------------------------------------------------------------

CylinderModel::CylinderModel(const Lattice& lat, const CouplingMatrix& u) {
  if (lat.geometry() != Geometry::Cylinder) {
    throw std::invalid_argument("CylinderModel: requires a cylinder lattice");
  }
  if (u.num_sites() != lat.size()) {
    throw std::invalid_argument("CylinderModel: coupling does not match lattice");
  }
  strip_ = lat.strip_sites();
  period_ = lat.bravais()[0].norm();
  const Vec2 axis = lat.bravais()[0] / period_;
  auto strip_index = [&lat](int site) {
    const auto& s = lat.site(site);
    return 2 * s.cell[1] + sublattice_index(site);
  };
  for (int i : strip_) {
    for (const auto& t : u.terms_from(i)) {
      terms_.push_back(Term{strip_index(i), strip_index(t.j), t.displacement.dot(axis), t.block});
    }
  }
}

CMatrix CylinderModel::coulomb(double kx) const {
  const Eigen::Index dim = 2 * static_cast<Eigen::Index>(strip_.size());
  CMatrix c = CMatrix::Zero(dim, dim);
  for (const auto& t : terms_) {
    c.block<2, 2>(2 * t.row, 2 * t.col) += std::polar(1.0, -kx * t.parallel) * t.block.cast<Complex>();
  }
  return c;
}

CMatrix CylinderModel::hamiltonian(const ModelParams& p, double kx) const {
  return compose_blocks(p, coulomb(kx));
}

HamiltonianMatrix cylinder_hamiltonian(const Lattice& lat, const ModelParams& p,
                                       const CouplingMatrix& u, double kx) {
  p.validate();
  return {CylinderModel(lat, u).hamiltonian(p, kx), Representation::Cylinder, Vec2(kx, 0.0)};
}

std::vector<double> allowed_cylinder_momenta(const Lattice& lat) {
  const double a = lat.bravais()[0].norm();
  std::vector<double> ks;
  for (int n = 0; n < lat.n1(); ++n) {
    double k = 2.0 * kPi * n / (lat.n1() * a);
    if (k >= kPi / a) k -= 2.0 * kPi / a;
    ks.push_back(k);
  }
  return ks;
}

bool is_allowed_cylinder_momentum(const Lattice& lat, double kx, double tol) {
  const double a = lat.bravais()[0].norm();
  const double n = kx * lat.n1() * a / (2.0 * kPi);
  return std::abs(n - std::round(n)) < tol;
}

// ---------------------------------------------------------------------------

void DisorderSpec::validate() const {
  if (v_b_interval.low > v_b_interval.high || omega_interval.low > omega_interval.high) {
    throw std::invalid_argument("disorder: interval low must not exceed high");
  }
  const double s_min = mode == DisorderMode::Draw ? omega_interval.low : 1.0 + omega_interval.low;
  if (!(s_min > 0.0)) {
    throw std::invalid_argument("disorder: frequency interval allows a non-positive factor");
  }
}

double counter_uniform(std::uint64_t seed, std::uint64_t site, std::uint64_t channel) {
  const std::uint64_t key = splitmix64(seed) ^ splitmix64(2 * site + channel + 0x1234567ULL);
  return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53;
}

DisorderDraw draw_disorder(const DisorderSpec& spec, const ModelParams& base, int num_sites) {
  spec.validate();
  DisorderDraw draw;
  draw.frequency_factor.resize(static_cast<std::size_t>(num_sites));
  draw.v_b_magnitude.resize(static_cast<std::size_t>(num_sites));
  for (int i = 0; i < num_sites; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double us = counter_uniform(spec.seed, idx, 0);
    const double uv = counter_uniform(spec.seed, idx, 1);
    if (spec.mode == DisorderMode::Draw) {
      draw.frequency_factor[idx] = sample(spec.omega_interval, us);
      draw.v_b_magnitude[idx] = sample(spec.v_b_interval, uv);
    } else {
      draw.frequency_factor[idx] = 1.0 + sample(spec.omega_interval, us);
      draw.v_b_magnitude[idx] = std::abs(base.v_b) + sample(spec.v_b_interval, uv);
    }
  }
  return draw;
}

HamiltonianMatrix apply_disorder(const HamiltonianMatrix& h, const DisorderSpec& spec,
                                 const ModelParams& base) {
  if (h.representation != Representation::RealSpace) {
    throw std::invalid_argument("apply_disorder: requires a real-space Hamiltonian");
  }
  const int n = static_cast<int>(h.dim() / 2);
  const DisorderDraw draw = draw_disorder(spec, base, n);
  const double sign = base.v_b < 0.0 ? -1.0 : 1.0;
  const Eigen::Matrix2cd nominal = onsite_block(base);
  const double gy2 = base.gamma_y * base.gamma_y;

  HamiltonianMatrix out = h;
  for (int i = 0; i < n; ++i) {
    const double si = draw.frequency_factor[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double sj = draw.frequency_factor[static_cast<std::size_t>(j)];
      out.matrix.block<2, 2>(2 * i, 2 * j) *= 1.0 / std::sqrt(si * sj);
    }
    const Eigen::Matrix2cd coulomb_self = h.matrix.block<2, 2>(2 * i, 2 * i) - nominal;
    const double vi = sign * draw.v_b_magnitude[static_cast<std::size_t>(i)];
    Eigen::Matrix2cd onsite;
    onsite << Complex(si, 0.0), Complex(0.0, -vi), Complex(0.0, vi), Complex(si * gy2, 0.0);
    out.matrix.block<2, 2>(2 * i, 2 * i) = onsite + coulomb_self / si;
  }
  return out;
}

void write_triplets(std::ostream& os, const HamiltonianMatrix& h, double tol) {
  const auto old_precision = os.precision(12);
  os << "# row col re im\n";
  for (Eigen::Index c = 0; c < h.matrix.cols(); ++c) {
    for (Eigen::Index r = 0; r < h.matrix.rows(); ++r) {
      const Complex v = h.matrix(r, c);
      if (std::abs(v) > tol || (tol == 0.0 && v != Complex(0.0, 0.0))) {
        os << r << ' ' << c << ' ' << v.real() << ' ' << v.imag() << '\n';
      }
    }
  }
  os.precision(old_precision);
}

}  // namespace iontopo
