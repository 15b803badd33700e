#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "iontopo/common.hpp"
#include "iontopo/lattice.hpp"

namespace iontopo {

// Dimensionless parameters of the phonon hopping model. Energies are in units
// of the renormalized x trap frequency.
struct ModelParams {
  double beta_x = 0.02;  // stiffness ratio e^2 / (M w_x^2 d^3)
  double v_b = -0.1;     // time-reversal breaking x-y coupling
  double gamma_y = 1.0;  // sqrt(w_y / w_x)

  void validate() const;
  // |v_b| < gamma_y^2 keeps the on-site block positive definite.
  bool onsite_positive() const { return std::abs(v_b) < gamma_y * gamma_y; }
};

enum class Representation { RealSpace, Cylinder, Bloch };

struct HamiltonianMatrix {
  CMatrix matrix;
  Representation representation = Representation::RealSpace;
  Vec2 momentum = Vec2::Zero();  // k for Bloch, (k_x, 0) for Cylinder

  Eigen::Index dim() const { return matrix.rows(); }
  double hermiticity_error() const;
};

// 2x2 on-site block [[1, -i v_b], [i v_b, gamma_y^2]].
Eigen::Matrix2cd onsite_block(const ModelParams& p);

// Prefactor beta_x / (2 gamma_alpha gamma_beta) multiplying U^{ij}_{alpha beta}.
Mat2 coupling_scale(const ModelParams& p);

HamiltonianMatrix assemble_real_space(const Lattice& lat, const ModelParams& p,
                                      const CouplingMatrix& u);

// Bloch form of the torus Hamiltonian. Holds the image-resolved couplings of
// one unit cell so that H(k) can be evaluated at arbitrary k.
struct BlochMatrices {
  HamiltonianMatrix h;
  CMatrix dh_dkx;
  CMatrix dh_dky;
};

class BlochModel {
 public:
  BlochModel(const Lattice& lat, const CouplingMatrix& u);

  // Coulomb part sum_R U(R) exp(-i k.R) (4x4, ordered A_x, A_y, B_x, B_y).
  CMatrix coulomb(const Vec2& k) const;
  // Coulomb part and its k derivatives.
  void coulomb_with_derivatives(const Vec2& k, CMatrix& c, CMatrix& dcx, CMatrix& dcy) const;

  CMatrix hamiltonian(const ModelParams& p, const Vec2& k) const;
  BlochMatrices evaluate(const ModelParams& p, const Vec2& k) const;

  // Combine a precomputed Coulomb matrix with the model parameters.
  static CMatrix compose(const ModelParams& p, const CMatrix& coulomb);

  const std::array<Vec2, 2>& reciprocal() const { return reciprocal_; }
  // Positions of the two basis sites, used for gauge changes.
  const std::array<Vec2, 2>& basis_positions() const { return basis_; }
  double bz_area() const;

 private:
  struct Term {
    int row = 0;  // basis index of site i
    int col = 0;  // basis index of site j
    Vec2 displacement;
    Mat2 block;
  };
  std::vector<Term> terms_;
  std::array<Vec2, 2> reciprocal_;
  std::array<Vec2, 2> basis_;
};

BlochMatrices bloch_hamiltonian(const Lattice& lat, const ModelParams& p, const CouplingMatrix& u,
                                const Vec2& k);

// Mixed representation on the cylinder: momentum along the periodic Bravais
// direction, real space across the strip of 2*n2 sites.
class CylinderModel {
 public:
  CylinderModel(const Lattice& lat, const CouplingMatrix& u);

  CMatrix coulomb(double kx) const;
  CMatrix hamiltonian(const ModelParams& p, double kx) const;

  int strip_size() const { return static_cast<int>(strip_.size()); }
  const std::vector<int>& strip_sites() const { return strip_; }
  double period() const { return period_; }

 private:
  struct Term {
    int row = 0;
    int col = 0;
    double parallel = 0.0;  // displacement along the periodic direction
    Mat2 block;
  };
  std::vector<Term> terms_;
  std::vector<int> strip_;
  double period_ = 1.0;
};

HamiltonianMatrix cylinder_hamiltonian(const Lattice& lat, const ModelParams& p,
                                       const CouplingMatrix& u, double kx);

// Momenta 2 pi n / (n1 |a1|) for n = 0..n1-1, mapped into [-pi/|a1|, pi/|a1|).
std::vector<double> allowed_cylinder_momenta(const Lattice& lat);
bool is_allowed_cylinder_momentum(const Lattice& lat, double kx, double tol = 1e-9);

// Site-resolved disorder ---------------------------------------------------

enum class DisorderMode {
  Draw,  // replace |v_b| and the frequency factor by uniform samples
  Add,   // add uniform samples to |v_b| and to a unit frequency factor
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct DisorderSpec {
  Interval v_b_interval{0.05, 0.15};
  Interval omega_interval{0.95, 1.05};
  DisorderMode mode = DisorderMode::Draw;
  std::uint64_t seed = 0;

  void validate() const;
};

struct DisorderDraw {
  std::vector<double> frequency_factor;  // s_i
  std::vector<double> v_b_magnitude;     // v_i
};

// Uniform sample in [0, 1) that depends only on (seed, site, channel).
double counter_uniform(std::uint64_t seed, std::uint64_t site, std::uint64_t channel);

DisorderDraw draw_disorder(const DisorderSpec& spec, const ModelParams& base, int num_sites);

HamiltonianMatrix apply_disorder(const HamiltonianMatrix& h, const DisorderSpec& spec,
                                 const ModelParams& base);

// Writes "row col re im" lines for entries with modulus above tol.
void write_triplets(std::ostream& os, const HamiltonianMatrix& h, double tol = 0.0);

}  // namespace iontopo
