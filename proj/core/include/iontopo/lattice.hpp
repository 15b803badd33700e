#pragma once

#include <array>
#include <unordered_map>
#include <vector>

#include "iontopo/common.hpp"

namespace iontopo {

enum class Geometry { Torus, Cylinder, Plane };
enum class Sublattice { A, B };

// ZigzagX puts the first Bravais vector along x, so rows of constant c2 are
// zigzag chains. ArmchairX is the same lattice rotated by 90 degrees, which
// makes x an armchair direction.
enum class Orientation { ZigzagX, ArmchairX };

// Shape of an open planar lattice. Parallelogram holds n1 x n2 unit cells.
// Hexagon is the zigzag-terminated hexagonal flake with n1 plaquettes per
// side (requires n1 == n2) and 6 n1^2 sites.
enum class PlaneShape { Parallelogram, Hexagon };

// All lengths are in units of the lattice constant d (the Bravais period).
// The nearest-neighbour distance is then 1/sqrt(3).
inline constexpr double kDefaultBondLength = 0.57735026918962576;

// Upper bound on the number of sites a lattice may hold.
inline constexpr int kMaxSites = 20000;

struct Site {
  int index = 0;
  Vec2 position = Vec2::Zero();
  Sublattice sublattice = Sublattice::A;
  std::array<int, 2> cell{0, 0};
  bool is_boundary = false;
};

struct LatticeOptions {
  Orientation orientation = Orientation::ZigzagX;
  double bond_length = kDefaultBondLength;
  PlaneShape plane_shape = PlaneShape::Parallelogram;
};

class Lattice {
 public:
  Lattice(Geometry geometry, int n1, int n2, const LatticeOptions& options);

  Geometry geometry() const { return geometry_; }
  Orientation orientation() const { return options_.orientation; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  double bond_length() const { return options_.bond_length; }
  const LatticeOptions& options() const { return options_; }

  int size() const { return static_cast<int>(sites_.size()); }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& site(int i) const { return sites_[static_cast<std::size_t>(i)]; }

  const std::array<Vec2, 2>& bravais() const { return bravais_; }
  // Position of the B site relative to the A site of the same cell.
  const Vec2& basis_offset() const { return basis_offset_; }
  std::array<Vec2, 2> reciprocal() const;

  // Whether the lattice is periodic along Bravais direction dir (0 or 1).
  bool periodic(int dir) const;
  // Period vectors n1*a1 and n2*a2.
  Vec2 period(int dir) const;

  // Site index for a cell and sublattice, or -1 if there is no such site.
  int index_of(int c1, int c2, Sublattice s) const;

  // Nearest neighbours of every site (periodic images included).
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }

  // Graph distance from every site to the nearest boundary site. Lattices with
  // no boundary (torus) return -1 everywhere.
  std::vector<int> boundary_distance() const;

  // Sites whose graph distance to the boundary is below shell_width.
  std::vector<bool> boundary_shell(int shell_width) const;

  // Indices of the sites in cell column c1 == 0, ordered by (c2, sublattice).
  // This is the strip used by the mixed cylinder representation.
  std::vector<int> strip_sites() const;

 private:
  void add_site(int c1, int c2, Sublattice s);
  void connect();
  static long long key(int c1, int c2, Sublattice s);

  Geometry geometry_;
  int n1_;
  int n2_;
  LatticeOptions options_;
  std::array<Vec2, 2> bravais_;
  Vec2 basis_offset_;
  std::vector<Site> sites_;
  std::vector<std::vector<int>> neighbors_;
  std::unordered_map<long long, int> lookup_;
};

Lattice build_lattice(Geometry geometry, int n1, int n2, const LatticeOptions& options = {});

// Image-resolved dipolar coupling between sites.
struct CouplingTerm {
  int i = 0;
  int j = 0;
  Vec2 displacement = Vec2::Zero();  // from site i to the image of site j
  Mat2 block = Mat2::Zero();         // U^{i,j}_{alpha,beta}
};

struct CouplingOptions {
  double cutoff_radius = 12.0;
  bool nn_only = false;
  bool include_onsite_coulomb = false;
};

class CouplingMatrix {
 public:
  CouplingMatrix() = default;
  CouplingMatrix(int num_sites, const CouplingOptions& options, std::vector<CouplingTerm> terms);

  int num_sites() const { return num_sites_; }
  double cutoff_radius() const { return options_.cutoff_radius; }
  bool nn_only() const { return options_.nn_only; }
  bool include_onsite_coulomb() const { return options_.include_onsite_coulomb; }
  const CouplingOptions& options() const { return options_; }

  const std::vector<CouplingTerm>& terms() const { return terms_; }
  // Terms whose first index is site i.
  std::vector<CouplingTerm> terms_from(int i) const;

  // 2x2 block summed over images, U^{i,j}.
  Mat2 block(int i, int j) const;

  // Dense (2N x 2N) real matrix of the image-summed coupling.
  Eigen::MatrixXd dense() const;

 private:
  int num_sites_ = 0;
  CouplingOptions options_;
  std::vector<CouplingTerm> terms_;
  std::vector<std::size_t> row_start_;
};

// Dipolar tensor for a displacement R: (I - 3 R^ R^T) / |R|^3.
Mat2 dipolar_tensor(const Vec2& r);

CouplingMatrix coulomb_coupling(const Lattice& lat, const CouplingOptions& options = {});

}  // namespace iontopo
