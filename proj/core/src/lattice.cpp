#include "iontopo/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <cstdlib>
#include <string>

namespace iontopo {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kDistanceEps = 1e-9;

Vec2 rotate_quarter(const Vec2& v) { return {-v.y(), v.x()}; }

}  // namespace

Lattice::Lattice(Geometry geometry, int n1, int n2, const LatticeOptions& options)
    : geometry_(geometry), n1_(n1), n2_(n2), options_(options) {
  if (n1 < 1 || n2 < 1) {
    throw std::invalid_argument("lattice: n1 and n2 must be >= 1");
  }
  if (!(options.bond_length > 0.0)) {
    throw std::invalid_argument("lattice: bond_length must be positive");
  }

  const double b = options.bond_length;
  bravais_ = {Vec2(b * kSqrt3, 0.0), Vec2(b * kSqrt3 / 2.0, b * 1.5)};
  basis_offset_ = Vec2(b * kSqrt3 / 2.0, b * 0.5);
  if (options.orientation == Orientation::ArmchairX) {
    bravais_ = {rotate_quarter(bravais_[0]), rotate_quarter(bravais_[1])};
    basis_offset_ = rotate_quarter(basis_offset_);
  }

  if (options.plane_shape == PlaneShape::Hexagon) {
    if (geometry != Geometry::Plane) {
      throw std::invalid_argument("lattice: the hexagon shape requires plane geometry");
    }
    if (n1 != n2) throw std::invalid_argument("lattice: the hexagon shape requires n1 == n2");
    if (6LL * n1 * n1 > kMaxSites) {
      throw std::invalid_argument("lattice: " + std::to_string(6LL * n1 * n1) +
                                  " sites exceeds the limit of " + std::to_string(kMaxSites));
    }
    // Plaquette (m1, m2) is centred at m1 a1 + m2 a2 + (0, b) (before rotation).
    // A(c1,c2) borders plaquettes (c1,c2), (c1+1,c2-1), (c1,c2-1);
    // B(c1,c2) borders (c1,c2), (c1+1,c2-1), (c1+1,c2).
    auto inside = [n1](int m1, int m2) {
      return std::abs(m1) + std::abs(m2) + std::abs(m1 + m2) <= 2 * (n1 - 1);
    };
    for (int c2 = -2 * n1; c2 <= 2 * n1; ++c2) {
      for (int c1 = -2 * n1; c1 <= 2 * n1; ++c1) {
        if (inside(c1, c2) || inside(c1 + 1, c2 - 1) || inside(c1, c2 - 1)) add_site(c1, c2, Sublattice::A);
        if (inside(c1, c2) || inside(c1 + 1, c2 - 1) || inside(c1 + 1, c2)) add_site(c1, c2, Sublattice::B);
      }
    }
  } else {
    if (static_cast<long long>(n1) * n2 * 2 > kMaxSites) {
      throw std::invalid_argument("lattice: " + std::to_string(2LL * n1 * n2) +
                                  " sites exceeds the limit of " + std::to_string(kMaxSites));
    }
    sites_.reserve(static_cast<std::size_t>(2 * n1 * n2));
    for (int c2 = 0; c2 < n2; ++c2) {
      for (int c1 = 0; c1 < n1; ++c1) {
        add_site(c1, c2, Sublattice::A);
        add_site(c1, c2, Sublattice::B);
      }
    }
  }
  connect();
}

bool Lattice::periodic(int dir) const {
  switch (geometry_) {
    case Geometry::Torus:
      return true;
    case Geometry::Cylinder:
      return dir == 0;
    case Geometry::Plane:
      return false;
  }
  return false;
}

Vec2 Lattice::period(int dir) const {
  return dir == 0 ? Vec2(n1_ * bravais_[0]) : Vec2(n2_ * bravais_[1]);
}

std::array<Vec2, 2> Lattice::reciprocal() const {
  Eigen::Matrix2d a;
  a.col(0) = bravais_[0];
  a.col(1) = bravais_[1];
  const Eigen::Matrix2d b = 2.0 * kPi * a.inverse().transpose();
  return {b.col(0), b.col(1)};
}

long long Lattice::key(int c1, int c2, Sublattice s) {
  return ((static_cast<long long>(c1) + (1LL << 20)) << 22) | ((static_cast<long long>(c2) + (1LL << 20)) << 1) |
         (s == Sublattice::B ? 1 : 0);
}

int Lattice::index_of(int c1, int c2, Sublattice s) const {
  const auto it = lookup_.find(key(c1, c2, s));
  return it == lookup_.end() ? -1 : it->second;
}

void Lattice::add_site(int c1, int c2, Sublattice s) {
  Site site;
  site.index = static_cast<int>(sites_.size());
  site.sublattice = s;
  site.cell = {c1, c2};
  site.position = c1 * bravais_[0] + c2 * bravais_[1];
  if (s == Sublattice::B) site.position += basis_offset_;
  lookup_.emplace(key(c1, c2, s), site.index);
  sites_.push_back(site);
}

void Lattice::connect() {
  neighbors_.assign(sites_.size(), {});
  auto wrap = [this](int c, int n, int dir) -> int {
    if (!periodic(dir)) return c;
    return ((c % n) + n) % n;
  };
  for (const auto& site : sites_) {
    const auto [c1, c2] = site.cell;
    // A(c1,c2) bonds to B(c1,c2), B(c1-1,c2), B(c1,c2-1); B mirrors that.
    const int sign = site.sublattice == Sublattice::A ? -1 : 1;
    const Sublattice other = site.sublattice == Sublattice::A ? Sublattice::B : Sublattice::A;
    const std::array<std::array<int, 2>, 3> cells{{{c1, c2}, {c1 + sign, c2}, {c1, c2 + sign}}};
    for (const auto& [d1, d2] : cells) {
      const int j = index_of(wrap(d1, n1_, 0), wrap(d2, n2_, 1), other);
      if (j >= 0) neighbors_[static_cast<std::size_t>(site.index)].push_back(j);
    }
  }
  for (auto& site : sites_) {
    site.is_boundary = neighbors_[static_cast<std::size_t>(site.index)].size() < 3;
  }
}

std::vector<int> Lattice::boundary_distance() const {
  std::vector<int> dist(sites_.size(), -1);
  std::deque<int> queue;
  for (const auto& site : sites_) {
    if (site.is_boundary) {
      dist[static_cast<std::size_t>(site.index)] = 0;
      queue.push_back(site.index);
    }
  }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (int j : neighbors_[static_cast<std::size_t>(i)]) {
      auto& dj = dist[static_cast<std::size_t>(j)];
      if (dj < 0) {
        dj = dist[static_cast<std::size_t>(i)] + 1;
        queue.push_back(j);
      }
    }
  }
  return dist;
}

std::vector<bool> Lattice::boundary_shell(int shell_width) const {
  const auto dist = boundary_distance();
  std::vector<bool> shell(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) shell[i] = dist[i] >= 0 && dist[i] < shell_width;
  return shell;
}

std::vector<int> Lattice::strip_sites() const {
  std::vector<int> strip;
  strip.reserve(static_cast<std::size_t>(2 * n2_));
  for (int c2 = 0; c2 < n2_; ++c2) {
    strip.push_back(index_of(0, c2, Sublattice::A));
    strip.push_back(index_of(0, c2, Sublattice::B));
  }
  return strip;
}

Lattice build_lattice(Geometry geometry, int n1, int n2, const LatticeOptions& options) {
  return Lattice(geometry, n1, n2, options);
}

// ---------------------------------------------------------------------------

Mat2 dipolar_tensor(const Vec2& r) {
  const double norm = r.norm();
  const Vec2 unit = r / norm;
  return (Mat2::Identity() - 3.0 * unit * unit.transpose()) / (norm * norm * norm);
}

CouplingMatrix::CouplingMatrix(int num_sites, const CouplingOptions& options,
                               std::vector<CouplingTerm> terms)
    : num_sites_(num_sites), options_(options), terms_(std::move(terms)) {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const CouplingTerm& a, const CouplingTerm& b) { return a.i < b.i; });
  row_start_.assign(static_cast<std::size_t>(num_sites_) + 1, 0);
  for (const auto& t : terms_) ++row_start_[static_cast<std::size_t>(t.i) + 1];
  for (std::size_t i = 1; i < row_start_.size(); ++i) row_start_[i] += row_start_[i - 1];
}

std::vector<CouplingTerm> CouplingMatrix::terms_from(int i) const {
  const auto first = terms_.begin() + static_cast<std::ptrdiff_t>(row_start_[static_cast<std::size_t>(i)]);
  const auto last = terms_.begin() + static_cast<std::ptrdiff_t>(row_start_[static_cast<std::size_t>(i) + 1]);
  return {first, last};
}

Mat2 CouplingMatrix::block(int i, int j) const {
  Mat2 sum = Mat2::Zero();
  for (std::size_t t = row_start_[static_cast<std::size_t>(i)];
       t < row_start_[static_cast<std::size_t>(i) + 1]; ++t) {
    if (terms_[t].j == j) sum += terms_[t].block;
  }
  return sum;
}

Eigen::MatrixXd CouplingMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * num_sites_, 2 * num_sites_);
  for (const auto& t : terms_) m.block<2, 2>(2 * t.i, 2 * t.j) += t.block;
  return m;
}

CouplingMatrix coulomb_coupling(const Lattice& lat, const CouplingOptions& options) {
  if (!(options.cutoff_radius >= 1.0)) {
    throw std::invalid_argument("coulomb_coupling: cutoff_radius must be >= 1");
  }
  const double cutoff = options.cutoff_radius;
  const double bond = lat.bond_length();

  // Fractional reduction and image ranges for the periodic directions.
  Eigen::Matrix2d periods;
  periods.col(0) = lat.period(0);
  periods.col(1) = lat.period(1);
  const Eigen::Matrix2d to_fractional = periods.inverse();
  const double area = std::abs(periods.determinant());
  std::array<int, 2> image_range{0, 0};
  if (lat.geometry() == Geometry::Torus) {
    image_range[0] = static_cast<int>(std::ceil(cutoff / (area / periods.col(1).norm()))) + 1;
    image_range[1] = static_cast<int>(std::ceil(cutoff / (area / periods.col(0).norm()))) + 1;
  } else if (lat.geometry() == Geometry::Cylinder) {
    image_range[0] = static_cast<int>(std::ceil(cutoff / periods.col(0).norm())) + 1;
  }

  const int n = lat.size();
  std::vector<CouplingTerm> terms;
  for (int i = 0; i < n; ++i) {
    const Vec2& ri = lat.site(i).position;
    Mat2 self_sum = Mat2::Zero();
    for (int j = 0; j < n; ++j) {
      Vec2 base = lat.site(j).position - ri;
      Vec2 frac = to_fractional * base;
      for (int d = 0; d < 2; ++d) {
        if (lat.periodic(d)) frac[d] -= std::round(frac[d]);
      }
      base = periods * frac;
      for (int m1 = -image_range[0]; m1 <= image_range[0]; ++m1) {
        for (int m2 = -image_range[1]; m2 <= image_range[1]; ++m2) {
          const Vec2 r = base + m1 * periods.col(0) + m2 * periods.col(1);
          const double dist = r.norm();
          if (dist < kDistanceEps || dist > cutoff + kDistanceEps) continue;
          if (options.nn_only && std::abs(dist - bond) > kDistanceEps) continue;
          CouplingTerm term{i, j, r, dipolar_tensor(r)};
          self_sum += term.block;
          terms.push_back(term);
        }
      }
    }
    if (options.include_onsite_coulomb) {
      terms.push_back(CouplingTerm{i, i, Vec2::Zero(), -self_sum});
    }
  }
  return CouplingMatrix(n, options, std::move(terms));
}

}  // namespace iontopo
