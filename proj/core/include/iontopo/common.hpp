#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace iontopo {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Error categories. The CLI maps them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class GapClosedError : public NumericalError {
 public:
  GapClosedError(const std::string& what, int gap_index, double min_spacing)
      : NumericalError(what), gap_index_(gap_index), min_spacing_(min_spacing) {}
  int gap_index() const { return gap_index_; }
  double min_spacing() const { return min_spacing_; }

 private:
  int gap_index_;
  double min_spacing_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Worker count used by parallel_for. Defaults to 1.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Each index is visited exactly once; callers write
// into preallocated slots so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace iontopo
