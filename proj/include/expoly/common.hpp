#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace expoly {

using Complex = std::complex<double>;
using Point = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Pointwise evaluation oracle for a function on R^d.
using Oracle = std::function<Complex(const Point&)>;

/// Relative singular-value threshold shared by every rank decision.
inline constexpr double kDefaultRankTol = 1e-10;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(int expected, int actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  InsufficientSamples(int needed, int available)
      : Error("insufficient samples: need " + std::to_string(needed) +
              ", have " + std::to_string(available)),
        needed_(needed),
        available_(available) {}

  int needed() const { return needed_; }
  int available() const { return available_; }

 private:
  int needed_;
  int available_;
};

class NonFiniteSamples : public Error {
 public:
  using Error::Error;
};

/// Number of singular values with sigma_k / sigma_1 > tol. Zero matrix has rank 0.
int numerical_rank(const ComplexMatrix& m, double tol = kDefaultRankTol);

/// sigma_max / sigma_min; infinity for singular input.
double condition_number(const ComplexMatrix& m);

}  // namespace expoly
