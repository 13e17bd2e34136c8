#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace orbitfisher {

using cxd = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Default clustering tolerance for eigenvalue degeneracy; shared by every
// module so that the stabilizer / normal splits agree.
inline constexpr double kClusterTol = 1e-10;

// Relative Frobenius tolerance for Hermiticity claims, with an absolute floor
// for near-zero matrices.
inline constexpr double kHermitianRelTol = 1e-12;
inline constexpr double kHermitianAbsFloor = 1e-14;

enum class ErrorKind {
  shape,
  validation,
  domain,
  precondition,
  not_in_normal,
  no_solution,
  stratum_violation,
  crossing,
  inclusion,
};

const char* to_string(ErrorKind kind);

// Every library failure is an Error. `deviation` carries the measured norm of
// the violated invariant when one exists (otherwise 0).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double deviation = 0.0)
      : std::runtime_error(what), kind_(kind), deviation_(deviation) {}

  ErrorKind kind() const noexcept { return kind_; }
  double deviation() const noexcept { return deviation_; }

 private:
  ErrorKind kind_;
  double deviation_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorKind::shape, what) {}
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, double deviation = 0.0)
      : Error(ErrorKind::validation, what, deviation) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::precondition, what) {}
};

class NotInNormalError : public Error {
 public:
  NotInNormalError(const std::string& what, double deviation)
      : Error(ErrorKind::not_in_normal, what, deviation) {}
};

class NoSolutionError : public Error {
 public:
  NoSolutionError(const std::string& what, double residual)
      : Error(ErrorKind::no_solution, what, residual) {}
};

class StratumError : public Error {
 public:
  explicit StratumError(const std::string& what)
      : Error(ErrorKind::stratum_violation, what) {}
};

class CrossingError : public Error {
 public:
  explicit CrossingError(const std::string& what) : Error(ErrorKind::crossing, what) {}
};

class InclusionError : public Error {
 public:
  explicit InclusionError(const std::string& what) : Error(ErrorKind::inclusion, what) {}
};

}  // namespace orbitfisher
