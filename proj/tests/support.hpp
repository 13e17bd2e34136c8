#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <random>

#include <Eigen/QR>

#include "orbitfisher/types.hpp"
#include "orbitfisher/orbit_classify.hpp"

namespace tst {

using orbitfisher::ComplexMatrix;
using orbitfisher::cxd;
using orbitfisher::DensityMatrix;
using orbitfisher::RealVector;

inline const cxd I(0.0, 1.0);

inline ComplexMatrix sx() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline ComplexMatrix sy() {
  ComplexMatrix m(2, 2);
  m << 0, -I, I, 0;
  return m;
}
inline ComplexMatrix sz() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// 0-based matrix unit
inline ComplexMatrix unit(int n, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

inline RealVector vec(std::initializer_list<double> v) {
  RealVector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

inline ComplexMatrix diagm(std::initializer_list<double> v) {
  return vec(v).cast<cxd>().asDiagonal();
}

inline DensityMatrix dens(std::initializer_list<double> v) {
  return DensityMatrix::from_matrix(diagm(v));
}

inline double dist(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

// Plain complex Gaussian matrices for test inputs (independent of the library RNG).
inline ComplexMatrix gaussian(int n, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cxd(d(g), d(g));
  return m;
}

inline ComplexMatrix herm(int n, std::mt19937_64& g) {
  ComplexMatrix m = gaussian(n, g);
  return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix antiherm(int n, std::mt19937_64& g) {
  ComplexMatrix m = gaussian(n, g);
  return 0.5 * (m - m.adjoint());
}

// Unitary from the Q factor of a Gaussian matrix.
inline ComplexMatrix unitary(int n, std::mt19937_64& g) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(n, g));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

}  // namespace tst
