#include "orbitfisher/sld.hpp"

#include <cmath>
#include <sstream>

namespace orbitfisher {

FramePtr make_frame(const DensityMatrix& rho, double tol) {
  return std::make_shared<const OrbitFrame>(OrbitFrame::from_state(rho, tol));
}

double stabilizer_component(const OrbitFrame& frame, const ComplexMatrix& a) {
  const ComplexMatrix e = frame.to_eigenbasis(a);
  double worst = 0.0;
  for (int i = 0; i < frame.n(); ++i)
    for (int j = 0; j < frame.n(); ++j)
      if (frame.same_cluster(i, j)) worst = std::max(worst, std::abs(e(i, j)));
  return worst;
}

ComplexMatrix project_to_normal(const OrbitFrame& frame, const ComplexMatrix& a) {
  ComplexMatrix e = frame.to_eigenbasis(a);
  for (int i = 0; i < frame.n(); ++i)
    for (int j = 0; j < frame.n(); ++j)
      if (frame.same_cluster(i, j)) e(i, j) = 0.0;
  return frame.from_eigenbasis(e);
}

void require_in_normal(const OrbitFrame& frame, const ComplexMatrix& a, const char* what) {
  require_same_shape(frame.state().matrix(), a, what);
  const double dev = stabilizer_component(frame, a);
  if (dev > kSupportTol * std::max(1.0, a.norm())) {
    std::ostringstream os;
    os << what << ": matrix has a stabilizer-block component of size " << dev
       << " (not in the normal complement)";
    throw NotInNormalError(os.str(), dev);
  }
}

TangentVector TangentVector::make(FramePtr frame, ComplexMatrix value) {
  if (!frame) throw DomainError("TangentVector: missing base point");
  require_hermitian(value, "tangent vector");
  require_in_normal(*frame, value, "tangent vector");
  return TangentVector(std::move(frame), std::move(value));
}

TangentVector TangentVector::make(const DensityMatrix& base, ComplexMatrix value, double tol) {
  return make(make_frame(base, tol), std::move(value));
}

namespace {

void require_diagonal_decreasing(const DensityMatrix& rho0, const char* what) {
  const ComplexMatrix& m = rho0.matrix();
  const ComplexMatrix off = m - ComplexMatrix(m.diagonal().asDiagonal());
  if (off.norm() > kHermitianAbsFloor) {
    std::ostringstream os;
    os << what << ": reference state must be diagonal (off-diagonal norm " << off.norm() << ")";
    throw ValidationError(os.str(), off.norm());
  }
}

OrbitFrame diagonal_frame(const DensityMatrix& rho0, const char* what) {
  require_diagonal_decreasing(rho0, what);
  const int n = rho0.n();
  return OrbitFrame::from_diagonal(ComplexMatrix::Identity(n, n),
                                   rho0.matrix().diagonal().real());
}

BasisSet cross_cluster_basis(const OrbitFrame& frame) {
  using Type = BasisLabel::Type;
  const int n = frame.n();
  BasisSet basis;
  basis.n = n;
  basis.kind = BasisKind::normal_complement;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (frame.same_cluster(i, j)) continue;
      basis.elements.push_back(frame.from_eigenbasis(symmetric_element(n, i, j)));
      basis.labels.push_back({Type::symmetric, i, j});
      basis.elements.push_back(frame.from_eigenbasis(antisymmetric_element(n, i, j)));
      basis.labels.push_back({Type::antisymmetric, i, j});
    }
  }
  return basis;
}

}  // namespace

BasisSet normal_basis(const DensityMatrix& rho0, const std::vector<int>& partition) {
  require_diagonal_decreasing(rho0, "normal_basis");
  const RealVector kappa = rho0.matrix().diagonal().real();
  const std::vector<int> actual = partition_of(kappa);
  if (actual != partition) {
    std::ostringstream os;
    os << "normal_basis: partition (";
    for (std::size_t i = 0; i < partition.size(); ++i) os << (i ? "," : "") << partition[i];
    os << ") is inconsistent with the eigenvalue clusters (";
    for (std::size_t i = 0; i < actual.size(); ++i) os << (i ? "," : "") << actual[i];
    os << ")";
    throw ValidationError(os.str());
  }
  return cross_cluster_basis(diagonal_frame(rho0, "normal_basis"));
}

BasisSet normal_basis(const OrbitFrame& frame) { return cross_cluster_basis(frame); }

LiePreimage phi_inverse(const TangentVector& v) {
  const OrbitFrame& f = v.frame();
  const ComplexMatrix e = f.to_eigenbasis(v.value());
  const int n = f.n();
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!f.same_cluster(i, j)) k(i, j) = e(i, j) / (f.kappa()(j) - f.kappa()(i));
  return {v.frame_ptr(), f.from_eigenbasis(k)};
}

ComplexMatrix d_map(const OrbitFrame& frame, const ComplexMatrix& a) {
  require_in_normal(frame, a, "d_map");
  ComplexMatrix e = frame.to_eigenbasis(a);
  for (int i = 0; i < frame.n(); ++i)
    for (int j = 0; j < frame.n(); ++j)
      e(i, j) = frame.same_cluster(i, j) ? cxd(0.0) : (frame.kappa()(i) - frame.kappa()(j)) * e(i, j);
  return frame.from_eigenbasis(e);
}

ComplexMatrix d_map(const DensityMatrix& rho0, const ComplexMatrix& a) {
  return d_map(diagonal_frame(rho0, "d_map"), a);
}

ComplexMatrix l_map(const OrbitFrame& frame, const ComplexMatrix& a) {
  require_in_normal(frame, a, "l_map");
  ComplexMatrix e = frame.to_eigenbasis(a);
  for (int i = 0; i < frame.n(); ++i)
    for (int j = 0; j < frame.n(); ++j)
      e(i, j) = frame.same_cluster(i, j)
                    ? cxd(0.0)
                    : 2.0 * e(i, j) / (frame.kappa()(i) + frame.kappa()(j));
  return frame.from_eigenbasis(e);
}

ComplexMatrix sld(const TangentVector& v) { return l_map(v.frame(), v.value()); }

BasisSet homogeneous_solutions(const DensityMatrix& rho, double tol) {
  using Type = BasisLabel::Type;
  const OrbitFrame frame = OrbitFrame::from_state(rho, tol);
  const int n = frame.n();
  std::vector<int> zero;
  for (int i = 0; i < n; ++i)
    if (frame.kappa()(i) <= tol) zero.push_back(i);

  BasisSet basis;
  basis.n = n;
  basis.kind = BasisKind::homogeneous;
  for (std::size_t a = 0; a < zero.size(); ++a) {
    const int i = zero[a];
    basis.elements.push_back(frame.from_eigenbasis(elementary(n, i, i)));
    basis.labels.push_back({Type::elementary, i, i});
    for (std::size_t b = a + 1; b < zero.size(); ++b) {
      const int j = zero[b];
      basis.elements.push_back(frame.from_eigenbasis(symmetric_element(n, i, j)));
      basis.labels.push_back({Type::symmetric, i, j});
      basis.elements.push_back(frame.from_eigenbasis(antisymmetric_element(n, i, j)));
      basis.labels.push_back({Type::antisymmetric, i, j});
    }
  }
  return basis;
}

}  // namespace orbitfisher
