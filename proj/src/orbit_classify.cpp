#include "orbitfisher/orbit_classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "orbitfisher/hermitian_core.hpp"

namespace orbitfisher {

namespace {

constexpr double kTraceTol = 1e-12;
constexpr double kNegativeEigTol = 1e-12;
constexpr double kTieTol = 1e-10;

// Index of the largest-magnitude entry; near-ties go to the lowest row.
Eigen::Index dominant_row(const Eigen::VectorXcd& v) {
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= peak * (1.0 - kTieTol)) return i;
  return 0;
}

void fix_phase(Eigen::VectorXcd& v) {
  const cxd pivot = v(dominant_row(v));
  if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
}

bool lexicographically_greater(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = std::abs(a(i));
    const double y = std::abs(b(i));
    if (std::abs(x - y) > kTieTol) return x > y;
  }
  return false;
}

// Basis of span(cols) that depends only on the subspace: repeatedly take the
// standard basis vector with the largest residual projection.
Eigen::MatrixXcd canonical_subspace_basis(const Eigen::MatrixXcd& cols) {
  const Eigen::Index n = cols.rows();
  const Eigen::Index m = cols.cols();
  Eigen::MatrixXcd residual = cols * cols.adjoint();  // projector columns = P e_i
  Eigen::MatrixXcd out(n, m);
  for (Eigen::Index s = 0; s < m; ++s) {
    const Eigen::VectorXd norms = residual.colwise().norm();
    const double peak = norms.maxCoeff();
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (norms(i) >= peak * (1.0 - kTieTol)) {
        pick = i;
        break;
      }
    Eigen::VectorXcd q = residual.col(pick) / norms(pick);
    out.col(s) = q;
    residual -= q * (q.adjoint() * residual);
  }
  return out;
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m) {
  require_hermitian(m, "density matrix");
  const cxd tr = m.trace();
  const double trace_dev = std::abs(tr - cxd(1.0, 0.0));
  if (trace_dev > kTraceTol) {
    std::ostringstream os;
    os << "density matrix: trace must be 1, |Tr(rho) - 1| = " << trace_dev;
    throw ValidationError(os.str(), trace_dev);
  }
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -kNegativeEigTol) {
    std::ostringstream os;
    os << "density matrix: not positive semidefinite, lowest eigenvalue " << lowest;
    throw ValidationError(os.str(), -lowest);
  }
  return DensityMatrix(std::move(h));
}

bool operator==(const OrbitDescriptor& a, const OrbitDescriptor& b) {
  return a.partition == b.partition && a.rank == b.rank && a.orbit_dim == b.orbit_dim &&
         a.stratum_dim == b.stratum_dim && a.stabilizer_blocks == b.stabilizer_blocks;
}

std::vector<int> partition_of(const RealVector& kappa, double tol) {
  std::vector<int> parts;
  if (kappa.size() == 0) return parts;
  int current = 1;
  for (Eigen::Index i = 1; i < kappa.size(); ++i) {
    const double gap = kappa(i - 1) - kappa(i);
    const double scale = tol * std::max(1.0, std::abs(kappa(i - 1)));
    if (gap < -scale) {
      std::ostringstream os;
      os << "partition_of: eigenvalues must be weakly decreasing (kappa[" << i - 1
         << "] = " << kappa(i - 1) << " < kappa[" << i << "] = " << kappa(i) << ")";
      throw PreconditionError(os.str());
    }
    if (gap <= scale) {
      ++current;
    } else {
      parts.push_back(current);
      current = 1;
    }
  }
  parts.push_back(current);
  return parts;
}

std::vector<int> cluster_labels(const RealVector& kappa, double tol) {
  const auto n = static_cast<std::size_t>(kappa.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return kappa(a) > kappa(b); });
  std::vector<int> labels(n, 0);
  int id = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0) {
      const double prev = kappa(order[r - 1]);
      if (prev - kappa(order[r]) > tol * std::max(1.0, std::abs(prev))) ++id;
    }
    labels[static_cast<std::size_t>(order[r])] = id;
  }
  return labels;
}

SpectralData spectral_decompose(const DensityMatrix& rho, double cluster_tol) {
  const int n = rho.n();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
  if (es.info() != Eigen::Success) throw ValidationError("spectral_decompose: eigensolver failed");

  SpectralData out;
  out.kappa = es.eigenvalues().reverse();
  out.unitary = es.eigenvectors().rowwise().reverse();
  for (Eigen::Index i = 0; i < n; ++i)
    if (out.kappa(i) < 0.0) out.kappa(i) = 0.0;

  const std::vector<int> parts = partition_of(out.kappa, cluster_tol);
  Eigen::Index start = 0;
  for (int m : parts) {
    if (m > 1) {
      Eigen::MatrixXcd block = canonical_subspace_basis(out.unitary.middleCols(start, m));
      std::vector<Eigen::VectorXcd> cols;
      for (Eigen::Index c = 0; c < m; ++c) {
        Eigen::VectorXcd v = block.col(c);
        fix_phase(v);
        cols.push_back(std::move(v));
      }
      std::stable_sort(cols.begin(), cols.end(), lexicographically_greater);
      for (Eigen::Index c = 0; c < m; ++c) out.unitary.col(start + c) = cols[c];
    } else {
      Eigen::VectorXcd v = out.unitary.col(start);
      fix_phase(v);
      out.unitary.col(start) = v;
    }
    start += m;
  }
  return out;
}

int orbit_dimension(const std::vector<int>& partition) {
  const int n = std::accumulate(partition.begin(), partition.end(), 0);
  int sq = 0;
  for (int m : partition) sq += m * m;
  return n * n - sq;
}

OrbitDescriptor classify(const DensityMatrix& rho, double tol) {
  const SpectralData sd = spectral_decompose(rho, tol);
  const int n = rho.n();
  OrbitDescriptor d;
  d.partition = partition_of(sd.kappa, tol);
  for (Eigen::Index i = 0; i < sd.kappa.size(); ++i)
    if (sd.kappa(i) > tol) ++d.rank;
  d.orbit_dim = orbit_dimension(d.partition);
  d.stratum_dim = 2 * n * d.rank - d.rank * d.rank - 1;
  // The zero-eigenvalue block (size n − k) is already the last cluster.
  d.stabilizer_blocks = d.partition;
  return d;
}

bool is_pure(const DensityMatrix& rho, double tol) {
  const ComplexMatrix& m = rho.matrix();
  return (m * m - m).norm() <= tol;
}

DensityMatrix canonical_representative(const DensityMatrix& rho) {
  const SpectralData sd = spectral_decompose(rho);
  ComplexMatrix d = sd.kappa.cast<cxd>().asDiagonal();
  return DensityMatrix::from_matrix(d);
}

int ad_rank(const DensityMatrix& rho, double threshold) {
  const int n = rho.n();
  const auto basis = lie_algebra_basis(n);
  RealMatrix map(n * n, n * n);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const ComplexMatrix image = basis[b] * rho.matrix() - rho.matrix() * basis[b];
    map.col(static_cast<Eigen::Index>(b)) = hermitian_coordinates(image);
  }
  Eigen::JacobiSVD<RealMatrix> svd(map);
  const RealVector& s = svd.singularValues();
  const double cut = threshold * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return rank;
}

OrbitFrame OrbitFrame::from_state(const DensityMatrix& rho, double tol) {
  SpectralData sd = spectral_decompose(rho, tol);
  std::vector<int> labels = cluster_labels(sd.kappa, tol);
  return OrbitFrame(rho, std::move(sd.unitary), std::move(sd.kappa), std::move(labels), tol);
}

OrbitFrame OrbitFrame::from_diagonal(const ComplexMatrix& unitary, const RealVector& kappa,
                                     double tol) {
  if (unitary.rows() != kappa.size()) throw ShapeError("OrbitFrame: kappa length must match U");
  require_unitary(unitary);
  const ComplexMatrix rho = unitary * kappa.cast<cxd>().asDiagonal() * unitary.adjoint();
  return OrbitFrame(DensityMatrix::from_matrix(rho), unitary, kappa, cluster_labels(kappa, tol),
                    tol);
}

int OrbitFrame::normal_dimension() const {
  int count = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (!same_cluster(i, j)) ++count;
  return count;
}

}  // namespace orbitfisher
