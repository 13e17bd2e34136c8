#pragma once

#include <string>
#include <vector>

#include "orbitfisher/types.hpp"

namespace orbitfisher {

/// Hermitian, positive-semidefinite, unit-trace matrix. Construction validates
/// all three properties; the stored matrix is the Hermitian part of the input.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  int n() const noexcept { return static_cast<int>(m_.rows()); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// ρ = U diag(κ) U† with κ weakly decreasing and each eigenvector's
/// largest-magnitude component real and non-negative.
struct SpectralData {
  ComplexMatrix unitary;
  RealVector kappa;
  std::string phase_convention = "largest_component_real_positive";
};

struct OrbitDescriptor {
  std::vector<int> partition;  // multiplicities in κ order
  int rank = 0;
  int orbit_dim = 0;    // n² − Σ m_i²
  int stratum_dim = 0;  // 2nk − k² − 1
  std::vector<int> stabilizer_blocks;
};

bool operator==(const OrbitDescriptor& a, const OrbitDescriptor& b);

/// Canonical eigendecomposition. Degenerate eigenspaces get a basis that
/// depends only on the subspace (pivoted projection of the standard basis),
/// so the result is deterministic but not continuous across degeneracies.
SpectralData spectral_decompose(const DensityMatrix& rho, double cluster_tol = kClusterTol);

/// Cluster sizes of a weakly decreasing κ; consecutive entries belong to the
/// same cluster when their gap is ≤ tol·max(1, |κ_i|).
std::vector<int> partition_of(const RealVector& kappa, double tol = kClusterTol);

/// Cluster id per entry for κ in any order (ids follow first appearance
/// after sorting by decreasing value).
std::vector<int> cluster_labels(const RealVector& kappa, double tol = kClusterTol);

OrbitDescriptor classify(const DensityMatrix& rho, double tol = kClusterTol);

/// ‖ρ² − ρ‖_F ≤ tol
bool is_pure(const DensityMatrix& rho, double tol = 1e-10);

/// diag(κ) with κ weakly decreasing.
DensityMatrix canonical_representative(const DensityMatrix& rho);

/// Numerical rank of K ↦ [K, ρ] on u(n), singular values above
/// threshold·max(1, σ_max). Equals orbit_dim for a correctly classified ρ.
int ad_rank(const DensityMatrix& rho, double threshold = 1e-10);

int orbit_dimension(const std::vector<int>& partition);

/// Eigenframe of a state together with its eigenvalue clusters. Every map on
/// the tangent space is evaluated in this frame and conjugated back.
class OrbitFrame {
 public:
  static OrbitFrame from_state(const DensityMatrix& rho, double tol = kClusterTol);
  /// ρ = U diag(κ) U† for a known unitary U; κ may be in any order.
  static OrbitFrame from_diagonal(const ComplexMatrix& unitary, const RealVector& kappa,
                                  double tol = kClusterTol);

  const DensityMatrix& state() const noexcept { return state_; }
  const ComplexMatrix& unitary() const noexcept { return unitary_; }
  const RealVector& kappa() const noexcept { return kappa_; }
  const std::vector<int>& clusters() const noexcept { return cluster_; }
  double tol() const noexcept { return tol_; }
  int n() const noexcept { return state_.n(); }

  bool same_cluster(int i, int j) const { return cluster_[i] == cluster_[j]; }
  /// dim n_ρ = n² − Σ m_i²
  int normal_dimension() const;

  ComplexMatrix to_eigenbasis(const ComplexMatrix& a) const {
    return unitary_.adjoint() * a * unitary_;
  }
  ComplexMatrix from_eigenbasis(const ComplexMatrix& a) const {
    return unitary_ * a * unitary_.adjoint();
  }

 private:
  OrbitFrame(DensityMatrix state, ComplexMatrix unitary, RealVector kappa,
             std::vector<int> cluster, double tol)
      : state_(std::move(state)),
        unitary_(std::move(unitary)),
        kappa_(std::move(kappa)),
        cluster_(std::move(cluster)),
        tol_(tol) {}

  DensityMatrix state_;
  ComplexMatrix unitary_;
  RealVector kappa_;
  std::vector<int> cluster_;
  double tol_;
};

}  // namespace orbitfisher
