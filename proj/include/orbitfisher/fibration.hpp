#pragma once

#include <string>
#include <vector>

#include "orbitfisher/sld.hpp"

namespace orbitfisher {

/// Orbit of η0 fibred over the orbit of ξ0. Both representatives are diagonal
/// and share the index order; every η0 cluster must sit inside one ξ0 cluster.
class FibrationSpec {
 public:
  /// Throws ValidationError for non-diagonal input and InclusionError when the
  /// η0 clusters do not refine the ξ0 clusters.
  static FibrationSpec make(const DensityMatrix& eta0, const DensityMatrix& xi0,
                            double tol = kClusterTol);

  int n() const noexcept { return eta0_.n(); }
  const DensityMatrix& eta0() const noexcept { return eta0_; }
  const DensityMatrix& xi0() const noexcept { return xi0_; }
  const RealVector& eta_kappa() const noexcept { return eta_kappa_; }
  const RealVector& xi_kappa() const noexcept { return xi_kappa_; }
  const std::vector<int>& eta_clusters() const noexcept { return eta_cluster_; }
  const std::vector<int>& xi_clusters() const noexcept { return xi_cluster_; }
  double tol() const noexcept { return tol_; }

  /// Index pair (i, j) is a vertical direction: same ξ cluster, different η cluster.
  bool vertical_pair(int i, int j) const;
  /// Index pair (i, j) is horizontal: different ξ clusters.
  bool horizontal_pair(int i, int j) const;

 private:
  FibrationSpec(DensityMatrix eta0, DensityMatrix xi0) : eta0_(std::move(eta0)), xi0_(std::move(xi0)) {}
  DensityMatrix eta0_;
  DensityMatrix xi0_;
  RealVector eta_kappa_;
  RealVector xi_kappa_;
  std::vector<int> eta_cluster_;
  std::vector<int> xi_cluster_;
  double tol_ = kClusterTol;
};

/// True when each cluster of `fine` lies inside a cluster of `coarse`
/// (labels as produced by cluster_labels).
bool refines(const std::vector<int>& fine, const std::vector<int>& coarse);

/// Ad_U ξ0.
DensityMatrix project(const FibrationSpec& spec, const ComplexMatrix& u);

/// Frames at η = Ad_U η0 and ξ = Ad_U ξ0 that keep U as eigenvector matrix.
FramePtr total_frame(const FibrationSpec& spec, const ComplexMatrix& u);
FramePtr base_frame(const FibrationSpec& spec, const ComplexMatrix& u);

/// [K_v, ξ] at ξ = Ad_U ξ0, where v lives at Ad_U η0.
TangentVector tangent_projection(const FibrationSpec& spec, const ComplexMatrix& u,
                                 const TangentVector& v);

struct FibreSplit {
  TangentVector vertical;
  TangentVector horizontal;
  ComplexMatrix k_vertical;    // in h_ξ ∩ n_η
  ComplexMatrix k_horizontal;  // in n_ξ
};

FibreSplit vertical_horizontal_split(const FibrationSpec& spec, const ComplexMatrix& u,
                                     const TangentVector& v);

/// Tangent-value bases at Ad_U η0 (sym then antisym per pair, i < j).
BasisSet vertical_basis(const FibrationSpec& spec, const ComplexMatrix& u);
BasisSet horizontal_basis(const FibrationSpec& spec, const ComplexMatrix& u);

struct DimensionIdentity {
  int normal_xi = 0;    // dim n_ξ
  int vertical = 0;     // dim(h_ξ ∩ n_η)
  int normal_eta = 0;   // dim n_η
  bool holds() const { return normal_xi + vertical == normal_eta; }
};

DimensionIdentity dimension_identity(const FibrationSpec& spec);

struct NestingRow {
  std::vector<int> fine;    // total-space partition, consecutive blocks
  std::vector<int> coarse;  // base partition
  int total_dim = 0;
  int base_dim = 0;
  int fibre_dim = 0;
  bool ok = false;
  std::string error;  // empty when ok
};

/// One row per pair. Rows that fail validation carry `error` and ok = false.
std::vector<NestingRow> nesting_report(
    int n, const std::vector<std::pair<std::vector<int>, std::vector<int>>>& pairs);

}  // namespace orbitfisher
