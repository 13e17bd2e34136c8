#pragma once

#include <memory>

#include "orbitfisher/hermitian_core.hpp"
#include "orbitfisher/orbit_classify.hpp"

namespace orbitfisher {

using FramePtr = std::shared_ptr<const OrbitFrame>;

FramePtr make_frame(const DensityMatrix& rho, double tol = kClusterTol);

/// Tolerance for "entry vanishes" tests on stabilizer-block entries.
inline constexpr double kSupportTol = 1e-10;

/// Largest |entry| of U†AU on same-cluster positions (the h_ρ component).
double stabilizer_component(const OrbitFrame& frame, const ComplexMatrix& a);

/// Zeroes the same-cluster entries in the eigenbasis: trace-orthogonal
/// projection onto n_ρ.
ComplexMatrix project_to_normal(const OrbitFrame& frame, const ComplexMatrix& a);

/// Throws NotInNormalError when `a` has a stabilizer component above
/// kSupportTol·max(1, ‖a‖_F).
void require_in_normal(const OrbitFrame& frame, const ComplexMatrix& a, const char* what);

/// A Hermitian matrix dρ(v) ∈ n_ρ attached to its base point.
class TangentVector {
 public:
  static TangentVector make(FramePtr frame, ComplexMatrix value);
  static TangentVector make(const DensityMatrix& base, ComplexMatrix value,
                            double tol = kClusterTol);

  const OrbitFrame& frame() const noexcept { return *frame_; }
  const FramePtr& frame_ptr() const noexcept { return frame_; }
  const DensityMatrix& base() const noexcept { return frame_->state(); }
  const ComplexMatrix& value() const noexcept { return value_; }

 private:
  TangentVector(FramePtr frame, ComplexMatrix value)
      : frame_(std::move(frame)), value_(std::move(value)) {}
  FramePtr frame_;
  ComplexMatrix value_;
};

/// Anti-Hermitian K ∈ n_ρ with v = [K, ρ].
struct LiePreimage {
  FramePtr frame;
  ComplexMatrix value;
};

/// Hermitian basis of n_ρ0 for a diagonal ρ0 with weakly decreasing κ: for
/// each cross-cluster pair (i < j), the symmetric then antisymmetric element.
/// For n = 3 generic this is {λ1, λ2, λ4, λ5, λ6, λ7}.
BasisSet normal_basis(const DensityMatrix& rho0, const std::vector<int>& partition);

/// The same basis transported to ρ = U ρ0 U† through the frame's unitary.
BasisSet normal_basis(const OrbitFrame& frame);

/// K = Φ⁻¹(v): K_ij = v_ij / (κ_j − κ_i) on cross-cluster entries.
LiePreimage phi_inverse(const TangentVector& v);

/// D(A)_ij = (κ_i − κ_j)·A_ij in the eigenbasis. Flips the carrier type
/// (Hermitian ↔ anti-Hermitian). A must be supported on n_ρ.
ComplexMatrix d_map(const OrbitFrame& frame, const ComplexMatrix& a);
/// Same, for a diagonal ρ0 given directly.
ComplexMatrix d_map(const DensityMatrix& rho0, const ComplexMatrix& a);

/// L(A)_ij = 2·A_ij / (κ_i + κ_j) in the eigenbasis; the particular solution of
/// A = ½{X, ρ} that lies in n_ρ.
ComplexMatrix l_map(const OrbitFrame& frame, const ComplexMatrix& a);

/// Symmetric logarithmic differential: the unique L ∈ n_ρ with
/// dρ(v) = ½{L, ρ}.
ComplexMatrix sld(const TangentVector& v);

/// Real basis of V0 = {X Hermitian : {X, ρ} = 0}, i.e. Hermitian matrices
/// supported on the zero-eigenvalue block.
BasisSet homogeneous_solutions(const DensityMatrix& rho, double tol = kClusterTol);

}  // namespace orbitfisher
