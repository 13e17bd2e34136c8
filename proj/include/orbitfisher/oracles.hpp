#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "orbitfisher/orbit_classify.hpp"
#include "orbitfisher/sld.hpp"

namespace orbitfisher {

// Independent reference computations. Nothing here goes through the
// eigenbasis formulas of sld.hpp / geom_tensors.hpp.

using Rng = std::mt19937_64;

/// One-parameter family of density matrices inside a single stratum.
///   unitary_rotation: ρ(θ) = e^{−iθG} ρ_b e^{iθG}
///   eigenvalue_path:  ρ(θ) = U diag(κ0 + θ·dκ) U†
///   composite:        ρ(θ) = e^{−iθG} U diag(κ0 + θ·dκ) U† e^{iθG}
class CurveSpec {
 public:
  enum class Kind { unitary_rotation, eigenvalue_path, composite };

  static CurveSpec unitary_rotation(const ComplexMatrix& generator, const DensityMatrix& base);
  static CurveSpec eigenvalue_path(const RealVector& kappa0, const RealVector& dkappa,
                                   const ComplexMatrix& unitary);
  static CurveSpec composite(const ComplexMatrix& generator, const RealVector& kappa0,
                             const RealVector& dkappa, const ComplexMatrix& unitary);

  Kind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  const ComplexMatrix& generator() const noexcept { return generator_; }
  const ComplexMatrix& base() const noexcept { return base_; }
  const RealVector& kappa0() const noexcept { return kappa0_; }
  const RealVector& dkappa() const noexcept { return dkappa_; }
  const ComplexMatrix& unitary() const noexcept { return unitary_; }

  /// Throws ValidationError when ρ(θ) leaves the set of density matrices.
  DensityMatrix evaluate(double theta) const;

 private:
  CurveSpec() = default;
  Kind kind_ = Kind::unitary_rotation;
  int n_ = 0;
  ComplexMatrix generator_;  // Hermitian; zero for eigenvalue_path
  ComplexMatrix base_;       // unitary_rotation only
  RealVector kappa0_;
  RealVector dkappa_;
  ComplexMatrix unitary_;
};

const char* to_string(CurveSpec::Kind kind);

/// Minimum-norm Hermitian X with ½(Xρ + ρX) = A, from the n²×n² real system in
/// Gell-Mann coordinates (spectral cutoff 1e-12·σ_max on the symmetric system). Throws
/// NoSolutionError if the residual exceeds residual_tol·max(1, ‖A‖_F).
ComplexMatrix sld_linear_solve(const DensityMatrix& rho, const ComplexMatrix& a,
                               double residual_tol = 1e-8);

/// Central difference (ρ(θ0+h) − ρ(θ0−h)) / 2h, Hermitian-symmetrized.
/// Throws StratumError if the rank changes across the stencil.
ComplexMatrix finite_diff_derivative(const CurveSpec& curve, double theta0, double h);

struct MaurerCartan {
  RealVector kappa;         // at θ0
  RealVector dkappa;        // dκ/dθ
  ComplexMatrix offdiag;    // (U†dU/dθ)
};

/// Differentiates the canonical spectral data along the curve. The stencil
/// frames are aligned to the centre frame cluster by cluster (polar factor of
/// the overlap), which removes the phase / in-cluster gauge freedom.
MaurerCartan maurer_cartan_coefficients(const CurveSpec& curve, double theta0, double h);

/// F⊙(∂θ, ∂θ) = Tr(ρ X²) with X = sld_linear_solve(ρ, dρ/dθ).
double fisher_index_along_curve(const CurveSpec& curve, double theta0, double h);

/// Qubit QFI for Bloch vector r and derivative dr:
/// |dr|² + (r·dr)²/(1 − |r|²) inside the ball, |dr|² on the sphere.
double qubit_qfi_reference(const std::array<double, 3>& bloch,
                           const std::array<double, 3>& dbloch);

// ---------------------------------------------------------------------------
// Random generation (deterministic per seed on a given platform)
// ---------------------------------------------------------------------------

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal absorbed.
ComplexMatrix random_unitary(int n, Rng& rng);
ComplexMatrix random_hermitian(int n, Rng& rng);
ComplexMatrix random_antihermitian(int n, Rng& rng);

/// Random κ, weakly decreasing, cluster-equal per `partition`, with the
/// remaining n − Σ partition entries set to zero. Gaps between distinct
/// values (and from zero) are at least 0.01.
RealVector random_spectrum(int n, const std::vector<int>& partition, Rng& rng);

DensityMatrix random_density(int n, const std::vector<int>& partition, std::uint64_t seed);
DensityMatrix random_density(int n, const std::vector<int>& partition, Rng& rng);

/// Random composition of n (ordered multiplicities).
std::vector<int> random_partition(int n, Rng& rng);

/// Random Hermitian element of n_ρ (Gaussian coefficients on the normal basis).
ComplexMatrix random_normal_element(const OrbitFrame& frame, Rng& rng);

}  // namespace orbitfisher
