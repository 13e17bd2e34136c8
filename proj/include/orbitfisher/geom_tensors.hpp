#pragma once

#include <string>
#include <vector>

#include "orbitfisher/oracles.hpp"
#include "orbitfisher/sld.hpp"

namespace orbitfisher {

/// Sign and reality conventions attached to every tensor report.
struct Conventions {
  std::string pairing_sign = "kks(v,w) = -i Tr(rho [K_v, K_w]), K = phi_inverse(v) anti-Hermitian";
  std::string antisym_extraction = "fisher_antisym = Im Tr(rho L_v L_w)";
};

/// Fisher tensor and companions in a basis {e_a} of n_ρ (tangent values).
struct TensorReport {
  FramePtr frame;
  BasisSet basis;
  RealMatrix fisher_sym;      // Re F(e_a, e_b)
  RealMatrix fisher_antisym;  // Im F(e_a, e_b)
  RealMatrix kks;             // Ω(e_a, e_b)
  RealMatrix bures;           // fisher_sym / 4
  RealMatrix kks_metric;      // G(e_a, e_b) = ½Tr(ρ{K'_a, K'_b})
  Conventions conventions;

  const DensityMatrix& base() const { return frame->state(); }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
};

/// Ω(v, w) = −i·Tr(ρ[K_v, K_w]).
double kks_form(const TangentVector& v, const TangentVector& w);

/// F(v, w) = Tr(ρ·sld(v)·sld(w)).
cxd fisher_tensor(const TangentVector& v, const TangentVector& w);

/// G(v, w) = ½Tr(ρ{K'_v, K'_w}) with Hermitian carriers K' = −iK.
double kks_compatible_metric(const TangentVector& v, const TangentVector& w);

/// g_B(v, w) = ¼·Re Tr(ρ·½(L_v L_w + L_w L_v)).
double bures_tangent(const TangentVector& v, const TangentVector& w);

/// Builds the full report. The basis must be Hermitian, lie in n_ρ, and be
/// linearly independent with dim n_ρ elements (ValidationError otherwise).
TensorReport fisher_split(const FramePtr& frame, const BasisSet& basis);
/// Report in the default Gell-Mann-type basis of n_ρ.
TensorReport fisher_split(const FramePtr& frame);
TensorReport fisher_split(const DensityMatrix& rho, double tol = kClusterTol);

struct PullbackCheck {
  double max_deviation = 0.0;  // max |F^∧(e_a,e_b) − ½(−i)Tr(ρ[LD(K_a), LD(K_b)])|
  double max_fisher = 0.0;     // max |F(e_a,e_b)|

  /// max_deviation ≤ 1e-10·(1 + max_fisher)
  bool within_contract(double rel = 1e-10) const {
    return max_deviation <= rel * (1.0 + max_fisher);
  }
};

/// Compares the antisymmetric Fisher part against ½(DL)*Ω evaluated with full
/// matrix products in the original frame.
PullbackCheck pullback_identity_check(const FramePtr& frame, const BasisSet& basis);
PullbackCheck pullback_identity_check(const TensorReport& report);

/// g_B from Maurer–Cartan data:
/// Σ_i ¼·dκ_i²/κ_i + Σ_{i<j} Λ_ij·|(U†dU)_ij|², Λ_ij = (κ_i−κ_j)²/(κ_i+κ_j).
/// Indices with κ_i ≤ tol contribute no eigenvalue term.
double bures_from_maurer_cartan(const MaurerCartan& mc, double tol = kClusterTol);

/// g_B(∂θ, ∂θ) along a curve; h defaults to 1e-5.
double bures_full(const CurveSpec& curve, double theta0, double h = 1e-5);

double bures_lambda(double ki, double kj);

struct PairCoefficients {
  int i;  // 0-based
  int j;
  double sym;      // 4(k_i−k_j)²/(k_i+k_j)
  double antisym;  // 4|k_i−k_j|³/(k_i+k_j)²
};

PairCoefficients fisher_pair_coefficients(int i, int j, double ki, double kj);

/// Closed-form U(3) coefficients for pairs (0,1), (0,2), (1,2). κ must be
/// three distinct positive reals summing to 1 (DomainError otherwise).
std::vector<PairCoefficients> fisher_u3_closed_form(const RealVector& kappa);

/// Report coefficients rewritten in the exponential chart U·exp(iH): for each
/// cross-cluster pair (i<j) with H_ij = x + iy,
///   ∂x ↦ (κ_i−κ_j)·e_anti(ij),  ∂y ↦ (κ_i−κ_j)·e_sym(ij).
struct ChartCoefficients {
  int i;
  int j;
  double sym_xx;      // F⊙(∂x, ∂x)
  double sym_yy;      // F⊙(∂y, ∂y)
  double sym_xy;      // F⊙(∂x, ∂y)
  double antisym_xy;  // F^∧(∂x, ∂y)
};

struct ChartReport {
  std::vector<ChartCoefficients> pairs;
  double max_cross_pair = 0.0;  // largest |F| between different pairs
};

/// Requires a report built on the default normal basis (labels present).
ChartReport chart_coefficients(const TensorReport& report);

enum class TwoForm { fisher_antisym, kks };

/// Exterior derivative of a 2-form on the orbit pulled back along
/// x ↦ Ad_{W·exp(i Σ x_a G_a)} diag(κ), by central differences of step h at x0.
/// Returns max |dω_abc| over all a < b < c.
double closedness_residual(TwoForm form, const RealVector& kappa, const ComplexMatrix& w,
                           const std::vector<ComplexMatrix>& generators, const RealVector& x0,
                           double h = 1e-4);

double fisher_antisym_closedness(const RealVector& kappa, const ComplexMatrix& w,
                                 const std::vector<ComplexMatrix>& generators,
                                 const RealVector& x0, double h = 1e-4);

/// σ_min/σ_max of a square matrix (0 for an empty matrix).
double singular_ratio(const RealMatrix& m);

}  // namespace orbitfisher
