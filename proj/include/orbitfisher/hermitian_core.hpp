#pragma once

#include <string>
#include <vector>

#include "orbitfisher/types.hpp"

namespace orbitfisher {

// ---------------------------------------------------------------------------
// Carrier checks. Hermitian matrices model i·u(n) ≅ u*(n) (states, tangent
// values); anti-Hermitian matrices model u(n) (Lie algebra preimages).
// ---------------------------------------------------------------------------

/// ‖M − M†‖_F
double hermitian_deviation(const ComplexMatrix& m);
/// ‖M + M†‖_F
double antihermitian_deviation(const ComplexMatrix& m);
/// ‖U†U − I‖_F
double unitarity_deviation(const ComplexMatrix& u);

bool is_hermitian(const ComplexMatrix& m, double rel_tol = kHermitianRelTol);
bool is_antihermitian(const ComplexMatrix& m, double rel_tol = kHermitianRelTol);

void require_square(const ComplexMatrix& m, const char* what);
void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what);
/// Throws ValidationError naming `what` and the deviation.
void require_hermitian(const ComplexMatrix& m, const char* what);
void require_antihermitian(const ComplexMatrix& m, const char* what);
void require_unitary(const ComplexMatrix& u, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Brackets and group action
// ---------------------------------------------------------------------------

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// U A U†. U must be unitary to 1e-10 (ValidationError carries the deviation).
ComplexMatrix adjoint_action(const ComplexMatrix& u, const ComplexMatrix& a);

/// ⟨g, m⟩ = i·Tr(g m) for Hermitian g and anti-Hermitian m.
double trace_pairing(const ComplexMatrix& g, const ComplexMatrix& m);

/// Matrix of ad_X = [X, ·] acting on u(n), written in the orthonormal basis
/// returned by lie_algebra_basis(n). Size n²×n², real.
RealMatrix ad_matrix(const ComplexMatrix& x);

/// K(X, Y) = Tr(ad_X ∘ ad_Y), evaluated by materializing both ad operators.
double killing_form(const ComplexMatrix& x, const ComplexMatrix& y);

/// 2n·Tr(XY) − 2·Tr(X)·Tr(Y). Cross-check for killing_form only.
double killing_form_closed(const ComplexMatrix& x, const ComplexMatrix& y);

/// exp(iH) for Hermitian H.
ComplexMatrix expi_hermitian(const ComplexMatrix& h);
/// d/dt exp(i(H + tY)) at t = 0 (Daleckii–Krein divided differences).
ComplexMatrix expi_hermitian_derivative(const ComplexMatrix& h, const ComplexMatrix& y);

// ---------------------------------------------------------------------------
// Bases
// ---------------------------------------------------------------------------

enum class BasisKind { gellmann, normal_complement, stabilizer, homogeneous };

const char* to_string(BasisKind kind);

/// Which generalized Gell-Mann family an element belongs to. Indices are
/// 0-based matrix positions.
struct BasisLabel {
  enum class Type { identity, symmetric, antisymmetric, diagonal, elementary };
  Type type;
  int row;  // for diagonal generators: the generator index l (1..n-1)
  int col;
};

struct BasisSet {
  int n = 0;
  BasisKind kind = BasisKind::gellmann;
  std::vector<ComplexMatrix> elements;
  std::vector<BasisLabel> labels;  // parallel to elements

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
};

/// Max |Tr(A†B)| over distinct pairs.
double max_trace_overlap(const BasisSet& basis);

/// E_{ij} + E_{ji}
ComplexMatrix symmetric_element(int n, int i, int j);
/// −i·E_{ij} + i·E_{ji} (the λ2-type element for i < j)
ComplexMatrix antisymmetric_element(int n, int i, int j);
/// sqrt(2/(l(l+1)))·diag(1,…,1,−l,0,…) with l ones, l = 1..n-1
ComplexMatrix diagonal_generator(int n, int l);
ComplexMatrix elementary(int n, int i, int j);

/// Identity followed by the n²−1 generalized Gell-Mann matrices,
/// Tr(λ_a λ_b) = 2δ_ab. For n = 3 the ordering reproduces λ1…λ8 literally;
/// otherwise off-diagonal pairs come in lexicographic (k, j) order (symmetric
/// then antisymmetric) followed by the diagonal generators.
BasisSet gellmann_basis(int n);

/// Orthonormal real basis of u(n) under ⟨A,B⟩ = Re Tr(A†B): i·λ_a/‖λ_a‖.
std::vector<ComplexMatrix> lie_algebra_basis(int n);

/// Real coordinates of a Hermitian matrix in the orthonormalized Gell-Mann
/// basis (length n²), and the inverse map.
RealVector hermitian_coordinates(const ComplexMatrix& h);
ComplexMatrix hermitian_from_coordinates(int n, const RealVector& x);

// ---------------------------------------------------------------------------
// Root system of u(n)
// ---------------------------------------------------------------------------

struct RootDatum {
  int k;  // 0-based
  int j;
  double value;               // λ_k − λ_j
  ComplexMatrix root_vector;  // E_{kj}
  ComplexMatrix dual_root;    // diag(+1 at k, −1 at j)
};

/// All n(n−1) ordered pairs k ≠ j, in row-major order.
/// [diag(λ), E_kj] = (λ_k − λ_j)·E_kj holds for every entry.
std::vector<RootDatum> root_data(int n, const RealVector& lambda);

}  // namespace orbitfisher
