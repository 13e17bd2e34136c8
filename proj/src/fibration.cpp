#include "orbitfisher/fibration.hpp"

#include <numeric>
#include <sstream>

namespace orbitfisher {

namespace {

RealVector diagonal_of(const DensityMatrix& rho, const char* what) {
  const ComplexMatrix& m = rho.matrix();
  const ComplexMatrix off = m - ComplexMatrix(m.diagonal().asDiagonal());
  const double dev = off.cwiseAbs().maxCoeff();
  if (dev > 1e-12) {
    std::ostringstream os;
    os << what << " must be diagonal (largest off-diagonal entry " << dev << ")";
    throw ValidationError(os.str(), dev);
  }
  return m.diagonal().real();
}

void require_base_point(const ComplexMatrix& expected, const TangentVector& v, const char* what) {
  const double dev = (expected - v.base().matrix()).norm();
  if (dev > 1e-10) {
    std::ostringstream os;
    os << what << ": tangent vector is not based at Ad_U eta0 (distance " << dev << ")";
    throw DomainError(os.str());
  }
}

BasisSet pair_basis(const FibrationSpec& spec, const ComplexMatrix& u, bool vertical) {
  require_unitary(u);
  const int n = spec.n();
  BasisSet out;
  out.n = n;
  out.kind = BasisKind::normal_complement;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!(vertical ? spec.vertical_pair(i, j) : spec.horizontal_pair(i, j))) continue;
      out.elements.push_back(u * symmetric_element(n, i, j) * u.adjoint());
      out.labels.push_back({BasisLabel::Type::symmetric, i, j});
      out.elements.push_back(u * antisymmetric_element(n, i, j) * u.adjoint());
      out.labels.push_back({BasisLabel::Type::antisymmetric, i, j});
    }
  }
  return out;
}

int normal_dim(const std::vector<int>& labels) {
  int d = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = 0; j < labels.size(); ++j)
      if (labels[i] != labels[j]) ++d;
  return d;
}

std::string describe(const std::vector<int>& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << ')';
  return os.str();
}

}  // namespace

bool refines(const std::vector<int>& fine, const std::vector<int>& coarse) {
  if (fine.size() != coarse.size()) return false;
  for (std::size_t i = 0; i < fine.size(); ++i)
    for (std::size_t j = i + 1; j < fine.size(); ++j)
      if (fine[i] == fine[j] && coarse[i] != coarse[j]) return false;
  return true;
}

FibrationSpec FibrationSpec::make(const DensityMatrix& eta0, const DensityMatrix& xi0, double tol) {
  if (eta0.n() != xi0.n()) throw ShapeError("fibration: eta0 and xi0 differ in size");
  FibrationSpec s(eta0, xi0);
  s.tol_ = tol;
  s.eta_kappa_ = diagonal_of(eta0, "fibration eta0");
  s.xi_kappa_ = diagonal_of(xi0, "fibration xi0");
  s.eta_cluster_ = cluster_labels(s.eta_kappa_, tol);
  s.xi_cluster_ = cluster_labels(s.xi_kappa_, tol);
  if (!refines(s.eta_cluster_, s.xi_cluster_))
    throw InclusionError("fibration: stabilizer of eta0 is not contained in stabilizer of xi0 "
                         "(eta0 clusters do not refine xi0 clusters)");
  return s;
}

bool FibrationSpec::vertical_pair(int i, int j) const {
  return xi_cluster_[i] == xi_cluster_[j] && eta_cluster_[i] != eta_cluster_[j];
}

bool FibrationSpec::horizontal_pair(int i, int j) const {
  return xi_cluster_[i] != xi_cluster_[j];
}

DensityMatrix project(const FibrationSpec& spec, const ComplexMatrix& u) {
  return DensityMatrix::from_matrix(adjoint_action(u, spec.xi0().matrix()));
}

FramePtr total_frame(const FibrationSpec& spec, const ComplexMatrix& u) {
  return std::make_shared<const OrbitFrame>(OrbitFrame::from_diagonal(u, spec.eta_kappa(), spec.tol()));
}

FramePtr base_frame(const FibrationSpec& spec, const ComplexMatrix& u) {
  return std::make_shared<const OrbitFrame>(OrbitFrame::from_diagonal(u, spec.xi_kappa(), spec.tol()));
}

TangentVector tangent_projection(const FibrationSpec& spec, const ComplexMatrix& u,
                                 const TangentVector& v) {
  const FramePtr eta = total_frame(spec, u);
  require_base_point(eta->state().matrix(), v, "tangent_projection");
  const ComplexMatrix k = phi_inverse(TangentVector::make(eta, v.value())).value;
  const FramePtr xi = base_frame(spec, u);
  return TangentVector::make(xi, commutator(k, xi->state().matrix()));
}

FibreSplit vertical_horizontal_split(const FibrationSpec& spec, const ComplexMatrix& u,
                                     const TangentVector& v) {
  const FramePtr eta = total_frame(spec, u);
  require_base_point(eta->state().matrix(), v, "vertical_horizontal_split");
  const ComplexMatrix k = eta->to_eigenbasis(phi_inverse(TangentVector::make(eta, v.value())).value);
  const int n = spec.n();
  ComplexMatrix kv = ComplexMatrix::Zero(n, n);
  ComplexMatrix kh = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (spec.horizontal_pair(i, j)) kh(i, j) = k(i, j);
      else if (spec.vertical_pair(i, j)) kv(i, j) = k(i, j);
    }
  kv = eta->from_eigenbasis(kv);
  kh = eta->from_eigenbasis(kh);
  const ComplexMatrix& rho = eta->state().matrix();
  auto vert = TangentVector::make(eta, commutator(kv, rho));
  auto hor = TangentVector::make(eta, commutator(kh, rho));
  return {std::move(vert), std::move(hor), kv, kh};
}

BasisSet vertical_basis(const FibrationSpec& spec, const ComplexMatrix& u) {
  return pair_basis(spec, u, true);
}

BasisSet horizontal_basis(const FibrationSpec& spec, const ComplexMatrix& u) {
  return pair_basis(spec, u, false);
}

DimensionIdentity dimension_identity(const FibrationSpec& spec) {
  DimensionIdentity d;
  d.normal_xi = normal_dim(spec.xi_clusters());
  d.normal_eta = normal_dim(spec.eta_clusters());
  for (int i = 0; i < spec.n(); ++i)
    for (int j = 0; j < spec.n(); ++j)
      if (spec.vertical_pair(i, j)) ++d.vertical;
  return d;
}

std::vector<NestingRow> nesting_report(
    int n, const std::vector<std::pair<std::vector<int>, std::vector<int>>>& pairs) {
  std::vector<NestingRow> rows;
  for (const auto& [fine, coarse] : pairs) {
    NestingRow row;
    row.fine = fine;
    row.coarse = coarse;
    const auto bad = [](const std::vector<int>& p) {
      for (int m : p)
        if (m <= 0) return true;
      return false;
    };
    if (bad(fine) || bad(coarse)) {
      row.error = "partition entries must be positive";
      rows.push_back(std::move(row));
      continue;
    }
    const int sf = std::accumulate(fine.begin(), fine.end(), 0);
    const int sc = std::accumulate(coarse.begin(), coarse.end(), 0);
    if (sf != n || sc != n) {
      std::ostringstream os;
      os << "partitions must sum to n = " << n << " (got " << sf << " and " << sc << ")";
      row.error = os.str();
      rows.push_back(std::move(row));
      continue;
    }
    // Walk the fine blocks through the coarse ones; each must fit inside.
    int fibre = 0;
    std::size_t f = 0;
    bool nested = true;
    for (int c : coarse) {
      int used = 0;
      int sub_squares = 0;
      while (used < c && f < fine.size()) {
        used += fine[f];
        sub_squares += fine[f] * fine[f];
        ++f;
      }
      if (used != c) {
        nested = false;
        break;
      }
      fibre += c * c - sub_squares;
    }
    if (!nested) {
      row.error = "refinement violation: " + describe(fine) + " does not refine " + describe(coarse);
      rows.push_back(std::move(row));
      continue;
    }
    row.total_dim = orbit_dimension(fine);
    row.base_dim = orbit_dimension(coarse);
    row.fibre_dim = fibre;
    row.ok = row.total_dim == row.base_dim + row.fibre_dim;
    if (!row.ok) row.error = "dimension identity total = base + fibre failed";
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace orbitfisher
