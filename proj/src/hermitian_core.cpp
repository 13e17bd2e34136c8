#include "orbitfisher/hermitian_core.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace orbitfisher {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::shape: return "shape";
    case ErrorKind::validation: return "validation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::not_in_normal: return "not_in_normal";
    case ErrorKind::no_solution: return "no_solution";
    case ErrorKind::stratum_violation: return "stratum_violation";
    case ErrorKind::crossing: return "crossing";
    case ErrorKind::inclusion: return "inclusion";
  }
  return "unknown";
}

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::gellmann: return "gellmann";
    case BasisKind::normal_complement: return "normal_complement";
    case BasisKind::stabilizer: return "stabilizer";
    case BasisKind::homogeneous: return "homogeneous";
  }
  return "unknown";
}

double hermitian_deviation(const ComplexMatrix& m) {
  return (m - m.adjoint()).norm();
}

double antihermitian_deviation(const ComplexMatrix& m) {
  return (m + m.adjoint()).norm();
}

double unitarity_deviation(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
}

namespace {

double carrier_bound(const ComplexMatrix& m, double rel_tol) {
  return std::max(rel_tol * m.norm(), kHermitianAbsFloor);
}

}  // namespace

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  return m.rows() == m.cols() && hermitian_deviation(m) <= carrier_bound(m, rel_tol);
}

bool is_antihermitian(const ComplexMatrix& m, double rel_tol) {
  return m.rows() == m.cols() && antihermitian_deviation(m) <= carrier_bound(m, rel_tol);
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw ShapeError(os.str());
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": dimension mismatch " << a.rows() << "x" << a.cols() << " vs "
       << b.rows() << "x" << b.cols();
    throw ShapeError(os.str());
  }
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
  require_square(m, what);
  if (!is_hermitian(m)) {
    const double dev = hermitian_deviation(m);
    std::ostringstream os;
    os << what << ": matrix is not Hermitian, ||M - M^dagger||_F = " << dev;
    throw ValidationError(os.str(), dev);
  }
}

void require_antihermitian(const ComplexMatrix& m, const char* what) {
  require_square(m, what);
  if (!is_antihermitian(m)) {
    const double dev = antihermitian_deviation(m);
    std::ostringstream os;
    os << what << ": matrix is not anti-Hermitian, ||M + M^dagger||_F = " << dev;
    throw ValidationError(os.str(), dev);
  }
}

void require_unitary(const ComplexMatrix& u, double tol) {
  require_square(u, "unitary");
  const double dev = unitarity_deviation(u);
  if (!(dev <= tol)) {
    std::ostringstream os;
    os << "unitary: ||U^dagger U - I||_F = " << dev << " exceeds " << tol;
    throw ValidationError(os.str(), dev);
  }
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator");
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "anticommutator");
  require_same_shape(a, b, "anticommutator");
  return a * b + b * a;
}

ComplexMatrix adjoint_action(const ComplexMatrix& u, const ComplexMatrix& a) {
  require_same_shape(u, a, "adjoint_action");
  require_unitary(u);
  return u * a * u.adjoint();
}

double trace_pairing(const ComplexMatrix& g, const ComplexMatrix& m) {
  require_same_shape(g, m, "trace_pairing");
  require_hermitian(g, "trace_pairing(g)");
  require_antihermitian(m, "trace_pairing(m)");
  const cxd value = cxd(0.0, 1.0) * (g * m).trace();
  const double scale = std::max(1.0, g.norm() * m.norm());
  if (std::abs(value.imag()) > 1e-12 * scale) {
    std::ostringstream os;
    os << "trace_pairing: imaginary residue " << value.imag() << " exceeds tolerance";
    throw ValidationError(os.str(), std::abs(value.imag()));
  }
  return value.real();
}

// ---------------------------------------------------------------------------

ComplexMatrix elementary(int n, int i, int j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

ComplexMatrix symmetric_element(int n, int i, int j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  e(j, i) = 1.0;
  return e;
}

ComplexMatrix antisymmetric_element(int n, int i, int j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = cxd(0.0, -1.0);
  e(j, i) = cxd(0.0, 1.0);
  return e;
}

ComplexMatrix diagonal_generator(int n, int l) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  const double c = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
  for (int i = 0; i < l; ++i) e(i, i) = c;
  e(l, l) = -c * l;
  return e;
}

BasisSet gellmann_basis(int n) {
  if (n < 1) throw DomainError("gellmann_basis: n must be positive");
  using Type = BasisLabel::Type;
  BasisSet basis;
  basis.n = n;
  basis.kind = BasisKind::gellmann;
  auto push = [&](ComplexMatrix m, BasisLabel label) {
    basis.elements.push_back(std::move(m));
    basis.labels.push_back(label);
  };
  push(ComplexMatrix::Identity(n, n), {Type::identity, 0, 0});

  auto push_pair = [&](int i, int j) {
    push(symmetric_element(n, i, j), {Type::symmetric, i, j});
    push(antisymmetric_element(n, i, j), {Type::antisymmetric, i, j});
  };

  if (n == 3) {
    // λ1..λ8 in the textbook order.
    push_pair(0, 1);
    push(diagonal_generator(3, 1), {Type::diagonal, 1, 1});
    push_pair(0, 2);
    push_pair(1, 2);
    push(diagonal_generator(3, 2), {Type::diagonal, 2, 2});
    return basis;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) push_pair(i, j);
  for (int l = 1; l < n; ++l) push(diagonal_generator(n, l), {Type::diagonal, l, l});
  return basis;
}

double max_trace_overlap(const BasisSet& basis) {
  double worst = 0.0;
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a + 1; b < basis.size(); ++b)
      worst = std::max(worst,
                       std::abs((basis.elements[a].adjoint() * basis.elements[b]).trace()));
  return worst;
}

std::vector<ComplexMatrix> lie_algebra_basis(int n) {
  const BasisSet gm = gellmann_basis(n);
  std::vector<ComplexMatrix> out;
  out.reserve(gm.size());
  for (const auto& g : gm.elements) out.push_back(cxd(0.0, 1.0) * g / g.norm());
  return out;
}

RealVector hermitian_coordinates(const ComplexMatrix& h) {
  require_square(h, "hermitian_coordinates");
  const BasisSet gm = gellmann_basis(static_cast<int>(h.rows()));
  RealVector x(static_cast<Eigen::Index>(gm.size()));
  for (std::size_t a = 0; a < gm.size(); ++a) {
    const auto& g = gm.elements[a];
    x(static_cast<Eigen::Index>(a)) = g.transpose().cwiseProduct(h).sum().real() / g.norm();
  }
  return x;
}

ComplexMatrix hermitian_from_coordinates(int n, const RealVector& x) {
  const BasisSet gm = gellmann_basis(n);
  if (x.size() != static_cast<Eigen::Index>(gm.size()))
    throw ShapeError("hermitian_from_coordinates: expected n^2 coordinates");
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (std::size_t a = 0; a < gm.size(); ++a)
    h += x(static_cast<Eigen::Index>(a)) * gm.elements[a] / gm.elements[a].norm();
  return h;
}

RealMatrix ad_matrix(const ComplexMatrix& x) {
  require_square(x, "ad_matrix");
  const int n = static_cast<int>(x.rows());
  const auto basis = lie_algebra_basis(n);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  RealMatrix ad(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const ComplexMatrix image = x * basis[b] - basis[b] * x;
    for (Eigen::Index a = 0; a < dim; ++a)
      ad(a, b) = basis[a].conjugate().cwiseProduct(image).sum().real();
  }
  return ad;
}

double killing_form(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_shape(x, y, "killing_form");
  return (ad_matrix(x) * ad_matrix(y)).trace();
}

double killing_form_closed(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_shape(x, y, "killing_form_closed");
  const double n = static_cast<double>(x.rows());
  return (2.0 * n * (x * y).trace() - 2.0 * x.trace() * y.trace()).real();
}

ComplexMatrix expi_hermitian(const ComplexMatrix& h) {
  require_hermitian(h, "expi_hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXcd phases =
      es.eigenvalues().unaryExpr([](double mu) { return std::polar(1.0, mu); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix expi_hermitian_derivative(const ComplexMatrix& h, const ComplexMatrix& y) {
  require_hermitian(h, "expi_hermitian_derivative");
  require_same_shape(h, y, "expi_hermitian_derivative");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  const RealVector& mu = es.eigenvalues();
  const ComplexMatrix& v = es.eigenvectors();
  ComplexMatrix inner = v.adjoint() * y * v;
  // Divided differences of e^{iμ}, written in the cancellation-free form
  // i·e^{i(μj+μk)/2}·sinc((μj−μk)/2).
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
      const double half = 0.5 * (mu(j) - mu(k));
      const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
      inner(j, k) *= cxd(0.0, 1.0) * std::polar(1.0, 0.5 * (mu(j) + mu(k))) * sinc;
    }
  }
  return v * inner * v.adjoint();
}

std::vector<RootDatum> root_data(int n, const RealVector& lambda) {
  if (n < 2) throw DomainError("root_data: n must be at least 2");
  if (lambda.size() != n) throw ShapeError("root_data: lambda must have length n");
  std::vector<RootDatum> roots;
  roots.reserve(static_cast<std::size_t>(n * (n - 1)));
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (k == j) continue;
      ComplexMatrix dual = ComplexMatrix::Zero(n, n);
      dual(k, k) = 1.0;
      dual(j, j) = -1.0;
      roots.push_back({k, j, lambda(k) - lambda(j), elementary(n, k, j), std::move(dual)});
    }
  }
  return roots;
}

}  // namespace orbitfisher
