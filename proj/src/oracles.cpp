#include "orbitfisher/oracles.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "orbitfisher/hermitian_core.hpp"

namespace orbitfisher {

const char* to_string(CurveSpec::Kind kind) {
  switch (kind) {
    case CurveSpec::Kind::unitary_rotation: return "unitary_rotation";
    case CurveSpec::Kind::eigenvalue_path: return "eigenvalue_path";
    case CurveSpec::Kind::composite: return "composite";
  }
  return "unknown";
}

namespace {

void check_eigenvalue_path(const RealVector& kappa0, const RealVector& dkappa,
                           const ComplexMatrix& unitary) {
  if (kappa0.size() == 0 || kappa0.size() != dkappa.size() || kappa0.size() != unitary.rows())
    throw ShapeError("curve: kappa0, dkappa and unitary must share dimension n");
  require_unitary(unitary);
  const double trace_dev = std::abs(kappa0.sum() - 1.0);
  if (trace_dev > 1e-12)
    throw ValidationError("curve: kappa0 must sum to 1", trace_dev);
  if (std::abs(dkappa.sum()) > 1e-12)
    throw ValidationError("curve: dkappa must sum to 0 (trace is constant)", std::abs(dkappa.sum()));
}

ComplexMatrix rotation(const ComplexMatrix& generator, double theta) {
  return expi_hermitian(-theta * generator);
}

int rank_of(const DensityMatrix& rho) { return classify(rho).rank; }

}  // namespace

CurveSpec CurveSpec::unitary_rotation(const ComplexMatrix& generator, const DensityMatrix& base) {
  require_hermitian(generator, "curve generator");
  require_same_shape(generator, base.matrix(), "curve generator");
  CurveSpec c;
  c.kind_ = Kind::unitary_rotation;
  c.n_ = base.n();
  c.generator_ = generator;
  c.base_ = base.matrix();
  return c;
}

CurveSpec CurveSpec::eigenvalue_path(const RealVector& kappa0, const RealVector& dkappa,
                                     const ComplexMatrix& unitary) {
  check_eigenvalue_path(kappa0, dkappa, unitary);
  CurveSpec c;
  c.kind_ = Kind::eigenvalue_path;
  c.n_ = static_cast<int>(kappa0.size());
  c.generator_ = ComplexMatrix::Zero(c.n_, c.n_);
  c.kappa0_ = kappa0;
  c.dkappa_ = dkappa;
  c.unitary_ = unitary;
  return c;
}

CurveSpec CurveSpec::composite(const ComplexMatrix& generator, const RealVector& kappa0,
                               const RealVector& dkappa, const ComplexMatrix& unitary) {
  check_eigenvalue_path(kappa0, dkappa, unitary);
  require_hermitian(generator, "curve generator");
  require_same_shape(generator, unitary, "curve generator");
  CurveSpec c;
  c.kind_ = Kind::composite;
  c.n_ = static_cast<int>(kappa0.size());
  c.generator_ = generator;
  c.kappa0_ = kappa0;
  c.dkappa_ = dkappa;
  c.unitary_ = unitary;
  return c;
}

DensityMatrix CurveSpec::evaluate(double theta) const {
  ComplexMatrix rho;
  if (kind_ == Kind::unitary_rotation) {
    rho = base_;
  } else {
    const RealVector kappa = kappa0_ + theta * dkappa_;
    rho = unitary_ * kappa.cast<cxd>().asDiagonal() * unitary_.adjoint();
  }
  if (kind_ != Kind::eigenvalue_path) {
    const ComplexMatrix r = rotation(generator_, theta);
    rho = r * rho * r.adjoint();
  }
  return DensityMatrix::from_matrix(rho);
}

// ---------------------------------------------------------------------------

ComplexMatrix sld_linear_solve(const DensityMatrix& rho, const ComplexMatrix& a,
                               double residual_tol) {
  require_same_shape(rho.matrix(), a, "sld_linear_solve");
  require_hermitian(a, "sld_linear_solve(A)");
  const int n = rho.n();
  const ComplexMatrix& r = rho.matrix();

  const BasisSet gm = gellmann_basis(n);
  const Eigen::Index dim = n * n;
  RealMatrix system(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const ComplexMatrix g = gm.elements[static_cast<std::size_t>(b)] /
                            gm.elements[static_cast<std::size_t>(b)].norm();
    system.col(b) = hermitian_coordinates(0.5 * (g * r + r * g));
  }
  const RealVector rhs = hermitian_coordinates(a);

  // The map X ↦ ½{X, ρ} is self-adjoint in orthonormal coordinates, so its
  // eigendecomposition is the rank-revealing factorization.
  const RealMatrix sym = 0.5 * (system + system.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym);
  const RealVector& s = es.eigenvalues();
  const double top = s.size() > 0 ? s.cwiseAbs().maxCoeff() : 0.0;
  const double cutoff = 1e-12 * top;
  RealVector proj = es.eigenvectors().transpose() * rhs;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    proj(i) = std::abs(s(i)) > cutoff ? proj(i) / s(i) : 0.0;
  const ComplexMatrix x = hermitian_from_coordinates(n, es.eigenvectors() * proj);

  const double residual = (0.5 * (x * r + r * x) - a).norm();
  if (residual > residual_tol * std::max(1.0, a.norm())) {
    std::ostringstream os;
    os << "sld_linear_solve: right-hand side is not in the range of the anticommutator "
          "map, residual "
       << residual;
    throw NoSolutionError(os.str(), residual);
  }
  return 0.5 * (x + x.adjoint());
}

ComplexMatrix finite_diff_derivative(const CurveSpec& curve, double theta0, double h) {
  if (!(h > 0.0)) throw DomainError("finite_diff_derivative: step h must be positive");
  const DensityMatrix lo = curve.evaluate(theta0 - h);
  const DensityMatrix mid = curve.evaluate(theta0);
  const DensityMatrix hi = curve.evaluate(theta0 + h);
  const int r0 = rank_of(mid);
  if (rank_of(lo) != r0 || rank_of(hi) != r0) {
    std::ostringstream os;
    os << "finite_diff_derivative: rank changes across the stencil at theta = " << theta0;
    throw StratumError(os.str());
  }
  const ComplexMatrix d = (hi.matrix() - lo.matrix()) / (2.0 * h);
  return 0.5 * (d + d.adjoint());
}

MaurerCartan maurer_cartan_coefficients(const CurveSpec& curve, double theta0, double h) {
  if (!(h > 0.0)) throw DomainError("maurer_cartan_coefficients: step h must be positive");
  const DensityMatrix mid = curve.evaluate(theta0);
  const DensityMatrix lo = curve.evaluate(theta0 - h);
  const DensityMatrix hi = curve.evaluate(theta0 + h);
  const int r0 = rank_of(mid);
  if (rank_of(lo) != r0 || rank_of(hi) != r0) {
    std::ostringstream os;
    os << "maurer_cartan_coefficients: rank changes across the stencil at theta = " << theta0;
    throw StratumError(os.str());
  }

  const SpectralData s0 = spectral_decompose(mid);
  SpectralData sm = spectral_decompose(lo);
  SpectralData sp = spectral_decompose(hi);
  const std::vector<int> parts = partition_of(s0.kappa);
  if (partition_of(sm.kappa) != parts || partition_of(sp.kappa) != parts) {
    std::ostringstream os;
    os << "maurer_cartan_coefficients: eigenvalue crossing inside the stencil at theta = "
       << theta0;
    throw CrossingError(os.str());
  }

  auto align = [&](SpectralData& s) {
    Eigen::Index start = 0;
    for (int m : parts) {
      const ComplexMatrix overlap =
          s.unitary.middleCols(start, m).adjoint() * s0.unitary.middleCols(start, m);
      Eigen::JacobiSVD<ComplexMatrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const ComplexMatrix polar = svd.matrixU() * svd.matrixV().adjoint();
      s.unitary.middleCols(start, m) = s.unitary.middleCols(start, m) * polar;
      start += m;
    }
  };
  align(sm);
  align(sp);

  MaurerCartan mc;
  mc.kappa = s0.kappa;
  mc.dkappa = (sp.kappa - sm.kappa) / (2.0 * h);
  mc.offdiag = s0.unitary.adjoint() * (sp.unitary - sm.unitary) / (2.0 * h);
  return mc;
}

double fisher_index_along_curve(const CurveSpec& curve, double theta0, double h) {
  const ComplexMatrix drho = finite_diff_derivative(curve, theta0, h);
  const DensityMatrix rho = curve.evaluate(theta0);
  const ComplexMatrix x = sld_linear_solve(rho, drho);
  return (rho.matrix() * x * x).trace().real();
}

double qubit_qfi_reference(const std::array<double, 3>& bloch,
                           const std::array<double, 3>& dbloch) {
  const double r2 = bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2];
  const double d2 = dbloch[0] * dbloch[0] + dbloch[1] * dbloch[1] + dbloch[2] * dbloch[2];
  const double dot = bloch[0] * dbloch[0] + bloch[1] * dbloch[1] + bloch[2] * dbloch[2];
  constexpr double kEdge = 1e-12;
  if (r2 > 1.0 + kEdge) throw DomainError("qubit_qfi_reference: Bloch vector outside the ball");
  if (r2 >= 1.0 - kEdge) {
    if (std::abs(dot) > kEdge * std::max(1.0, std::sqrt(d2)))
      throw DomainError(
          "qubit_qfi_reference: radial derivative at a pure state leaves the pure stratum");
    return d2;
  }
  return d2 + dot * dot / (1.0 - r2);
}

// ---------------------------------------------------------------------------

ComplexMatrix random_unitary(int n, Rng& rng) {
  if (n < 1) throw DomainError("random_unitary: n must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = cxd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& packed = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    const cxd d = packed(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix random_hermitian(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = cxd(gauss(rng), gauss(rng));
  return 0.5 * (z + z.adjoint());
}

ComplexMatrix random_antihermitian(int n, Rng& rng) {
  return cxd(0.0, 1.0) * random_hermitian(n, rng);
}

RealVector random_spectrum(int n, const std::vector<int>& partition, Rng& rng) {
  constexpr double kGap = 0.01;
  const int used = std::accumulate(partition.begin(), partition.end(), 0);
  if (partition.empty() || used > n || n < 1)
    throw DomainError("random_spectrum: partition must be non-empty and sum to at most n");
  for (int m : partition)
    if (m <= 0) throw DomainError("random_spectrum: multiplicities must be positive");

  const int c = static_cast<int>(partition.size());
  // Floors v_r = kGap·(c − r) for r = 0..c−1 keep every gap (and the gap to
  // zero) at least kGap; the leftover mass is spread over the gaps.
  double floor_mass = 0.0;
  for (int r = 0; r < c; ++r) floor_mass += partition[r] * kGap * (c - r);
  if (floor_mass > 1.0) throw DomainError("random_spectrum: partition is infeasible with gap 0.01");
  const double free_mass = 1.0 - floor_mass;

  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(c));
  for (auto& x : w) x = expo(rng);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);

  // g_s is the extra gap between cluster s and s+1 (s = c−1: above zero);
  // raising g_s lifts every cluster r ≤ s, i.e. a mass of cum_s.
  std::vector<double> value(static_cast<std::size_t>(c), 0.0);
  int cum = 0;
  std::vector<double> extra(static_cast<std::size_t>(c));
  for (int s = 0; s < c; ++s) {
    cum += partition[s];
    extra[s] = free_mass * w[s] / wsum / cum;
  }
  for (int r = 0; r < c; ++r) {
    double v = 0.0;
    for (int s = r; s < c; ++s) v += kGap + extra[s];
    value[r] = v;
  }

  RealVector kappa = RealVector::Zero(n);
  int pos = 0;
  for (int r = 0; r < c; ++r)
    for (int k = 0; k < partition[r]; ++k) kappa(pos++) = value[r];
  kappa /= kappa.sum();  // absorb rounding so that Tr = 1 to machine precision
  return kappa;
}

DensityMatrix random_density(int n, const std::vector<int>& partition, Rng& rng) {
  const RealVector kappa = random_spectrum(n, partition, rng);
  const ComplexMatrix u = random_unitary(n, rng);
  const ComplexMatrix rho = u * kappa.cast<cxd>().asDiagonal() * u.adjoint();
  return DensityMatrix::from_matrix(rho);
}

DensityMatrix random_density(int n, const std::vector<int>& partition, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(n, partition, rng);
}

std::vector<int> random_partition(int n, Rng& rng) {
  std::bernoulli_distribution cut(0.5);
  std::vector<int> parts;
  int current = 1;
  for (int i = 1; i < n; ++i) {
    if (cut(rng)) {
      parts.push_back(current);
      current = 1;
    } else {
      ++current;
    }
  }
  parts.push_back(current);
  return parts;
}

ComplexMatrix random_normal_element(const OrbitFrame& frame, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const BasisSet basis = normal_basis(frame);
  ComplexMatrix v = ComplexMatrix::Zero(frame.n(), frame.n());
  for (const auto& e : basis.elements) v += gauss(rng) * e;
  return 0.5 * (v + v.adjoint());
}

}  // namespace orbitfisher
