#include "orbitfisher/geom_tensors.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include <Eigen/SVD>

namespace orbitfisher {

namespace {

void require_same_base(const TangentVector& v, const TangentVector& w, const char* what) {
  if (v.frame_ptr() == w.frame_ptr()) return;
  const double dev = (v.base().matrix() - w.base().matrix()).norm();
  if (v.base().n() != w.base().n() || dev > 1e-12) {
    std::ostringstream os;
    os << what << ": tangent vectors live at different base points (distance " << dev << ")";
    throw DomainError(os.str());
  }
}

// Tr(diag(κ)·A·B) without forming the product.
cxd weighted_trace(const RealVector& kappa, const ComplexMatrix& a, const ComplexMatrix& b) {
  return (kappa.asDiagonal() * a).cwiseProduct(b.transpose()).sum();
}

struct EigenCarriers {
  ComplexMatrix l;      // SLD in the eigenbasis
  ComplexMatrix k;      // anti-Hermitian preimage in the eigenbasis
};

EigenCarriers carriers(const OrbitFrame& f, const ComplexMatrix& value) {
  const ComplexMatrix e = f.to_eigenbasis(value);
  const int n = f.n();
  EigenCarriers c{ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (f.same_cluster(i, j)) continue;
      c.l(i, j) = 2.0 * e(i, j) / (f.kappa()(i) + f.kappa()(j));
      c.k(i, j) = e(i, j) / (f.kappa()(j) - f.kappa()(i));
    }
  }
  return c;
}

void validate_basis(const OrbitFrame& frame, const BasisSet& basis) {
  if (basis.n != frame.n())
    throw ShapeError("fisher_split: basis dimension does not match the state");
  for (const auto& e : basis.elements) {
    require_hermitian(e, "fisher_split basis element");
    require_in_normal(frame, e, "fisher_split basis element");
  }
  const auto d = static_cast<Eigen::Index>(basis.size());
  if (d != frame.normal_dimension()) {
    std::ostringstream os;
    os << "fisher_split: basis has " << d << " elements but dim n_rho = "
       << frame.normal_dimension();
    throw ValidationError(os.str());
  }
  if (d == 0) return;
  RealMatrix gram(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      gram(a, b) = basis.elements[a].transpose().cwiseProduct(basis.elements[b]).sum().real();
  const double ratio = singular_ratio(gram);
  if (ratio <= 1e-10) {
    std::ostringstream os;
    os << "fisher_split: degenerate basis (Gram singular-value ratio " << ratio << ")";
    throw ValidationError(os.str(), ratio);
  }
}

}  // namespace

double singular_ratio(const RealMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const RealVector& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

double kks_form(const TangentVector& v, const TangentVector& w) {
  require_same_base(v, w, "kks_form");
  const ComplexMatrix kv = phi_inverse(v).value;
  const ComplexMatrix kw = phi_inverse(w).value;
  const cxd value = cxd(0.0, -1.0) * (v.base().matrix() * (kv * kw - kw * kv)).trace();
  return value.real();
}

cxd fisher_tensor(const TangentVector& v, const TangentVector& w) {
  require_same_base(v, w, "fisher_tensor");
  return (v.base().matrix() * sld(v) * sld(w)).trace();
}

double kks_compatible_metric(const TangentVector& v, const TangentVector& w) {
  require_same_base(v, w, "kks_compatible_metric");
  const ComplexMatrix kv = cxd(0.0, -1.0) * phi_inverse(v).value;
  const ComplexMatrix kw = cxd(0.0, -1.0) * phi_inverse(w).value;
  return 0.5 * (v.base().matrix() * (kv * kw + kw * kv)).trace().real();
}

double bures_tangent(const TangentVector& v, const TangentVector& w) {
  require_same_base(v, w, "bures_tangent");
  const ComplexMatrix lv = sld(v);
  const ComplexMatrix lw = sld(w);
  return 0.25 * (v.base().matrix() * 0.5 * (lv * lw + lw * lv)).trace().real();
}

TensorReport fisher_split(const FramePtr& frame, const BasisSet& basis) {
  if (!frame) throw DomainError("fisher_split: missing base point");
  validate_basis(*frame, basis);
  const auto d = static_cast<Eigen::Index>(basis.size());
  const RealVector& kappa = frame->kappa();

  std::vector<EigenCarriers> c;
  c.reserve(basis.size());
  for (const auto& e : basis.elements) c.push_back(carriers(*frame, e));

  TensorReport r;
  r.frame = frame;
  r.basis = basis;
  r.fisher_sym.resize(d, d);
  r.fisher_antisym.resize(d, d);
  r.kks.resize(d, d);
  r.kks_metric.resize(d, d);
  const cxd minus_i(0.0, -1.0);
  // Fixed pair order keeps the output bitwise reproducible.
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const auto& ca = c[static_cast<std::size_t>(a)];
      const auto& cb = c[static_cast<std::size_t>(b)];
      const cxd f = weighted_trace(kappa, ca.l, cb.l);
      r.fisher_sym(a, b) = f.real();
      r.fisher_antisym(a, b) = f.imag();
      const cxd omega =
          minus_i * (weighted_trace(kappa, ca.k, cb.k) - weighted_trace(kappa, cb.k, ca.k));
      r.kks(a, b) = omega.real();
      // K' = −iK, so K'_a K'_b = −K_a K_b.
      const cxd g = -0.5 * (weighted_trace(kappa, ca.k, cb.k) + weighted_trace(kappa, cb.k, ca.k));
      r.kks_metric(a, b) = g.real();
    }
  }
  r.bures = r.fisher_sym / 4.0;
  return r;
}

TensorReport fisher_split(const FramePtr& frame) {
  if (!frame) throw DomainError("fisher_split: missing base point");
  return fisher_split(frame, normal_basis(*frame));
}

TensorReport fisher_split(const DensityMatrix& rho, double tol) {
  return fisher_split(make_frame(rho, tol));
}

PullbackCheck pullback_identity_check(const TensorReport& report) {
  PullbackCheck out;
  const OrbitFrame& f = *report.frame;
  const ComplexMatrix& rho = f.state().matrix();
  std::vector<ComplexMatrix> ld;
  ld.reserve(report.basis.size());
  for (const auto& e : report.basis.elements) {
    const LiePreimage k = phi_inverse(TangentVector::make(report.frame, e));
    ld.push_back(l_map(f, d_map(f, k.value)));
  }
  const Eigen::Index d = report.dim();
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const ComplexMatrix& x = ld[static_cast<std::size_t>(a)];
      const ComplexMatrix& y = ld[static_cast<std::size_t>(b)];
      const cxd rhs = 0.5 * cxd(0.0, -1.0) * (rho * (x * y - y * x)).trace();
      out.max_deviation =
          std::max(out.max_deviation, std::abs(report.fisher_antisym(a, b) - rhs.real()));
      out.max_fisher = std::max(out.max_fisher, std::hypot(report.fisher_sym(a, b),
                                                           report.fisher_antisym(a, b)));
    }
  }
  return out;
}

PullbackCheck pullback_identity_check(const FramePtr& frame, const BasisSet& basis) {
  return pullback_identity_check(fisher_split(frame, basis));
}

double bures_lambda(double ki, double kj) {
  const double s = ki + kj;
  if (s <= 0.0) return 0.0;
  return (ki - kj) * (ki - kj) / s;
}

double bures_from_maurer_cartan(const MaurerCartan& mc, double tol) {
  const Eigen::Index n = mc.kappa.size();
  double g = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (mc.kappa(i) > tol) g += 0.25 * mc.dkappa(i) * mc.dkappa(i) / mc.kappa(i);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      g += bures_lambda(mc.kappa(i), mc.kappa(j)) * std::norm(mc.offdiag(i, j));
  return g;
}

double bures_full(const CurveSpec& curve, double theta0, double h) {
  return bures_from_maurer_cartan(maurer_cartan_coefficients(curve, theta0, h));
}

PairCoefficients fisher_pair_coefficients(int i, int j, double ki, double kj) {
  const double diff = ki - kj;
  const double sum = ki + kj;
  return {i, j, 4.0 * diff * diff / sum, 4.0 * std::abs(diff * diff * diff) / (sum * sum)};
}

std::vector<PairCoefficients> fisher_u3_closed_form(const RealVector& kappa) {
  if (kappa.size() != 3) throw DomainError("fisher_u3_closed_form: kappa must have 3 entries");
  for (Eigen::Index i = 0; i < 3; ++i)
    if (!(kappa(i) > 0.0)) throw DomainError("fisher_u3_closed_form: kappa must be positive");
  if (std::abs(kappa.sum() - 1.0) > 1e-12)
    throw DomainError("fisher_u3_closed_form: kappa must sum to 1");
  const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
  std::vector<PairCoefficients> out;
  for (auto [i, j] : pairs) {
    if (std::abs(kappa(i) - kappa(j)) <= kClusterTol)
      throw DomainError("fisher_u3_closed_form: eigenvalues must be distinct (generic orbit)");
    out.push_back(fisher_pair_coefficients(i, j, kappa(i), kappa(j)));
  }
  return out;
}

ChartReport chart_coefficients(const TensorReport& report) {
  using Type = BasisLabel::Type;
  if (report.basis.kind != BasisKind::normal_complement ||
      report.basis.labels.size() != report.basis.size())
    throw ValidationError("chart_coefficients: report must use the default normal basis");
  const RealVector& kappa = report.frame->kappa();

  // pair → (index of antisymmetric element, index of symmetric element)
  std::map<std::pair<int, int>, std::pair<Eigen::Index, Eigen::Index>> slots;
  std::vector<double> scale(report.basis.size());
  for (std::size_t a = 0; a < report.basis.size(); ++a) {
    const BasisLabel& l = report.basis.labels[a];
    auto& slot = slots.try_emplace({l.row, l.col}, -1, -1).first->second;
    if (l.type == Type::antisymmetric) slot.first = static_cast<Eigen::Index>(a);
    else if (l.type == Type::symmetric) slot.second = static_cast<Eigen::Index>(a);
    else throw ValidationError("chart_coefficients: unexpected basis element type");
    scale[a] = kappa(l.row) - kappa(l.col);
  }

  ChartReport out;
  for (const auto& [pair, idx] : slots) {
    const auto [ax, ay] = idx;
    if (ax < 0 || ay < 0) throw ValidationError("chart_coefficients: incomplete pair");
    const double s2 = scale[ax] * scale[ay];
    out.pairs.push_back({pair.first, pair.second, s2 * report.fisher_sym(ax, ax),
                         s2 * report.fisher_sym(ay, ay), s2 * report.fisher_sym(ax, ay),
                         s2 * report.fisher_antisym(ax, ay)});
  }
  for (std::size_t a = 0; a < report.basis.size(); ++a) {
    for (std::size_t b = 0; b < report.basis.size(); ++b) {
      const BasisLabel& la = report.basis.labels[a];
      const BasisLabel& lb = report.basis.labels[b];
      if (la.row == lb.row && la.col == lb.col) continue;
      const auto ia = static_cast<Eigen::Index>(a);
      const auto ib = static_cast<Eigen::Index>(b);
      const double mag = std::hypot(report.fisher_sym(ia, ib), report.fisher_antisym(ia, ib));
      out.max_cross_pair = std::max(out.max_cross_pair, std::abs(scale[a] * scale[b]) * mag);
    }
  }
  return out;
}

namespace {

RealMatrix form_coefficients(TwoForm form, const RealVector& kappa, const ComplexMatrix& w,
                             const std::vector<ComplexMatrix>& generators, const RealVector& x) {
  const int n = static_cast<int>(kappa.size());
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (std::size_t a = 0; a < generators.size(); ++a)
    h += x(static_cast<Eigen::Index>(a)) * generators[a];
  const ComplexMatrix u = w * expi_hermitian(h);
  const auto frame = std::make_shared<const OrbitFrame>(OrbitFrame::from_diagonal(u, kappa));
  const ComplexMatrix kd = kappa.cast<cxd>().asDiagonal();

  std::vector<TangentVector> t;
  for (const auto& g : generators) {
    const ComplexMatrix du = w * expi_hermitian_derivative(h, g);
    ComplexMatrix drho = du * kd * u.adjoint() + u * kd * du.adjoint();
    drho = 0.5 * (drho + drho.adjoint());
    t.push_back(TangentVector::make(frame, drho));
  }
  const auto m = static_cast<Eigen::Index>(generators.size());
  RealMatrix omega(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto& ta = t[static_cast<std::size_t>(a)];
      const auto& tb = t[static_cast<std::size_t>(b)];
      omega(a, b) = form == TwoForm::kks ? kks_form(ta, tb) : fisher_tensor(ta, tb).imag();
    }
  return omega;
}

}  // namespace

double closedness_residual(TwoForm form, const RealVector& kappa, const ComplexMatrix& w,
                           const std::vector<ComplexMatrix>& generators, const RealVector& x0,
                           double h) {
  const auto m = static_cast<Eigen::Index>(generators.size());
  if (x0.size() != m) throw ShapeError("closedness_residual: x0 length must match generators");
  if (!(h > 0.0)) throw DomainError("fisher_antisym_closedness_residual: step h must be positive");
  std::vector<RealMatrix> deriv;  // ∂_c ω
  for (Eigen::Index c = 0; c < m; ++c) {
    RealVector xp = x0, xm = x0;
    xp(c) += h;
    xm(c) -= h;
    deriv.push_back((form_coefficients(form, kappa, w, generators, xp) -
                     form_coefficients(form, kappa, w, generators, xm)) /
                    (2.0 * h));
  }
  double worst = 0.0;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a + 1; b < m; ++b)
      for (Eigen::Index c = b + 1; c < m; ++c) {
        const double dw = deriv[static_cast<std::size_t>(a)](b, c) +
                          deriv[static_cast<std::size_t>(b)](c, a) +
                          deriv[static_cast<std::size_t>(c)](a, b);
        worst = std::max(worst, std::abs(dw));
      }
  return worst;
}

double fisher_antisym_closedness(const RealVector& kappa, const ComplexMatrix& w,
                                 const std::vector<ComplexMatrix>& generators,
                                 const RealVector& x0, double h) {
  return closedness_residual(TwoForm::fisher_antisym, kappa, w, generators, x0, h);
}

}  // namespace orbitfisher
