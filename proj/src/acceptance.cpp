#include "orbitfisher/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "orbitfisher/fibration.hpp"
#include "orbitfisher/geom_tensors.hpp"
#include "orbitfisher/oracles.hpp"

namespace orbitfisher::acceptance {

bool Check::pass() const {
  if (std::isnan(measured)) return false;
  return sense == Sense::at_most ? measured <= bound : measured >= bound;
}

bool CriterionResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

namespace {

using Sense = Check::Sense;

Rng rng_for(const Options& opt, int id) {
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return Rng(seq);
}

double tighten(const Options& opt, double bound) {
  return opt.tol ? std::min(bound, *opt.tol) : bound;
}

Check at_most(const Options& opt, std::string label, double measured, double bound) {
  return {std::move(label), measured, tighten(opt, bound), Sense::at_most};
}

Check at_least(std::string label, double measured, double bound) {
  return {std::move(label), measured, bound, Sense::at_least};
}

std::vector<int> ones(int n) { return std::vector<int>(static_cast<std::size_t>(n), 1); }

ComplexMatrix pauli(int k) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  if (k == 0) m << 0, 1, 1, 0;
  if (k == 1) m << 0, cxd(0, -1), cxd(0, 1), 0;
  if (k == 2) m << 1, 0, 0, -1;
  return m;
}

DensityMatrix diag_state(const RealVector& k) {
  return DensityMatrix::from_matrix(k.cast<cxd>().asDiagonal());
}

RealVector vec2(double a, double b) {
  RealVector v(2);
  v << a, b;
  return v;
}

RealVector vec3(double a, double b, double c) {
  RealVector v(3);
  v << a, b, c;
  return v;
}

double max_abs(const RealMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

CriterionResult sld_contract(const Options& opt) {
  CriterionResult r{1, "SLD contract", {}, {}};
  Rng rng = rng_for(opt, 1);
  const auto start = std::chrono::steady_clock::now();
  double residual = 0.0, oracle = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (int s = 0; s < 200; ++s) {
      const auto rho = random_density(n, ones(n), rng);
      const auto frame = make_frame(rho);
      const auto v = TangentVector::make(frame, random_normal_element(*frame, rng));
      const ComplexMatrix l = sld(v);
      const double vn = v.value().norm();
      residual = std::max(residual, (v.value() - 0.5 * (l * rho.matrix() + rho.matrix() * l)).norm() / vn);
      const ComplexMatrix x = project_to_normal(*frame, sld_linear_solve(rho, v.value()));
      oracle = std::max(oracle, (l - x).norm() / l.norm());
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.checks.push_back(at_most(opt, "residual/|v|", residual, 1e-12));
  r.checks.push_back(at_most(opt, "closed form vs linear solve (rel)", oracle, 1e-10));
  Check rt{"runtime s", seconds, 10.0, Sense::at_most, false};
  r.checks.push_back(rt);
  r.note = "1400 full-rank states, n = 2..8";
  return r;
}

CriterionResult pullback_theorem(const Options& opt) {
  CriterionResult r{2, "Pullback identity", {}, {}};
  Rng rng = rng_for(opt, 2);
  double worst = 0.0;
  for (int n = 2; n <= 4; ++n) {
    for (int s = 0; s < 50; ++s) {
      const auto rho = random_density(n, random_partition(n, rng), rng);
      const PullbackCheck pc = pullback_identity_check(fisher_split(rho));
      worst = std::max(worst, pc.max_deviation / (1.0 + pc.max_fisher));
    }
  }
  r.checks.push_back(at_most(opt, "max dev/(1+max|F|)", worst, 1e-10));

  const auto frame = make_frame(diag_state(vec2(0.75, 0.25)));
  BasisSet b;
  b.n = 2;
  b.kind = BasisKind::normal_complement;
  b.elements = {0.5 * pauli(1), -0.5 * pauli(0)};
  const TensorReport u2 = fisher_split(frame, b);
  const double k1 = 0.75, k2 = 0.25;
  const double expect = 4.0 * std::pow(k1 - k2, 3) / std::pow(k1 + k2, 2);
  r.checks.push_back(at_most(opt, "U(2) F^(v1,v2) - 0.5", std::abs(u2.fisher_antisym(0, 1) - expect), 1e-12));
  r.checks.push_back(at_most(opt, "U(2) pullback dev", pullback_identity_check(u2).max_deviation, 1e-12));
  r.note = "150 random states, n = 2, 3, 4";
  return r;
}

CriterionResult symplecticity(const Options& opt) {
  CriterionResult r{3, "Symplecticity", {}, {}};
  Rng rng = rng_for(opt, 3);
  double ratio = 1.0;
  bool rank_ok = true;
  for (int n = 2; n <= 5; ++n) {
    for (int s = 0; s < 10; ++s) {
      const TensorReport t = fisher_split(random_density(n, ones(n), rng));
      ratio = std::min(ratio, singular_ratio(t.fisher_antisym));
      rank_ok = rank_ok && t.dim() == make_frame(t.base())->normal_dimension();
    }
  }
  r.checks.push_back(at_least("min sigma_min/sigma_max", ratio, 1e-8));
  r.checks.push_back(at_most(opt, "dim mismatch", rank_ok ? 0.0 : 1.0, 0.0));

  std::vector<ComplexMatrix> gens = {pauli(0), pauli(1), pauli(2)};
  double closed = 0.0;
  for (int s = 0; s < 5; ++s) {
    const RealVector k = random_spectrum(2, {1, 1}, rng);
    const ComplexMatrix w = random_unitary(2, rng);
    std::normal_distribution<double> d(0.0, 0.3);
    const RealVector x0 = vec3(d(rng), d(rng), d(rng));
    closed = std::max(closed, fisher_antisym_closedness(k, w, gens, x0, 1e-4));
  }
  r.checks.push_back(at_most(opt, "n=2 chart |dF^|", closed, 1e-6));
  r.note = "generic n = 2..5; closedness on 3-parameter charts of the n=2 orbit, h = 1e-4";
  return r;
}

CriterionResult u3_closed_form(const Options& opt) {
  CriterionResult r{4, "U(3) closed form", {}, {}};
  Rng rng = rng_for(opt, 4);
  double sym = 0.0, anti = 0.0, cross = 0.0;
  bool negative = true;
  for (int s = 0; s < 50; ++s) {
    const TensorReport t = fisher_split(random_density(3, {1, 1, 1}, rng));
    const ChartReport chart = chart_coefficients(t);
    const auto closed = fisher_u3_closed_form(t.frame->kappa());
    for (std::size_t p = 0; p < 3; ++p) {
      const auto& c = chart.pairs[p];
      sym = std::max(sym, std::abs(c.sym_xx - closed[p].sym) / closed[p].sym);
      sym = std::max(sym, std::abs(c.sym_yy - closed[p].sym) / closed[p].sym);
      anti = std::max(anti, std::abs(std::abs(c.antisym_xy) - closed[p].antisym) / closed[p].antisym);
      negative = negative && c.antisym_xy < 0.0;
    }
    cross = std::max(cross, chart.max_cross_pair);
  }
  r.checks.push_back(at_most(opt, "sym rel err", sym, 1e-9));
  r.checks.push_back(at_most(opt, "antisym magnitude rel err", anti, 1e-9));

  const auto fixed = fisher_u3_closed_form(vec3(0.5, 0.3, 0.2));
  const double sym_ref[] = {0.2, 0.5142857143, 0.08};
  const double anti_ref[] = {0.05, 0.2204081633, 0.016};
  double table = 0.0;
  for (int p = 0; p < 3; ++p) {
    table = std::max(table, std::abs(fixed[p].sym - sym_ref[p]));
    table = std::max(table, std::abs(fixed[p].antisym - anti_ref[p]));
  }
  r.checks.push_back(at_most(opt, "kappa=(0.5,0.3,0.2) table", table, 1e-9));
  r.note = std::string("antisym sign in chart U exp(iH): ") + (negative ? "negative" : "mixed") +
           " for every pair";
  return r;
}

CriterionResult bures_identities(const Options& opt) {
  CriterionResult r{5, "Bures identities", {}, {}};
  Rng rng = rng_for(opt, 5);
  double tangent = 0.0;
  for (int s = 0; s < 100; ++s) {
    const int n = 2 + s % 4;
    const auto rho = random_density(n, random_partition(n, rng), rng);
    const auto f = make_frame(rho);
    if (f->normal_dimension() == 0) continue;
    const auto v = TangentVector::make(f, random_normal_element(*f, rng));
    const auto w = TangentVector::make(f, random_normal_element(*f, rng));
    const double fs = fisher_tensor(v, w).real();
    tangent = std::max(tangent, std::abs(4.0 * bures_tangent(v, w) - fs) / (1.0 + std::abs(fs)));
  }
  r.checks.push_back(at_most(opt, "|4 g_B - F_sym|", tangent, 1e-12));

  double curves = 0.0;
  for (int s = 0; s < 20; ++s) {
    const int n = 2 + s % 3;
    const RealVector k0 = random_spectrum(n, ones(n), rng);
    RealVector dk = RealVector::Zero(n);
    std::normal_distribution<double> d(0.0, 0.01);
    for (int i = 0; i + 1 < n; ++i) {
      dk(i) = d(rng);
      dk(n - 1) -= dk(i);
    }
    const auto c = CurveSpec::composite(random_hermitian(n, rng), k0, dk, random_unitary(n, rng));
    curves = std::max(curves, std::abs(bures_full(c, 0.0) - 0.25 * fisher_index_along_curve(c, 0.0, 1e-5)));
  }
  r.checks.push_back(at_most(opt, "|bures_full - F/4| mixed curves", curves, 1e-8));

  RealVector k0(2), dk(2);
  k0 << 0.0, 1.0;
  dk << 1.0, -1.0;
  const auto bern = CurveSpec::eigenvalue_path(k0, dk, ComplexMatrix::Identity(2, 2));
  const double fb = fisher_index_along_curve(bern, 0.75, 1e-5);
  const double gb = bures_full(bern, 0.75);
  r.checks.push_back(at_most(opt, "Bernoulli F - 16/3", std::abs(fb - 16.0 / 3.0), 1e-8));
  r.checks.push_back(at_most(opt, "Bernoulli 4 g_B - 16/3", std::abs(4.0 * gb - 16.0 / 3.0), 1e-8));

  const auto rot = CurveSpec::unitary_rotation(0.5 * pauli(1), diag_state(vec2(0.75, 0.25)));
  const double fr = fisher_index_along_curve(rot, 0.0, 1e-5);
  const double qfi = qubit_qfi_reference({0, 0, 0.5}, {0.5, 0, 0});
  r.checks.push_back(at_most(opt, "qubit rotation F - 0.25", std::abs(fr - 0.25), 1e-8));
  r.checks.push_back(at_most(opt, "qubit rotation 4 g_B - 0.25", std::abs(4.0 * bures_full(rot, 0.0) - 0.25), 1e-8));
  r.checks.push_back(at_most(opt, "Bloch reference - 0.25", std::abs(qfi - 0.25), 1e-12));
  return r;
}

CriterionResult structure_maps(const Options& opt) {
  CriterionResult r{6, "Structure maps D, L", {}, {}};
  Rng rng = rng_for(opt, 6);
  double skew = 0.0, sym = 0.0;
  int pairs = 0;
  while (pairs < 1000) {
    const int n = 2 + pairs % 5;
    const auto rho = random_density(n, random_partition(n, rng), rng);
    const auto f = make_frame(rho);
    if (f->normal_dimension() == 0) continue;
    for (int k = 0; k < 10; ++k, ++pairs) {
      const ComplexMatrix a = random_normal_element(*f, rng);
      const ComplexMatrix b = random_normal_element(*f, rng);
      const ComplexMatrix da = d_map(*f, a), db = d_map(*f, b);
      const ComplexMatrix la = l_map(*f, a), lb = l_map(*f, b);
      const double ds = a.norm() * db.norm() + da.norm() * b.norm();
      skew = std::max(skew, std::abs((a * db).trace() + (da * b).trace()) / ds);
      const double ls = a.norm() * lb.norm() + la.norm() * b.norm();
      sym = std::max(sym, std::abs((a * lb).trace() - (la * b).trace()) / ls);
    }
  }
  r.checks.push_back(at_most(opt, "D skew (rel)", skew, 1e-12));
  r.checks.push_back(at_most(opt, "L symmetric (rel)", sym, 1e-12));
  r.note = "1000 pairs, scale |A||M(B)| + |M(A)||B|";
  return r;
}

namespace {

// Every composition of n with every coarsening obtained by merging adjacent blocks.
std::vector<std::pair<std::vector<int>, std::vector<int>>> refinement_pairs(int n) {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  for (unsigned cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    std::vector<int> fine;
    int len = 1;
    for (int i = 0; i < n - 1; ++i) {
      if (cuts & (1u << i)) {
        fine.push_back(len);
        len = 1;
      } else {
        ++len;
      }
    }
    fine.push_back(len);
    const auto k = static_cast<unsigned>(fine.size());
    for (unsigned keep = 0; keep < (1u << (k - 1)); ++keep) {
      std::vector<int> coarse{fine[0]};
      for (unsigned i = 1; i < k; ++i) {
        if (keep & (1u << (i - 1))) coarse.push_back(fine[i]);
        else coarse.back() += fine[i];
      }
      out.emplace_back(fine, coarse);
    }
  }
  return out;
}

RealVector block_spectrum(const std::vector<int>& part) {
  const int n = std::accumulate(part.begin(), part.end(), 0);
  RealVector k(n);
  int pos = 0;
  const auto blocks = static_cast<int>(part.size());
  for (int b = 0; b < blocks; ++b)
    for (int i = 0; i < part[static_cast<std::size_t>(b)]; ++i) k(pos++) = blocks - b;
  return k / k.sum();
}

}  // namespace

CriterionResult orbit_accounting(const Options& opt) {
  CriterionResult r{7, "Orbit and fibration accounting", {}, {}};
  Rng rng = rng_for(opt, 7);
  int mismatch = 0;
  for (int s = 0; s < 100; ++s) {
    const int n = 1 + s % 6;
    const auto rho = random_density(n, random_partition(n, rng), rng);
    if (classify(rho).orbit_dim != ad_rank(rho, 1e-10)) ++mismatch;
  }
  r.checks.push_back(at_most(opt, "orbit_dim != rank(ad)", mismatch, 0.0));

  int bad_rows = 0, bad_split = 0, rows = 0;
  for (int n = 1; n <= 6; ++n) {
    const auto pairs = refinement_pairs(n);
    for (const auto& row : nesting_report(n, pairs)) {
      ++rows;
      if (!row.ok || row.total_dim != row.base_dim + row.fibre_dim) ++bad_rows;
      const auto spec = FibrationSpec::make(diag_state(block_spectrum(row.fine)),
                                            diag_state(block_spectrum(row.coarse)));
      const DimensionIdentity d = dimension_identity(spec);
      if (!d.holds() || d.vertical != row.fibre_dim || d.normal_eta != row.total_dim) ++bad_split;
    }
  }
  r.checks.push_back(at_most(opt, "nesting rows failing", bad_rows, 0.0));
  r.checks.push_back(at_most(opt, "split dims disagreeing", bad_split, 0.0));
  const auto n3 = nesting_report(3, {{{1, 1, 1}, {1, 2}}});
  const bool example = n3[0].ok && n3[0].total_dim == 6 && n3[0].base_dim == 4 && n3[0].fibre_dim == 2;
  r.checks.push_back(at_most(opt, "6 = 4 + 2 at n=3", example ? 0.0 : 1.0, 0.0));
  r.note = std::to_string(rows) + " refinement pairs, n <= 6";
  return r;
}

CriterionResult equivariance(const Options& opt) {
  CriterionResult r{8, "Equivariance", {}, {}};
  Rng rng = rng_for(opt, 8);
  int classify_bad = 0;
  double sld_dev = 0.0, kks_dev = 0.0, split_dev = 0.0;
  for (int s = 0; s < 100; ++s) {
    const int n = 2 + s % 4;
    const auto rho = random_density(n, random_partition(n, rng), rng);
    const ComplexMatrix u = random_unitary(n, rng);
    const auto moved = DensityMatrix::from_matrix(adjoint_action(u, rho.matrix()));
    if (!(classify(moved) == classify(rho))) ++classify_bad;

    const auto f = make_frame(rho);
    const auto g = make_frame(moved);
    if (f->normal_dimension() == 0) continue;
    const ComplexMatrix a = random_normal_element(*f, rng);
    const ComplexMatrix b = random_normal_element(*f, rng);
    const auto va = TangentVector::make(f, a), vb = TangentVector::make(f, b);
    const auto wa = TangentVector::make(g, adjoint_action(u, a));
    const auto wb = TangentVector::make(g, adjoint_action(u, b));
    const ComplexMatrix l = sld(va);
    sld_dev = std::max(sld_dev, (sld(wa) - adjoint_action(u, l)).norm() / (1.0 + l.norm()));
    const double k = kks_form(va, vb);
    kks_dev = std::max(kks_dev, std::abs(kks_form(wa, wb) - k) / (1.0 + std::abs(k)));

    const TensorReport t0 = fisher_split(f);
    BasisSet basis = t0.basis;
    for (auto& e : basis.elements) e = adjoint_action(u, e);
    const TensorReport t1 = fisher_split(g, basis);
    const double scale = 1.0 + max_abs(t0.fisher_sym);
    split_dev = std::max({split_dev, max_abs(t1.fisher_sym - t0.fisher_sym) / scale,
                          max_abs(t1.fisher_antisym - t0.fisher_antisym) / scale,
                          max_abs(t1.kks - t0.kks) / scale});
  }
  r.checks.push_back(at_most(opt, "classify changed", classify_bad, 0.0));
  r.checks.push_back(at_most(opt, "sld", sld_dev, 1e-10));
  r.checks.push_back(at_most(opt, "kks_form", kks_dev, 1e-10));
  r.checks.push_back(at_most(opt, "fisher_split", split_dev, 1e-10));
  r.note = "100 random conjugations, n = 2..5";
  return r;
}

CriterionResult degeneration(const Options& opt) {
  CriterionResult r{9, "Degeneration k1 -> k2", {}, {}};
  Rng rng = rng_for(opt, 9);
  const ComplexMatrix w = random_unitary(3, rng);
  std::vector<double> le, ls, la;
  for (int s = 0; s < 6; ++s) {
    const double eps = 1e-2 / std::pow(2.0, s);
    const RealVector k = vec3(0.4 + eps, 0.4 - eps, 0.2);
    const auto rho = DensityMatrix::from_matrix(w * k.cast<cxd>().asDiagonal() * w.adjoint());
    const ChartReport chart = chart_coefficients(fisher_split(rho));
    const auto& p = chart.pairs[0];  // pair (0, 1)
    le.push_back(std::log(eps));
    ls.push_back(std::log(p.sym_xx));
    la.push_back(std::log(std::abs(p.antisym_xy)));
  }
  const auto slope = [&](const std::vector<double>& y) {
    const double mx = std::accumulate(le.begin(), le.end(), 0.0) / le.size();
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < le.size(); ++i) {
      sxy += (le[i] - mx) * (y[i] - my);
      sxx += (le[i] - mx) * (le[i] - mx);
    }
    return sxy / sxx;
  };
  const double ps = slope(ls), pa = slope(la);
  r.checks.push_back(at_most(opt, "|sym exponent - 2|", std::abs(ps - 2.0), 0.05));
  r.checks.push_back(at_most(opt, "|antisym exponent - 3|", std::abs(pa - 3.0), 0.05));
  char buf[96];
  std::snprintf(buf, sizeof buf, "exponents %.6f, %.6f over eps = 1e-2 / 2^s, s = 0..5", ps, pa);
  r.note = buf;
  return r;
}

std::vector<CriterionResult> run_all(const Options& opt) {
  return {sld_contract(opt),  pullback_theorem(opt), symplecticity(opt),
          u3_closed_form(opt), bures_identities(opt), structure_maps(opt),
          orbit_accounting(opt), equivariance(opt),   degeneration(opt)};
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass() ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ":";
  char buf[64];
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const Check& c = r.checks[i];
    os << (i ? ";" : "") << ' ' << c.label << ' ';
    if (c.show_value) {
      std::snprintf(buf, sizeof buf, "%.3e", c.measured);
      os << buf;
    } else {
      os << (c.pass() ? "ok" : "over");
    }
    std::snprintf(buf, sizeof buf, "%.1e", c.bound);
    os << (c.sense == Check::Sense::at_most ? " <= " : " >= ") << buf;
    if (!c.pass()) os << " (violated)";
  }
  if (!r.note.empty()) os << " | " << r.note;
  return os.str();
}

}  // namespace orbitfisher::acceptance
