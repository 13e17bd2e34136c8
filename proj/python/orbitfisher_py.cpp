#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "orbitfisher/acceptance.hpp"
#include "orbitfisher/fibration.hpp"
#include "orbitfisher/geom_tensors.hpp"

namespace py = pybind11;
using namespace orbitfisher;

namespace {

DensityMatrix state(const ComplexMatrix& m) { return DensityMatrix::from_matrix(m); }

TangentVector tangent(const FramePtr& frame, const ComplexMatrix& v) {
  return TangentVector::make(frame, v);
}

py::dict report_dict(const TensorReport& r) {
  py::dict d;
  py::list basis;
  for (const auto& e : r.basis.elements) basis.append(e);
  d["basis"] = basis;
  d["fisher_sym"] = r.fisher_sym;
  d["fisher_antisym"] = r.fisher_antisym;
  d["kks"] = r.kks;
  d["bures"] = r.bures;
  d["kks_metric"] = r.kks_metric;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orbit geometry of density matrices";

  auto& base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NotInNormalError>(m, "NotInNormalError", base.ptr());
  py::register_exception<NoSolutionError>(m, "NoSolutionError", base.ptr());
  py::register_exception<StratumError>(m, "StratumError", base.ptr());
  py::register_exception<InclusionError>(m, "InclusionError", base.ptr());

  m.def(
      "classify",
      [](const ComplexMatrix& rho, double tol) {
        const OrbitDescriptor o = classify(state(rho), tol);
        py::dict d;
        d["partition"] = o.partition;
        d["rank"] = o.rank;
        d["orbit_dim"] = o.orbit_dim;
        d["stratum_dim"] = o.stratum_dim;
        d["stabilizer_blocks"] = o.stabilizer_blocks;
        return d;
      },
      py::arg("rho"), py::arg("tol") = kClusterTol);

  m.def(
      "spectral_decompose",
      [](const ComplexMatrix& rho, double tol) {
        const SpectralData s = spectral_decompose(state(rho), tol);
        return py::make_tuple(s.unitary, s.kappa);
      },
      py::arg("rho"), py::arg("tol") = kClusterTol, "Returns (U, kappa) with rho = U diag(kappa) U^H.");

  m.def("orbit_dimension", &orbit_dimension, py::arg("partition"));

  m.def(
      "normal_basis",
      [](const ComplexMatrix& rho, double tol) { return normal_basis(*make_frame(state(rho), tol)).elements; },
      py::arg("rho"), py::arg("tol") = kClusterTol);

  m.def(
      "phi_inverse",
      [](const ComplexMatrix& rho, const ComplexMatrix& v, double tol) {
        return phi_inverse(tangent(make_frame(state(rho), tol), v)).value;
      },
      py::arg("rho"), py::arg("v"), py::arg("tol") = kClusterTol, "Anti-Hermitian K in the normal space with v = [K, rho].");

  m.def(
      "d_map",
      [](const ComplexMatrix& rho, const ComplexMatrix& a, double tol) { return d_map(*make_frame(state(rho), tol), a); },
      py::arg("rho"), py::arg("a"), py::arg("tol") = kClusterTol);

  m.def(
      "sld",
      [](const ComplexMatrix& rho, const ComplexMatrix& v, double tol) {
        return sld(tangent(make_frame(state(rho), tol), v));
      },
      py::arg("rho"), py::arg("v"), py::arg("tol") = kClusterTol);

  m.def(
      "sld_linear_solve",
      [](const ComplexMatrix& rho, const ComplexMatrix& a) { return sld_linear_solve(state(rho), a); },
      py::arg("rho"), py::arg("a"));

  m.def(
      "kks_form",
      [](const ComplexMatrix& rho, const ComplexMatrix& v, const ComplexMatrix& w, double tol) {
        const FramePtr f = make_frame(state(rho), tol);
        return kks_form(tangent(f, v), tangent(f, w));
      },
      py::arg("rho"), py::arg("v"), py::arg("w"), py::arg("tol") = kClusterTol);

  m.def(
      "fisher_tensor",
      [](const ComplexMatrix& rho, const ComplexMatrix& v, const ComplexMatrix& w, double tol) {
        const FramePtr f = make_frame(state(rho), tol);
        return fisher_tensor(tangent(f, v), tangent(f, w));
      },
      py::arg("rho"), py::arg("v"), py::arg("w"), py::arg("tol") = kClusterTol);

  m.def(
      "kks_compatible_metric",
      [](const ComplexMatrix& rho, const ComplexMatrix& v, const ComplexMatrix& w, double tol) {
        const FramePtr f = make_frame(state(rho), tol);
        return kks_compatible_metric(tangent(f, v), tangent(f, w));
      },
      py::arg("rho"), py::arg("v"), py::arg("w"), py::arg("tol") = kClusterTol);

  m.def(
      "bures_tangent",
      [](const ComplexMatrix& rho, const ComplexMatrix& v, const ComplexMatrix& w, double tol) {
        const FramePtr f = make_frame(state(rho), tol);
        return bures_tangent(tangent(f, v), tangent(f, w));
      },
      py::arg("rho"), py::arg("v"), py::arg("w"), py::arg("tol") = kClusterTol);

  m.def(
      "fisher_split",
      [](const ComplexMatrix& rho, double tol) { return report_dict(fisher_split(state(rho), tol)); },
      py::arg("rho"), py::arg("tol") = kClusterTol,
      "Tensor matrices in the default normal basis; keys basis, fisher_sym, fisher_antisym, kks, bures, kks_metric.");

  m.def(
      "pullback_identity_check",
      [](const ComplexMatrix& rho, double tol) {
        const PullbackCheck c = pullback_identity_check(fisher_split(state(rho), tol));
        return py::make_tuple(c.max_deviation, c.within_contract());
      },
      py::arg("rho"), py::arg("tol") = kClusterTol);

  m.def("bures_lambda", &bures_lambda, py::arg("ki"), py::arg("kj"));

  m.def(
      "fisher_u3_closed_form",
      [](const RealVector& kappa) {
        py::list out;
        for (const auto& p : fisher_u3_closed_form(kappa)) {
          py::dict d;
          d["i"] = p.i;
          d["j"] = p.j;
          d["sym"] = p.sym;
          d["antisym"] = p.antisym;
          out.append(d);
        }
        return out;
      },
      py::arg("kappa"));

  m.def(
      "dimension_identity",
      [](const ComplexMatrix& eta0, const ComplexMatrix& xi0, double tol) {
        const DimensionIdentity d = dimension_identity(FibrationSpec::make(state(eta0), state(xi0), tol));
        return py::make_tuple(d.normal_xi, d.vertical, d.normal_eta);
      },
      py::arg("eta0"), py::arg("xi0"), py::arg("tol") = kClusterTol,
      "Returns (dim n_xi, dim vertical, dim n_eta).");

  m.def(
      "nesting_report",
      [](int n, const std::vector<std::pair<std::vector<int>, std::vector<int>>>& pairs) {
        py::list out;
        for (const auto& r : nesting_report(n, pairs)) {
          py::dict d;
          d["fine"] = r.fine;
          d["coarse"] = r.coarse;
          d["total_dim"] = r.total_dim;
          d["base_dim"] = r.base_dim;
          d["fibre_dim"] = r.fibre_dim;
          d["ok"] = r.ok;
          d["error"] = r.error;
          out.append(d);
        }
        return out;
      },
      py::arg("n"), py::arg("pairs"));

  m.def(
      "selftest",
      [](std::uint64_t seed, std::optional<double> tol) {
        acceptance::Options opt;
        opt.seed = seed;
        opt.tol = tol;
        std::vector<acceptance::CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = acceptance::run_all(opt);
        }
        py::list out;
        for (const auto& r : results) out.append(py::make_tuple(r.id, r.pass(), acceptance::format_line(r)));
        return out;
      },
      py::arg("seed") = 12345, py::arg("tol") = py::none(), "List of (id, passed, line) per criterion.");
}
