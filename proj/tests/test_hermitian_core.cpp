#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "orbitfisher/hermitian_core.hpp"
#include "support.hpp"

using namespace orbitfisher;
using namespace tst;

TEST_CASE("commutator examples") {
  std::mt19937_64 g(1);
  const ComplexMatrix a = gaussian(3, g);
  CHECK(commutator(a, a).norm() == 0.0);
  CHECK(dist(commutator(sx(), sy()), 2.0 * I * sz()) < 1e-15);
  CHECK(dist(commutator(diagm({1, -1}), unit(2, 0, 1)), 2.0 * unit(2, 0, 1)) < 1e-15);
  CHECK_THROWS_AS(commutator(a, sx()), ShapeError);
}

TEST_CASE("anticommutator examples") {
  std::mt19937_64 g(2);
  const ComplexMatrix a = gaussian(4, g);
  CHECK(dist(anticommutator(a, ComplexMatrix::Identity(4, 4)), 2.0 * a) < 1e-14);
  CHECK(anticommutator(sx(), sy()).norm() < 1e-15);
  CHECK(dist(anticommutator(diagm({0.7, 0.3}), unit(2, 0, 1)), 1.0 * unit(2, 0, 1)) < 1e-15);
}

TEST_CASE("bracket algebra on random inputs") {
  std::mt19937_64 g(3);
  for (int n = 1; n <= 6; ++n) {
    const ComplexMatrix a = antiherm(n, g), b = antiherm(n, g), c = antiherm(n, g);
    const double s = 1.0 + a.norm() * b.norm() + b.norm() * c.norm();
    CHECK(dist(commutator(a, b), -commutator(b, a)) <= 1e-12 * s);
    CHECK(dist(anticommutator(a, b), anticommutator(b, a)) <= 1e-12 * s);
    CHECK(dist(commutator(2.0 * a + c, b), 2.0 * commutator(a, b) + commutator(c, b)) <= 1e-12 * s);
    const ComplexMatrix jac = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) +
                              commutator(c, commutator(a, b));
    CHECK(jac.norm() <= 1e-11 * s * (1.0 + a.norm()));
  }
}

TEST_CASE("adjoint action") {
  std::mt19937_64 g(4);
  const ComplexMatrix a = herm(3, g);
  CHECK(dist(adjoint_action(ComplexMatrix::Identity(3, 3), a), a) < 1e-15);
  ComplexMatrix u = ComplexMatrix::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = I;
  CHECK(dist(adjoint_action(u, sx()), sy()) < 1e-15);

  const ComplexMatrix rho = herm(4, g);
  const ComplexMatrix w = unitary(4, g);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> e0(rho), e1(adjoint_action(w, rho));
  CHECK((e0.eigenvalues() - e1.eigenvalues()).norm() < 1e-10);

  const ComplexMatrix v = unitary(4, g);
  CHECK(dist(adjoint_action(w, adjoint_action(v, rho)), adjoint_action(w * v, rho)) < 1e-11);

  ComplexMatrix bad = w;
  bad(0, 0) += 1e-3;
  try {
    adjoint_action(bad, rho);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.deviation() > 1e-4);
  }
}

TEST_CASE("trace pairing") {
  CHECK(trace_pairing(sz(), ComplexMatrix::Zero(2, 2)) == 0.0);
  CHECK(trace_pairing(sz(), I * sz()) == doctest::Approx(-2.0).epsilon(1e-15));
  std::mt19937_64 g(5);
  const ComplexMatrix h = herm(3, g), m = antiherm(3, g), u = unitary(3, g);
  CHECK(std::abs(trace_pairing(adjoint_action(u, h), adjoint_action(u, m)) - trace_pairing(h, m)) <
        1e-12 * (1.0 + h.norm() * m.norm()));
  CHECK_THROWS_AS(trace_pairing(m, m), ValidationError);
}

TEST_CASE("Killing form against the closed form") {
  CHECK(killing_form(I * sz(), ComplexMatrix::Zero(2, 2)) == doctest::Approx(0.0));
  CHECK(killing_form(I * sz(), I * sz()) == doctest::Approx(-8.0).epsilon(1e-12));
  std::mt19937_64 g(6);
  for (int k = 0; k < 100; ++k) {
    const ComplexMatrix x = antiherm(3, g);
    const double kxx = killing_form(x, x);
    CHECK(kxx <= 1e-10);
    // Independent oracle: 2n Tr(XY) − 2 Tr X Tr Y.
    const double closed = (6.0 * (x * x).trace() - 2.0 * x.trace() * x.trace()).real();
    CHECK(std::abs(kxx - closed) < 1e-10 * (1.0 + std::abs(closed)));
  }
  const ComplexMatrix x = antiherm(4, g), y = antiherm(4, g);
  CHECK(killing_form(x, y) == doctest::Approx(killing_form_closed(x, y)).epsilon(1e-10));
}

TEST_CASE("Gell-Mann basis") {
  CHECK_THROWS_AS(gellmann_basis(0), DomainError);
  const BasisSet b2 = gellmann_basis(2);
  REQUIRE(b2.size() == 4);
  CHECK(dist(b2.elements[0], ComplexMatrix::Identity(2, 2)) == 0.0);
  CHECK(dist(b2.elements[1], sx()) == 0.0);
  CHECK(dist(b2.elements[2], sy()) == 0.0);
  CHECK(dist(b2.elements[3], sz()) == 0.0);

  const BasisSet b3 = gellmann_basis(3);
  REQUIRE(b3.size() == 9);
  CHECK(dist(b3.elements[1], unit(3, 0, 1) + unit(3, 1, 0)) == 0.0);  // λ1
  ComplexMatrix l8 = diagm({1, 1, -2}) / std::sqrt(3.0);
  CHECK(dist(b3.elements[8], l8) < 1e-15);
  ComplexMatrix l7 = -I * unit(3, 1, 2) + I * unit(3, 2, 1);
  CHECK(dist(b3.elements[7], l7) == 0.0);
  CHECK(std::abs((b3.elements[6] * b3.elements[7]).trace()) == 0.0);

  for (int n = 1; n <= 6; ++n) {
    const BasisSet b = gellmann_basis(n);
    REQUIRE(static_cast<int>(b.size()) == n * n);
    for (std::size_t a = 1; a < b.size(); ++a) {
      CHECK(is_hermitian(b.elements[a]));
      CHECK(std::abs(b.elements[a].trace()) < 1e-14);
      for (std::size_t c = 1; c < b.size(); ++c) {
        const double expect = a == c ? 2.0 : 0.0;
        CHECK(std::abs((b.elements[a] * b.elements[c]).trace() - expect) < 1e-14);
      }
    }
    CHECK(max_trace_overlap(b) <= 1e-12);
  }
}

TEST_CASE("coordinates round trip") {
  std::mt19937_64 g(7);
  for (int n = 1; n <= 5; ++n) {
    const ComplexMatrix h = herm(n, g);
    CHECK(dist(hermitian_from_coordinates(n, hermitian_coordinates(h)), h) < 1e-13);
    CHECK(hermitian_coordinates(h).norm() == doctest::Approx(h.norm()).epsilon(1e-13));
  }
}

TEST_CASE("Lie algebra basis is orthonormal") {
  const auto basis = lie_algebra_basis(3);
  REQUIRE(basis.size() == 9);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    CHECK(is_antihermitian(basis[a]));
    for (std::size_t b = 0; b < basis.size(); ++b)
      CHECK(std::abs((basis[a].adjoint() * basis[b]).trace().real() - (a == b ? 1.0 : 0.0)) < 1e-14);
  }
}

TEST_CASE("expi and its derivative") {
  std::mt19937_64 g(8);
  const ComplexMatrix h = herm(3, g), y = herm(3, g);
  const ComplexMatrix e = expi_hermitian(h);
  CHECK(unitarity_deviation(e) < 1e-12);
  // Series oracle for exp(iH).
  ComplexMatrix term = ComplexMatrix::Identity(3, 3), sum = term;
  for (int k = 1; k < 60; ++k) {
    term = term * (I * h) / static_cast<double>(k);
    sum += term;
  }
  CHECK(dist(e, sum) < 1e-10);
  const double t = 1e-5;
  const ComplexMatrix fd = (expi_hermitian(h + t * y) - expi_hermitian(h - t * y)) / (2 * t);
  CHECK(dist(expi_hermitian_derivative(h, y), fd) < 1e-8);
  // Degenerate spectrum path.
  const ComplexMatrix hd = diagm({0.3, 0.3, -0.1});
  const ComplexMatrix fdd = (expi_hermitian(hd + t * y) - expi_hermitian(hd - t * y)) / (2 * t);
  CHECK(dist(expi_hermitian_derivative(hd, y), fdd) < 1e-8);
}

TEST_CASE("root data") {
  CHECK_THROWS_AS(root_data(1, vec({1})), DomainError);
  const auto roots = root_data(3, vec({1, 0, -1}));
  CHECK(roots.size() == 6);
  for (const auto& r : roots) {
    if (r.k == 0 && r.j == 2) CHECK(r.value == 2.0);
    if (r.k == 0 && r.j == 1) CHECK(dist(r.dual_root, diagm({1, -1, 0})) == 0.0);
    const ComplexMatrix lhs = commutator(diagm({1, 0, -1}), r.root_vector);
    CHECK((lhs - r.value * r.root_vector).cwiseAbs().maxCoeff() <= 1e-14);
  }
  for (const auto& r : root_data(4, vec({0.25, 0.25, 0.25, 0.25}))) CHECK(r.value == 0.0);

  std::mt19937_64 g(9);
  std::normal_distribution<double> d;
  RealVector lam(5);
  for (int i = 0; i < 5; ++i) lam(i) = d(g);
  for (const auto& r : root_data(5, lam)) {
    const ComplexMatrix lhs = commutator(lam.cast<cxd>().asDiagonal(), r.root_vector);
    CHECK((lhs - r.value * r.root_vector).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("Hermiticity checks") {
  CHECK(is_hermitian(sx()));
  CHECK_FALSE(is_hermitian(I * sx()));
  CHECK(is_antihermitian(I * sx()));
  CHECK(is_hermitian(ComplexMatrix::Zero(3, 3)));
  ComplexMatrix m = sx();
  m(0, 1) += 1e-9;
  CHECK_FALSE(is_hermitian(m));
  CHECK_THROWS_AS(require_hermitian(m, "m"), ValidationError);
  CHECK_THROWS_AS(require_square(ComplexMatrix::Zero(2, 3), "m"), ShapeError);
}
