import numpy as np
import pytest

import orbitfisher as of

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)


def random_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rotated(kappa, rng):
    u = random_unitary(len(kappa), rng)
    return u @ np.diag(kappa).astype(complex) @ u.conj().T, u


def test_classify_generic_qutrit():
    d = of.classify(np.diag([0.5, 0.3, 0.2]).astype(complex))
    assert d["partition"] == [1, 1, 1]
    assert d["orbit_dim"] == 6
    assert d["rank"] == 3


def test_classify_rejects_non_hermitian():
    m = np.array([[0.5, 0.1], [0.0, 0.5]], dtype=complex)
    with pytest.raises(of.ValidationError):
        of.classify(m)
    assert issubclass(of.ValidationError, of.Error)
    assert issubclass(of.Error, ValueError)


def test_spectral_roundtrip():
    rng = np.random.default_rng(4)
    rho, _ = rotated([0.6, 0.3, 0.1], rng)
    u, kappa = of.spectral_decompose(rho)
    assert np.allclose(kappa, [0.6, 0.3, 0.1])
    assert np.linalg.norm(u @ np.diag(kappa) @ u.conj().T - rho) < 1e-12


def test_sld_solves_lyapunov_equation():
    rng = np.random.default_rng(5)
    rho, _ = rotated([0.5, 0.3, 0.2], rng)
    basis = of.normal_basis(rho)
    assert len(basis) == 6
    for v in basis:
        ell = of.sld(rho, v)
        assert np.linalg.norm(0.5 * (ell @ rho + rho @ ell) - v) < 1e-12
        assert np.linalg.norm(ell - of.sld_linear_solve(rho, v)) < 1e-9
        k = of.phi_inverse(rho, v)
        assert np.linalg.norm(k @ rho - rho @ k - v) < 1e-12


def test_u2_fisher_values():
    rho = np.diag([0.75, 0.25]).astype(complex)
    v1, v2 = 0.5 * SY, -0.5 * SX
    assert of.fisher_tensor(rho, v1, v1).real == pytest.approx(1.0, abs=1e-12)
    assert of.fisher_tensor(rho, v1, v2).imag == pytest.approx(0.5, abs=1e-12)
    assert of.kks_form(rho, v1, v2) == pytest.approx(-1.0, abs=1e-12)
    assert of.kks_compatible_metric(rho, v1, v1) == pytest.approx(1.0, abs=1e-12)
    assert of.bures_tangent(rho, v1, v1) == pytest.approx(0.25, abs=1e-12)


def test_fisher_split_matrices():
    rng = np.random.default_rng(6)
    rho, _ = rotated([0.5, 0.3, 0.2], rng)
    r = of.fisher_split(rho)
    assert np.allclose(r["fisher_sym"], r["fisher_sym"].T, atol=1e-12)
    assert np.allclose(r["fisher_antisym"], -r["fisher_antisym"].T, atol=1e-12)
    assert np.allclose(r["bures"], r["fisher_sym"] / 4)
    dev, ok = of.pullback_identity_check(rho)
    assert ok and dev < 1e-10


def test_u3_closed_form():
    pairs = of.fisher_u3_closed_form(np.array([0.5, 0.3, 0.2]))
    k = [0.5, 0.3, 0.2]
    for p in pairs:
        a, b = k[p["i"]], k[p["j"]]
        assert p["sym"] == pytest.approx(4 * (a - b) ** 2 / (a + b), rel=1e-12)
        assert p["antisym"] == pytest.approx(4 * abs(a - b) ** 3 / (a + b) ** 2, rel=1e-12)
    with pytest.raises(of.DomainError):
        of.fisher_u3_closed_form(np.array([0.4, 0.4, 0.2]))


def test_fibration_dimensions():
    assert of.dimension_identity(np.diag([0.5, 0.3, 0.2]).astype(complex),
                                 np.diag([1.0, 0.0, 0.0]).astype(complex)) == (4, 2, 6)
    with pytest.raises(of.InclusionError):
        of.dimension_identity(np.diag([1.0, 0.0, 0.0]).astype(complex),
                              np.diag([0.5, 0.3, 0.2]).astype(complex))
    rows = of.nesting_report(3, [([1, 1, 1], [1, 2]), ([1, 2], [2, 1])])
    assert (rows[0]["total_dim"], rows[0]["base_dim"], rows[0]["fibre_dim"]) == (6, 4, 2)
    assert rows[0]["ok"] and not rows[1]["ok"]


def test_selftest_passes_and_is_deterministic():
    a = of.selftest(seed=11)
    assert len(a) == 9
    assert all(ok for _, ok, _ in a)
    assert a == of.selftest(seed=11)
    assert not all(ok for _, ok, _ in of.selftest(tol=1e-20))
