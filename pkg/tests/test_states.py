import math

import numpy as np
import pytest

from locctransform.exceptions import DimensionMismatch, InvalidState
from locctransform.states import (PureState, fidelity, from_schmidt_coefficients,
                                  locally_equivalent, reduced_state_alice,
                                  reduced_state_bob, schmidt_decompose,
                                  schmidt_spectrum)

from .conftest import EXAMPLE_PHI, EXAMPLE_PSI, random_prob, random_state, random_unitary


def ket(dim_a, dim_b, *terms):
    amp = np.zeros((dim_a, dim_b), dtype=complex)
    for coeff, i, j in terms:
        amp[i, j] = coeff
    return PureState(amp)


def test_bell_spectrum_and_reduced_state(bell):
    np.testing.assert_allclose(schmidt_spectrum(bell), [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(reduced_state_alice(bell), np.eye(2) / 2, atol=1e-15)
    assert schmidt_decompose(bell).rank == 2


def test_product_state():
    s = ket(2, 2, (1, 0, 1))
    form = schmidt_decompose(s)
    assert form.rank == 1
    np.testing.assert_allclose(form.coefficients, [1.0])
    np.testing.assert_allclose(reduced_state_alice(ket(2, 2, (1, 0, 0))), np.diag([1, 0]))


def test_example_states_written_in_computational_basis():
    r = math.sqrt
    psi = ket(3, 3, (r(1 / 2), 0, 0), (r(2 / 5), 1, 1), (r(1 / 10), 2, 2))
    phi = ket(3, 3, (r(3 / 5), 0, 0), (r(1 / 5), 1, 1), (r(1 / 5), 2, 2))
    np.testing.assert_allclose(schmidt_spectrum(psi), EXAMPLE_PSI, atol=1e-12)
    np.testing.assert_allclose(schmidt_decompose(psi).coefficients, EXAMPLE_PSI, atol=1e-12)
    np.testing.assert_allclose(reduced_state_alice(phi), np.diag(EXAMPLE_PHI), atol=1e-12)
    assert fidelity(phi, from_schmidt_coefficients(EXAMPLE_PHI, 3, 3)) == pytest.approx(1.0)


def test_from_schmidt_coefficients():
    assert fidelity(from_schmidt_coefficients([1.0], 2, 2), ket(2, 2, (1, 0, 0))) == pytest.approx(1)
    bell = ket(2, 2, (1 / math.sqrt(2), 0, 0), (1 / math.sqrt(2), 1, 1))
    assert fidelity(from_schmidt_coefficients([0.5, 0.5], 2, 2), bell) == pytest.approx(1)
    s = from_schmidt_coefficients([0.2, 0.8], 2, 3)
    np.testing.assert_allclose(schmidt_spectrum(s), [0.8, 0.2])
    with pytest.raises(DimensionMismatch):
        from_schmidt_coefficients([0.5, 0.3, 0.2], 2, 4)


def test_norm_invariant():
    with pytest.raises(InvalidState):
        PureState([[1, 0], [0, 1]])
    with pytest.raises(InvalidState):
        PureState([1, 0])


def test_locally_equivalent_examples(bell):
    flipped = ket(2, 2, (1 / math.sqrt(2), 0, 1), (1 / math.sqrt(2), 1, 0))
    assert locally_equivalent(bell, flipped)
    assert not locally_equivalent(ket(2, 2, (1, 0, 0)), bell)
    assert locally_equivalent(bell, bell)
    # different local dimensions, same spectrum
    assert locally_equivalent(bell, from_schmidt_coefficients([0.5, 0.5], 3, 4))


def test_fidelity_examples(bell):
    assert fidelity(bell, bell) == pytest.approx(1.0)
    assert fidelity(ket(2, 2, (1, 0, 0)), ket(2, 2, (1, 0, 1))) == 0.0
    assert fidelity(bell, ket(2, 2, (1, 0, 0))) == pytest.approx(0.5)
    with pytest.raises(DimensionMismatch):
        fidelity(bell, from_schmidt_coefficients([1.0], 2, 3))


def test_spectrum_matches_reduced_state_eigenvalues(rng):
    # eigen-solver on both marginals as the independent route
    for _ in range(1000):
        da, db = (int(v) for v in rng.integers(1, 7, size=2))
        s = random_state(rng, da, db)
        spec = schmidt_spectrum(s)
        d = min(da, db)
        ev_a = np.sort(np.linalg.eigvalsh(reduced_state_alice(s)))[::-1][:d]
        ev_b = np.sort(np.linalg.eigvalsh(reduced_state_bob(s)))[::-1][:d]
        np.testing.assert_allclose(spec, ev_a, atol=1e-10)
        np.testing.assert_allclose(spec, ev_b, atol=1e-10)
        assert abs(spec.sum() - 1) <= 1e-10


def test_reduced_state_is_density_matrix(rng):
    for _ in range(50):
        rho = reduced_state_alice(random_state(rng, 4, 3))
        assert np.allclose(rho, rho.conj().T, atol=1e-12)
        assert abs(np.trace(rho) - 1) <= 1e-10
        assert np.linalg.eigvalsh(rho).min() >= -1e-10


def test_local_unitary_invariance(rng):
    for _ in range(200):
        da, db = (int(v) for v in rng.integers(2, 6, size=2))
        s = random_state(rng, da, db)
        u, v = random_unitary(rng, da), random_unitary(rng, db)
        moved = PureState(u @ s.amplitudes @ v.T)
        np.testing.assert_allclose(schmidt_spectrum(moved), schmidt_spectrum(s), atol=1e-10)
        assert locally_equivalent(moved, s)


def test_round_trip_spectrum(rng):
    for _ in range(200):
        d = int(rng.integers(1, 8))
        p = random_prob(rng, d, sparsity=0.3)
        s = from_schmidt_coefficients(p, d, d + 1)
        np.testing.assert_allclose(schmidt_spectrum(s), np.sort(p)[::-1], atol=1e-10)


def test_reconstruction_and_orthonormal_bases(rng):
    for _ in range(1000):
        da, db = (int(v) for v in rng.integers(1, 9, size=2))
        s = random_state(rng, da, db)
        form = schmidt_decompose(s)
        assert fidelity(form.reconstruct(), s) >= 1 - 1e-10
        np.testing.assert_allclose(form.basis_a.conj() @ form.basis_a.T, np.eye(form.rank), atol=1e-10)
        np.testing.assert_allclose(form.basis_b.conj() @ form.basis_b.T, np.eye(form.rank), atol=1e-10)
        assert np.all(np.diff(form.coefficients) <= 1e-15)


def test_phase_gauge(rng):
    form = schmidt_decompose(random_state(rng, 3, 3))
    for vec in form.basis_a:
        lead = vec[np.flatnonzero(np.abs(vec) > 1e-12)[0]]
        assert abs(lead.imag) < 1e-12 and lead.real > 0


def test_decomposition_deterministic(rng):
    s = random_state(rng, 4, 4)
    a, b = schmidt_decompose(s), schmidt_decompose(s)
    assert np.array_equal(a.basis_a, b.basis_a) and np.array_equal(a.basis_b, b.basis_b)


def test_degenerate_spectrum_reconstructs():
    s = from_schmidt_coefficients([0.25] * 4, 4, 4)
    form = schmidt_decompose(s)
    np.testing.assert_allclose(form.coefficients, [0.25] * 4)
    assert fidelity(form.reconstruct(), s) == pytest.approx(1.0)


def test_amplitudes_immutable(bell):
    with pytest.raises(ValueError):
        bell.amplitudes[0, 0] = 0
