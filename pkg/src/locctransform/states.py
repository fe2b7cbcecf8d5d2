"""Bipartite pure states, reduced states and the Schmidt decomposition.

A state on ``A ⊗ B`` is stored as its ``dim_a × dim_b`` amplitude matrix
``C`` with ``|ψ⟩ = Σ C[i, j] |i⟩|j⟩``. In this picture an Alice operator
``M`` acts as ``C -> M @ C`` and a Bob operator ``V`` as ``C -> C @ V.T``,
which is the same as ``(M ⊗ I)`` or ``(I ⊗ V)`` on the row-major vector.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, InvalidState, NumericalFailure
from .specvec import EPS_NUM, check_prob_vector, pad, sorted_desc

NORM_TOL = 1e-10
EQUIV_TOL = 1e-8


class PureState:
    """Normalized pure state of a bipartite system.

    Parameters
    ----------
    amplitudes : array_like, shape (dim_a, dim_b)
        Complex amplitude matrix; rows index Alice's basis, columns Bob's.
    """

    __slots__ = ("_amp",)

    def __init__(self, amplitudes):
        amp = np.array(amplitudes, dtype=complex)
        if amp.ndim != 2 or 0 in amp.shape:
            raise InvalidState(f"amplitudes must be a non-empty matrix, got shape {amp.shape}")
        if not np.all(np.isfinite(amp)):
            raise InvalidState("amplitudes contain non-finite values")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm is {norm!r}, expected 1")
        amp.setflags(write=False)
        self._amp = amp

    @classmethod
    def from_vector(cls, vec, dim_a: int, dim_b: int) -> "PureState":
        vec = np.asarray(vec, dtype=complex)
        if vec.size != dim_a * dim_b:
            raise DimensionMismatch(f"vector of length {vec.size} does not fit {dim_a}x{dim_b}")
        return cls(vec.reshape(dim_a, dim_b))

    @classmethod
    def _trusted(cls, amp: np.ndarray) -> "PureState":
        # renormalize silently; used for outputs of our own unitary / Kraus maps
        amp = np.array(amp, dtype=complex)
        amp /= np.linalg.norm(amp)
        amp.setflags(write=False)
        obj = cls.__new__(cls)
        obj._amp = amp
        return obj

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amp

    @property
    def dim_a(self) -> int:
        return self._amp.shape[0]

    @property
    def dim_b(self) -> int:
        return self._amp.shape[1]

    @property
    def dims(self) -> tuple[int, int]:
        return self._amp.shape

    @property
    def vector(self) -> np.ndarray:
        return self._amp.reshape(-1)

    def __repr__(self):
        return f"PureState(dim_a={self.dim_a}, dim_b={self.dim_b})"


@dataclass(frozen=True)
class SchmidtForm:
    """``Σ_i sqrt(coefficients[i]) |basis_a[i]⟩|basis_b[i]⟩`` over nonzero terms."""

    coefficients: np.ndarray
    basis_a: np.ndarray  # shape (rank, dim_a), one basis vector per row
    basis_b: np.ndarray  # shape (rank, dim_b)

    @property
    def rank(self) -> int:
        return self.coefficients.size

    def reconstruct(self) -> PureState:
        amp = np.einsum("k,ki,kj->ij", np.sqrt(self.coefficients), self.basis_a, self.basis_b)
        return PureState._trusted(amp)


def _svd(amp, full_matrices=False):
    try:
        return np.linalg.svd(amp, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"singular value decomposition failed: {exc}") from exc


def _lex_key(vec: np.ndarray):
    return tuple(x for z in np.round(vec, 12) for x in (z.real, z.imag))


def schmidt_decompose(s: PureState) -> SchmidtForm:
    """Schmidt decomposition with a deterministic gauge.

    Coefficients are the squared singular values of the amplitude matrix,
    sorted descending; those below ``EPS_NUM`` are dropped. Each Alice vector
    has its first nonzero component made real and positive and the phase is
    pushed onto the Bob partner. Ties in the coefficients are ordered by the
    Alice vector components.
    """
    u, sv, vh = _svd(s.amplitudes)
    coeffs = sv ** 2
    keep = coeffs >= EPS_NUM
    coeffs, a_vecs, b_vecs = coeffs[keep], u.T[keep], vh[keep]

    for k in range(coeffs.size):
        lead = a_vecs[k][np.flatnonzero(np.abs(a_vecs[k]) > 1e-12)[0]]
        phase = lead / abs(lead)
        a_vecs[k] = a_vecs[k] / phase
        b_vecs[k] = b_vecs[k] * phase

    order = sorted(range(coeffs.size),
                   key=lambda k: (-round(float(coeffs[k]), 12), _lex_key(a_vecs[k])))
    coeffs = coeffs[order]
    return SchmidtForm(coeffs / coeffs.sum(), a_vecs[order], b_vecs[order])


def schmidt_spectrum(s: PureState) -> np.ndarray:
    """Descending Schmidt spectrum, of length ``min(dim_a, dim_b)``.

    Trailing zeros are kept so the vector coincides with the nonzero part of
    the eigenvalues of Alice's reduced state.
    """
    sv = _singular_values(s.amplitudes)
    return check_prob_vector(sorted_desc(sv ** 2), "Schmidt spectrum")


def _singular_values(amp):
    try:
        return np.linalg.svd(amp, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"singular value decomposition failed: {exc}") from exc


def reduced_state_alice(s: PureState) -> np.ndarray:
    """``tr_B |ψ⟩⟨ψ|`` as a ``dim_a × dim_a`` Hermitian matrix."""
    c = s.amplitudes
    rho = c @ c.conj().T
    return (rho + rho.conj().T) / 2


def reduced_state_bob(s: PureState) -> np.ndarray:
    c = s.amplitudes
    rho = c.T @ c.conj()
    return (rho + rho.conj().T) / 2


def from_schmidt_coefficients(p, dim_a: int, dim_b: int) -> PureState:
    """Canonical state ``Σ_i sqrt(p↓_i) |i⟩|i⟩`` on the computational bases."""
    p = sorted_desc(check_prob_vector(p, "Schmidt coefficients"))
    if p.size > min(dim_a, dim_b):
        nz = np.count_nonzero(p)
        if nz > min(dim_a, dim_b):
            raise DimensionMismatch(
                f"{nz} Schmidt coefficients do not fit into {dim_a}x{dim_b}")
        p = p[: min(dim_a, dim_b)]
    amp = np.zeros((dim_a, dim_b), dtype=complex)
    idx = np.arange(p.size)
    amp[idx, idx] = np.sqrt(p)
    return PureState(amp)


def locally_equivalent(x: PureState, y: PureState, tol: float = EQUIV_TOL) -> bool:
    px, py = schmidt_spectrum(x), schmidt_spectrum(y)
    d = max(px.size, py.size)
    return bool(np.all(np.abs(pad(px, d) - pad(py, d)) <= tol))


def fidelity(x: PureState, y: PureState) -> float:
    """``|⟨x|y⟩|²``."""
    if x.dims != y.dims:
        raise DimensionMismatch(f"dimensions {x.dims} and {y.dims} differ")
    overlap = np.vdot(x.amplitudes, y.amplitudes)
    return float(min(1.0, abs(overlap) ** 2))


def apply_local(s: PureState, alice=None, bob=None) -> PureState:
    """Apply ``alice ⊗ bob`` (either may be omitted) and renormalize."""
    amp = s.amplitudes
    if alice is not None:
        amp = alice @ amp
    if bob is not None:
        amp = amp @ bob.T
    return PureState._trusted(amp)
