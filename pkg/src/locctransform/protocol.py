"""One-way LOCC protocols: decision, synthesis, validation and certificates.

A protocol is a flat list of steps executed in order. Alice ("A") and Bob
("B") act on their own factor only; classical outcomes are referenced by a
string label, and conditional steps may only read labels the acting party
already knows (it measured them or received them in a message).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np
import scipy.linalg

from .exceptions import (BranchNotPure, DimensionMismatch, InvalidProtocol,
                         NotLocallyEquivalent, NotMajorized)
from .specvec import (apply_t_transform, check_prob_vector,
                      decompose_t_transforms, majorizes, sorted_desc)
from .states import (PureState, _svd, from_schmidt_coefficients,
                     locally_equivalent, reduced_state_alice, schmidt_spectrum)

ALICE = "A"
BOB = "B"
PARTIES = (ALICE, BOB)
RESIDUAL_TOL = 1e-10
CERTIFICATE_TOL = 1e-9
BRANCH_FIDELITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    party: str
    unitary: np.ndarray
    kind = "local_unitary"


@dataclass(frozen=True, eq=False)
class Measurement:
    """Generalized measurement; outcome ``m`` is the index into ``operators``."""

    party: str
    operators: tuple
    label: str
    kind = "measurement"


@dataclass(frozen=True, eq=False)
class ClassicalMessage:
    sender: str
    receiver: str
    label: str
    kind = "message"


@dataclass(frozen=True, eq=False)
class ConditionalUnitary:
    party: str
    label: str
    table: Mapping[int, np.ndarray]
    kind = "conditional_unitary"


Step = Union[LocalUnitary, Measurement, ClassicalMessage, ConditionalUnitary]


@dataclass(frozen=True)
class SynthesisStepParams:
    """Angles and block populations of one two-level step of the synthesis."""

    block: tuple
    alpha_plus: float
    alpha_minus: float
    beta_plus: float
    beta_minus: float
    zeta: float
    gamma: float
    delta: float


@dataclass(frozen=True, eq=False)
class Protocol:
    dim_a: int
    dim_b: int
    steps: tuple = ()
    synthesis: tuple = ()

    def dim(self, party: str) -> int:
        return self.dim_a if party == ALICE else self.dim_b

    @property
    def measurements(self) -> list:
        return [s for s in self.steps if isinstance(s, Measurement)]


@dataclass
class StepCheck:
    index: int
    kind: str
    completeness_residual: Optional[float] = None
    unitarity_residual: Optional[float] = None
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        res = [r for r in (self.completeness_residual, self.unitarity_residual) if r is not None]
        return not self.violations and all(r <= RESIDUAL_TOL for r in res)


@dataclass
class ValidationReport:
    steps: list

    @property
    def valid(self) -> bool:
        return all(s.ok for s in self.steps)

    @property
    def max_residual(self) -> float:
        res = [r for s in self.steps
               for r in (s.completeness_residual, s.unitarity_residual) if r is not None]
        return max(res, default=0.0)

    def failures(self) -> list[str]:
        out = []
        for s in self.steps:
            if s.completeness_residual is not None and s.completeness_residual > RESIDUAL_TOL:
                out.append(f"step {s.index}: completeness residual {s.completeness_residual:.3e}")
            if s.unitarity_residual is not None and s.unitarity_residual > RESIDUAL_TOL:
                out.append(f"step {s.index}: unitarity residual {s.unitarity_residual:.3e}")
            out.extend(f"step {s.index}: {v}" for v in s.violations)
        return out


@dataclass(frozen=True, eq=False)
class NecessityCertificate:
    probabilities: np.ndarray
    unitaries: tuple
    reconstruction_residual: float
    implies_majorization: bool


def can_transform(psi: PureState, phi: PureState) -> bool:
    """Whether ``psi -> phi`` is possible by LOCC: ``λψ ≺ λφ``."""
    return majorizes(schmidt_spectrum(psi), schmidt_spectrum(phi))


def _unitarity_residual(u: np.ndarray) -> float:
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[1])))


def _matching_unitaries(src: np.ndarray, dst: np.ndarray):
    """Unitaries with ``ua @ src @ ub.T ≈ dst`` for matrices of equal singular values."""
    u1, _, vh1 = _svd(src, full_matrices=True)
    u2, _, vh2 = _svd(dst, full_matrices=True)
    ua = u2 @ u1.conj().T
    ub = (vh1.conj().T @ vh2).T
    return ua, ub


def correction_unitaries(post_state: PureState, target: PureState):
    """Local unitaries ``(U_a, U_b)`` with ``(U_a ⊗ U_b)|post⟩ ≈ |target⟩``.

    Built from matched singular bases of the two amplitude matrices, so it
    is insensitive to degenerate Schmidt coefficients.
    """
    if post_state.dims != target.dims:
        raise DimensionMismatch(f"dimensions {post_state.dims} and {target.dims} differ")
    if not locally_equivalent(post_state, target):
        raise NotLocallyEquivalent("states have different Schmidt spectra")
    return _matching_unitaries(post_state.amplitudes, target.amplitudes)


def _embed(block: np.ndarray, i: int, j: int, n: int, fill: float = 1.0) -> np.ndarray:
    out = np.eye(n, dtype=complex) * fill
    idx = np.array([i, j])
    out[np.ix_(idx, idx)] = block
    return out


def _block_angles(alpha_plus: float, beta_plus: float, beta_minus: float):
    gamma = math.acos(min(1.0, max(-1.0, 2.0 * alpha_plus - 1.0)))
    arg = 2.0 * math.sqrt(max(beta_plus * beta_minus, 0.0)) / math.sin(gamma)
    delta = 0.5 * math.asin(min(1.0, max(0.0, arg)))
    return gamma, delta


def synthesize(psi: PureState, phi: PureState) -> Protocol:
    """Build an explicit one-way LOCC protocol taking ``psi`` to ``phi``.

    The Schmidt spectrum of ``phi`` is split into a chain of T-transforms
    leading to the spectrum of ``psi``; the chain is run backwards, one
    two-level block per binary measurement by Alice. Between blocks the
    state is brought back to canonical form ``Σ sqrt(λ_i)|ii⟩``.

    Raises
    ------
    NotMajorized
        If ``λψ ≺ λφ`` fails.
    DimensionMismatch
        If the two states live on different spaces.
    """
    if psi.dims != phi.dims:
        raise DimensionMismatch(f"dimensions {psi.dims} and {phi.dims} differ")
    dim_a, dim_b = psi.dims
    lam_psi, lam_phi = schmidt_spectrum(psi), schmidt_spectrum(phi)
    if not majorizes(lam_psi, lam_phi):
        raise NotMajorized("source spectrum is not majorized by the target spectrum")

    transforms = decompose_t_transforms(lam_psi, lam_phi)
    path = [sorted_desc(lam_phi)]
    for T in transforms:
        path.append(apply_t_transform(path[-1], T))

    def canonical(v):
        return from_schmidt_coefficients(check_prob_vector(v), dim_a, dim_b)

    steps: list = []
    params: list = []
    ua, ub = correction_unitaries(psi, canonical(path[-1]))
    steps += [LocalUnitary(ALICE, ua), LocalUnitary(BOB, ub)]

    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    for s in reversed(range(len(transforms))):
        i, j = transforms[s].i, transforms[s].j
        before, after = path[s + 1], path[s]
        weight = float(before[i] + before[j])
        a_plus, a_minus = float(before[i]) / weight, float(before[j]) / weight
        b_weight = float(after[i] + after[j])
        b_plus, b_minus = float(after[i]) / b_weight, float(after[j]) / b_weight
        if a_minus <= 1e-15:
            # block already a product; nothing left to concentrate
            continue
        gamma, delta = _block_angles(a_plus, b_plus, b_minus)
        params.append(SynthesisStepParams(
            block=(i, j), alpha_plus=a_plus, alpha_minus=a_minus,
            beta_plus=b_plus, beta_minus=b_minus,
            zeta=math.acos(min(1.0, math.sqrt(weight))), gamma=gamma, delta=delta))

        # |00>,|11> block -> (|00> + |1>(cos γ|0> + sin γ|1>))/sqrt 2, scaled by sqrt(weight)
        c, sn = math.cos(gamma / 2), math.sin(gamma / 2)
        bob_rot = np.array([[c, sn], [sn, -c]])
        prepared = math.sqrt(weight) * hadamard @ np.diag([math.sqrt(a_plus), math.sqrt(a_minus)]) @ bob_rot.T

        m1 = np.diag([math.cos(delta), math.sin(delta)])
        m2 = np.diag([math.sin(delta), math.cos(delta)])
        post1 = math.sqrt(2.0) * m1 @ prepared
        post2 = math.sqrt(2.0) * m2 @ prepared
        target = np.diag(np.sqrt([after[i], after[j]]))
        ca1, cb1 = _matching_unitaries(post1, target)
        ca21, cb21 = _matching_unitaries(post2, post1)

        label = f"m{len(params) - 1}"
        rsq = 1.0 / math.sqrt(2.0)
        steps += [
            LocalUnitary(ALICE, _embed(hadamard, i, j, dim_a)),
            LocalUnitary(BOB, _embed(bob_rot, i, j, dim_b)),
            Measurement(ALICE, (_embed(m1, i, j, dim_a, rsq), _embed(m2, i, j, dim_a, rsq)), label),
            ClassicalMessage(ALICE, BOB, label),
            ConditionalUnitary(ALICE, label, {0: _embed(ca1, i, j, dim_a),
                                              1: _embed(ca1 @ ca21, i, j, dim_a)}),
            ConditionalUnitary(BOB, label, {0: _embed(cb1, i, j, dim_b),
                                            1: _embed(cb1 @ cb21, i, j, dim_b)}),
        ]

    ua, ub = correction_unitaries(canonical(path[0]), phi)
    steps += [LocalUnitary(ALICE, ua), LocalUnitary(BOB, ub)]
    return Protocol(dim_a, dim_b, tuple(steps), tuple(params))


def validate(p: Protocol) -> ValidationReport:
    """Check completeness, unitarity, locality and classical causality of every step."""
    checks = []
    outcomes: dict[str, int] = {}  # label -> number of outcomes
    measured_by: dict[str, str] = {}
    known = {ALICE: set(), BOB: set()}

    for idx, step in enumerate(p.steps):
        chk = StepCheck(idx, getattr(step, "kind", type(step).__name__))
        checks.append(chk)
        party = getattr(step, "party", None)
        if party is not None and party not in PARTIES:
            chk.violations.append(f"unknown party {party!r}")
            continue

        def local_shape(m, what):
            n = p.dim(party)
            m = np.asarray(m)
            if m.shape != (n, n):
                chk.violations.append(
                    f"{what} has shape {m.shape}, outside party {party}'s {n}x{n} space")
                return False
            return True

        if isinstance(step, LocalUnitary):
            if local_shape(step.unitary, "unitary"):
                chk.unitarity_residual = _unitarity_residual(step.unitary)
        elif isinstance(step, Measurement):
            if not step.operators:
                chk.violations.append("measurement has no operators")
                continue
            if step.label in outcomes:
                chk.violations.append(f"label {step.label!r} reused")
            if all(local_shape(m, f"operator {k}") for k, m in enumerate(step.operators)):
                total = sum(m.conj().T @ m for m in step.operators)
                chk.completeness_residual = float(np.linalg.norm(total - np.eye(p.dim(party))))
            outcomes[step.label] = len(step.operators)
            measured_by[step.label] = party
            known[party].add(step.label)
        elif isinstance(step, ClassicalMessage):
            if step.sender not in PARTIES or step.receiver not in PARTIES:
                chk.violations.append("message between unknown parties")
            elif step.label not in known[step.sender]:
                chk.violations.append(f"{step.sender} sends {step.label!r} before knowing it")
            else:
                known[step.receiver].add(step.label)
        elif isinstance(step, ConditionalUnitary):
            if step.label not in outcomes:
                chk.violations.append(f"reads outcome {step.label!r} before it is produced")
                continue
            if step.label not in known[party]:
                chk.violations.append(f"{party} reads {step.label!r} without receiving it")
            missing = set(range(outcomes[step.label])) - set(step.table)
            extra = set(step.table) - set(range(outcomes[step.label]))
            if missing:
                chk.violations.append(f"no unitary for outcomes {sorted(missing)}")
            if extra:
                chk.violations.append(f"unitaries for nonexistent outcomes {sorted(extra)}")
            resid = [
                _unitarity_residual(u) for k, u in sorted(step.table.items())
                if local_shape(u, f"table entry {k}")
            ]
            if resid:
                chk.unitarity_residual = max(resid)
        else:
            chk.violations.append(f"unknown step type {type(step).__name__}")
    return ValidationReport(checks)


def communication_cost(p: Protocol) -> int:
    """Bits sent: ``ceil(log2(#outcomes))`` per measurement."""
    return sum(math.ceil(math.log2(len(m.operators))) for m in p.measurements)


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def necessity_certificate(p: Protocol, psi: PureState, phi: PureState) -> NecessityCertificate:
    """Extract the mixture ``ρψ = Σ p_m U_m† ρφ U_m`` witnessed by a protocol.

    For every branch ``m`` the composite Alice operator ``M_m`` is polar
    decomposed as ``M_m sqrt(ρψ) = sqrt(M_m ρψ M_m†) U_m``. Only protocols
    whose Bob-side steps are unitary are accepted.

    Raises
    ------
    InvalidProtocol
        If the protocol fails validation or Bob performs a measurement.
    BranchNotPure
        If some branch does not end on ``phi``.
    """
    from .simulator import _walk
    from .states import fidelity

    report = validate(p)
    if not report.valid:
        raise InvalidProtocol("; ".join(report.failures()), report)
    if any(m.party == BOB for m in p.measurements):
        raise InvalidProtocol("certificate extraction needs unitary Bob-side steps")

    rho_psi = reduced_state_alice(psi)
    rho_phi = reduced_state_alice(phi)
    sqrt_psi = _psd_sqrt(rho_psi)
    probs, unitaries = [], []
    for br in _walk(p, psi, track_alice=True):
        if fidelity(PureState._trusted(br.amplitudes), phi) < 1.0 - BRANCH_FIDELITY_TOL:
            raise BranchNotPure(f"branch {br.outcomes} does not reach the target")
        op = br.alice_operator
        probs.append(float(np.real(np.trace(op @ rho_psi @ op.conj().T))))
        u, _ = scipy.linalg.polar(op @ sqrt_psi, side="left")
        unitaries.append(u)
    probs = np.array(probs)
    mixture = sum(pm * u.conj().T @ rho_phi @ u for pm, u in zip(probs, unitaries))
    residual = float(np.linalg.norm(rho_psi - mixture))
    mixed_spec = np.clip(np.linalg.eigvalsh((mixture + mixture.conj().T) / 2), 0.0, None)
    target_spec = np.clip(np.linalg.eigvalsh(rho_phi), 0.0, None)
    implied = majorizes(mixed_spec / mixed_spec.sum(), target_spec / target_spec.sum())
    return NecessityCertificate(probs, tuple(unitaries), residual,
                                bool(implied and residual <= CERTIFICATE_TOL))
