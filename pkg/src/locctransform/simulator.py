"""Execute protocols on pure states, either exhaustively or by sampling."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import DimensionMismatch, InvalidProtocol
from .protocol import (ALICE, ClassicalMessage, ConditionalUnitary,
                       LocalUnitary, Measurement, Protocol, communication_cost,
                       validate)
from .states import PureState, fidelity

PRUNE_TOL = 1e-14
PASS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Branch:
    outcomes: tuple
    probability: float
    final_state: PureState


@dataclass(frozen=True)
class TranscriptEvent:
    step: int
    kind: str
    party: str
    outcome: Optional[int]
    probability: float


@dataclass
class Transcript:
    events: list = field(default_factory=list)

    def outcomes(self) -> tuple:
        return tuple(e.outcome for e in self.events if e.outcome is not None)

    def to_dict(self) -> dict:
        return {"events": [e.__dict__ for e in self.events]}


@dataclass
class VerifyReport:
    min_fidelity: float
    total_probability: float
    communication_cost: int
    n_branches: int
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class _Partial:
    outcomes: tuple
    known: dict
    probability: float
    amplitudes: np.ndarray  # unnormalized; squared norm equals probability
    alice_operator: Optional[np.ndarray] = None


def _check(p: Protocol, psi: PureState):
    if psi.dims != (p.dim_a, p.dim_b):
        raise DimensionMismatch(f"state {psi.dims} does not fit protocol {(p.dim_a, p.dim_b)}")
    report = validate(p)
    if not report.valid:
        raise InvalidProtocol("; ".join(report.failures()), report)


def _act(br: _Partial, party: str, op: np.ndarray) -> None:
    if party == ALICE:
        br.amplitudes = op @ br.amplitudes
        if br.alice_operator is not None:
            br.alice_operator = op @ br.alice_operator
    else:
        br.amplitudes = br.amplitudes @ op.T


def _walk(p: Protocol, psi: PureState, track_alice: bool = False) -> list[_Partial]:
    """All outcome sequences with probability above ``PRUNE_TOL`` (unvalidated)."""
    start = _Partial((), {}, 1.0, psi.amplitudes.copy(),
                     np.eye(p.dim_a, dtype=complex) if track_alice else None)
    live = [start]
    for step in p.steps:
        if isinstance(step, LocalUnitary):
            for br in live:
                _act(br, step.party, step.unitary)
        elif isinstance(step, ConditionalUnitary):
            for br in live:
                _act(br, step.party, step.table[br.known[step.label]])
        elif isinstance(step, Measurement):
            nxt = []
            for br in live:
                for m, op in enumerate(step.operators):
                    child = _Partial(br.outcomes + (m,), {**br.known, step.label: m},
                                     br.probability, br.amplitudes, br.alice_operator)
                    _act(child, step.party, op)
                    prob = float(np.linalg.norm(child.amplitudes) ** 2)
                    if prob > PRUNE_TOL:
                        child.probability = prob
                        nxt.append(child)
            live = nxt
        # ClassicalMessage changes no quantum data
    return live


def enumerate_branches(p: Protocol, psi: PureState) -> list[Branch]:
    """Every outcome sequence of ``p`` on ``psi`` with its Born probability.

    Branches with probability at most ``PRUNE_TOL`` are dropped; final
    states are renormalized.
    """
    _check(p, psi)
    return [Branch(br.outcomes, br.probability, PureState._trusted(br.amplitudes))
            for br in _walk(p, psi)]


def run(p: Protocol, psi: PureState, seed: int = 0):
    """Sample one execution of ``p`` on ``psi``.

    Outcomes are drawn by inverse CDF over the operators in index order
    from a Philox generator keyed by ``seed``.

    Returns
    -------
    final_state : PureState
    transcript : Transcript
    """
    _check(p, psi)
    rng = np.random.Generator(np.random.Philox(seed))
    amp = psi.amplitudes.copy()
    known: dict = {}
    prob = 1.0
    transcript = Transcript()
    for idx, step in enumerate(p.steps):
        outcome = None
        if isinstance(step, LocalUnitary):
            amp = _apply(amp, step.party, step.unitary)
        elif isinstance(step, ConditionalUnitary):
            amp = _apply(amp, step.party, step.table[known[step.label]])
        elif isinstance(step, Measurement):
            norm2 = np.linalg.norm(amp) ** 2
            candidates = [_apply(amp, step.party, op) for op in step.operators]
            weights = np.array([np.linalg.norm(c) ** 2 for c in candidates]) / norm2
            cdf = np.cumsum(weights)
            outcome = int(min(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"),
                              len(candidates) - 1))
            amp = candidates[outcome] / np.sqrt(weights[outcome] * norm2)
            known[step.label] = outcome
            prob *= float(weights[outcome])
        party = step.sender if isinstance(step, ClassicalMessage) else step.party
        transcript.events.append(TranscriptEvent(idx, step.kind, party, outcome, prob))
    return PureState._trusted(amp), transcript


def _apply(amp, party, op):
    return op @ amp if party == ALICE else amp @ op.T


def verify_transformation(p: Protocol, psi: PureState, phi: PureState) -> VerifyReport:
    """Enumerate all branches and report the worst fidelity with ``phi``."""
    branches = enumerate_branches(p, psi)
    fids = [fidelity(b.final_state, phi) for b in branches]
    min_fid = min(fids) if fids else 0.0
    return VerifyReport(
        min_fidelity=min_fid,
        total_probability=float(sum(b.probability for b in branches)),
        communication_cost=communication_cost(p),
        n_branches=len(branches),
        passed=bool(min_fid >= 1.0 - PASS_TOL),
    )
