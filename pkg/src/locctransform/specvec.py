"""Probability vectors, the majorization order, T-transforms and crossing sums.

Vectors are plain 1-D numpy arrays; :func:`check_prob_vector` is the single
validation gate every public function goes through.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exceptions import IndexOutOfRange, InvalidVector, NotMajorized

EPS_NUM = 1e-12
EPS_MAJ = 1e-10
SUM_TOL = 1e-10
# settled coordinates are snapped exactly, so leftovers are pure rounding
_STEP_TOL = 1e-13


class Comparison(enum.Enum):
    LEFT_PRECEDES = "LeftPrecedes"
    RIGHT_PRECEDES = "RightPrecedes"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class TTransform:
    """Mixes coordinates ``i`` and ``j`` as ``[[t, 1-t], [1-t, t]]``."""

    i: int
    j: int
    t: float

    def __post_init__(self):
        if self.i == self.j:
            raise InvalidVector("T-transform needs two distinct indices")
        if not -EPS_NUM <= self.t <= 1 + EPS_NUM:
            raise InvalidVector(f"T-transform parameter {self.t} outside [0, 1]")

    def matrix(self, d: int) -> np.ndarray:
        m = np.eye(d)
        m[self.i, self.i] = m[self.j, self.j] = self.t
        m[self.i, self.j] = m[self.j, self.i] = 1.0 - self.t
        return m


@dataclass(frozen=True)
class CrossingReport:
    deltas: np.ndarray
    partial_sums: np.ndarray
    crosses: bool
    first_positive_k: Optional[int]
    first_negative_k: Optional[int]

    @property
    def sign_changes(self) -> int:
        signs = [1 if t > EPS_MAJ else -1 for t in self.partial_sums if abs(t) > EPS_MAJ]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def check_prob_vector(v, name: str = "vector") -> np.ndarray:
    """Validate ``v`` as a probability vector and return a clean float copy.

    Entries in ``[-EPS_NUM, EPS_NUM)`` are flushed to zero and the result is
    rescaled so the entries sum to one exactly (up to rounding).

    Raises
    ------
    InvalidVector
        If ``v`` is not one-dimensional, is empty, has an entry below
        ``-EPS_NUM`` or a sum farther than ``SUM_TOL`` from one.
    """
    try:
        arr = np.array(v, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidVector(f"{name} is not a real vector: {exc}") from None
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidVector(f"{name} must be a non-empty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidVector(f"{name} has non-finite entries")
    if arr.min() < -EPS_NUM:
        raise InvalidVector(f"{name} has a negative entry {arr.min():.3g}")
    total = arr.sum()
    if abs(total - 1.0) > SUM_TOL:
        raise InvalidVector(f"{name} sums to {total!r}, not 1")
    arr[arr < EPS_NUM] = 0.0
    return arr / arr.sum()


def sorted_desc(v) -> np.ndarray:
    # stable: equal entries keep their input order
    v = np.asarray(v, dtype=float)
    return v[np.argsort(-v, kind="stable")]


def pad(v: np.ndarray, d: int) -> np.ndarray:
    if v.size >= d:
        return v
    return np.concatenate([v, np.zeros(d - v.size)])


def _aligned(x, y):
    x = check_prob_vector(x, "x")
    y = check_prob_vector(y, "y")
    d = max(x.size, y.size)
    return sorted_desc(pad(x, d)), sorted_desc(pad(y, d))


def majorizes(x, y) -> bool:
    """Return True when ``x`` is majorized by ``y`` (``x ≺ y``).

    The shorter vector is zero-padded; partial sums are compared with slack
    ``EPS_MAJ``.
    """
    xs, ys = _aligned(x, y)
    return bool(np.all(np.cumsum(xs) <= np.cumsum(ys) + EPS_MAJ))


def compare(x, y) -> Comparison:
    xs, ys = _aligned(x, y)
    if np.all(np.abs(xs - ys) <= EPS_MAJ):
        return Comparison.EQUIVALENT
    diff = np.cumsum(xs) - np.cumsum(ys)
    if np.all(diff <= EPS_MAJ):
        return Comparison.LEFT_PRECEDES
    if np.all(diff >= -EPS_MAJ):
        return Comparison.RIGHT_PRECEDES
    return Comparison.INCOMPARABLE


def apply_t_transform(v, T: TTransform) -> np.ndarray:
    """Apply one T-transform; only coordinates ``T.i`` and ``T.j`` change."""
    v = np.array(v, dtype=float)
    d = v.size
    for idx in (T.i, T.j):
        if not 0 <= idx < d:
            raise IndexOutOfRange(f"index {idx} out of range for length {d}")
    a, b = v[T.i], v[T.j]
    v[T.i] = T.t * a + (1.0 - T.t) * b
    v[T.j] = (1.0 - T.t) * a + T.t * b
    return v


def apply_chain(v, transforms: Sequence[TTransform]) -> np.ndarray:
    out = np.array(v, dtype=float)
    for T in transforms:
        out = apply_t_transform(out, T)
    return out


def decompose_t_transforms(x, y) -> list[TTransform]:
    """Factor the doubly stochastic map taking ``y`` to ``x`` into T-transforms.

    Both vectors are zero-padded to a common length ``d`` and sorted
    descending. Applying the returned transforms in order to sorted ``y``
    yields sorted ``x``; at most ``d - 1`` transforms are returned and every
    intermediate vector stays sorted.

    Raises
    ------
    NotMajorized
        If ``x ≺ y`` does not hold.
    """
    xs, ys = _aligned(x, y)
    if not np.all(np.cumsum(xs) <= np.cumsum(ys) + EPS_MAJ):
        raise NotMajorized("x is not majorized by y")
    d = xs.size
    cur = ys.copy()
    out: list[TTransform] = []
    # Each pass settles at least one coordinate for good, so d - 1 passes
    # suffice; the extra headroom only absorbs rounding.
    for _ in range(2 * d):
        above = np.flatnonzero(cur - xs > _STEP_TOL)
        if above.size == 0:
            break
        j = int(above[-1])
        below = np.flatnonzero(xs[j + 1:] - cur[j + 1:] > _STEP_TOL)
        if below.size == 0:
            break
        k = j + 1 + int(below[0])
        gap_j = cur[j] - xs[j]
        gap_k = xs[k] - cur[k]
        delta = min(gap_j, gap_k)
        t = 1.0 - delta / (cur[j] - cur[k])
        T = TTransform(j, k, float(np.clip(t, 0.0, 1.0)))
        cur = apply_t_transform(cur, T)
        if gap_j <= gap_k:
            cur[j] = xs[j]
        if gap_k <= gap_j:
            cur[k] = xs[k]
        out.append(T)
    return out


def crossing_statistic(p, q) -> CrossingReport:
    """Partial sums ``T_k`` of the sorted differences ``p↓ - q↓``."""
    ps, qs = _aligned(p, q)
    deltas = ps - qs
    sums = np.cumsum(deltas)
    pos = np.flatnonzero(sums > EPS_MAJ)
    neg = np.flatnonzero(sums < -EPS_MAJ)
    return CrossingReport(
        deltas=deltas,
        partial_sums=sums,
        crosses=bool(pos.size and neg.size),
        first_positive_k=int(pos[0]) if pos.size else None,
        first_negative_k=int(neg[0]) if neg.size else None,
    )
