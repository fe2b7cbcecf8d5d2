"""Exact n-copy spectra, typical-set truncation and EPR-pair counts.

Spectra of ``|φ⟩^{⊗n}`` are kept in compressed form: one atom per distinct
eigenvalue, with both the value and its multiplicity stored as base-2
logarithms so that multinomial counts like ``C(1000, 500)`` stay finite.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import EmptyTypicalSet, InvalidParameter, TooLarge
from .monotones import shannon_entropy
from .specvec import check_prob_vector, majorizes

DEFAULT_CAP = 10**6
EXPAND_LIMIT = 10**5
_MERGE_TOL = 1e-9
_ROUND_TOL = 1e-9
_LN2 = math.log(2.0)


def log2_sum(log_terms) -> float:
    """``log2(Σ 2^x)`` with exact (fsum) accumulation of the scaled terms."""
    x = np.asarray(log_terms, dtype=float)
    if x.size == 0:
        return -math.inf
    top = float(x.max())
    return top + math.log2(math.fsum(np.exp2(x - top)))


@dataclass(frozen=True, eq=False)
class ProductSpectrum:
    log2_values: np.ndarray  # descending
    log2_multiplicities: np.ndarray
    n_copies: int

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.log2_values.tolist(), self.log2_multiplicities.tolist()))

    def log2_total_mass(self) -> float:
        return log2_sum(self.log2_values + self.log2_multiplicities)

    def log2_count(self) -> float:
        return log2_sum(self.log2_multiplicities)

    def expand(self) -> np.ndarray:
        """Full eigenvalue list; only sensible for small total counts."""
        counts = np.rint(np.exp2(self.log2_multiplicities)).astype(int)
        return np.repeat(np.exp2(self.log2_values), counts)


@dataclass(frozen=True, eq=False)
class TypicalTruncation:
    kept: ProductSpectrum  # renormalized
    epsilon: float
    delta: float
    entropy: float


def n_copy_spectrum(p, n: int, cap: int = DEFAULT_CAP) -> ProductSpectrum:
    """Distinct eigenvalues of ``ρ^{⊗n}`` with their multiplicities.

    Every exponent pattern ``(k_1, …, k_r)`` over the ``r`` nonzero entries
    contributes value ``Π p_i^{k_i}`` with multinomial multiplicity; patterns
    whose values coincide (to ``1e-9`` in log2) are merged.

    Raises
    ------
    TooLarge
        If the number of patterns ``C(n + r - 1, r - 1)`` exceeds ``cap``.
    """
    if n < 1:
        raise InvalidParameter(f"need at least one copy, got n={n}")
    p = check_prob_vector(p)
    logs = np.log2(p[p > 0])
    r = logs.size
    n_patterns = math.comb(n + r - 1, r - 1)
    if n_patterns > cap:
        raise TooLarge(f"{n_patterns} exponent patterns exceed the cap of {cap}")

    # stars and bars: bar positions -> exponent pattern
    patterns = np.empty((n_patterns, r), dtype=np.int64)
    for row, bars in enumerate(itertools.combinations(range(n + r - 1), r - 1)):
        edges = (-1,) + bars + (n + r - 1,)
        patterns[row] = np.diff(edges) - 1
    values = patterns @ logs
    lgam = np.array([math.lgamma(k + 1) for k in range(n + 1)])
    mults = (math.lgamma(n + 1) - lgam[patterns].sum(axis=1)) / _LN2

    order = np.argsort(-values, kind="stable")
    values, mults = values[order], mults[order]
    out_v, out_m = [], []
    start = 0
    for stop in range(1, values.size + 1):
        if stop == values.size or values[start] - values[stop] > _MERGE_TOL:
            out_v.append(float(values[start]))
            out_m.append(log2_sum(mults[start:stop]))
            start = stop
    return ProductSpectrum(np.array(out_v), np.array(out_m), n)


def truncate_typical(s: ProductSpectrum, S: float, delta: float) -> TypicalTruncation:
    """Keep atoms with ``|-log2(λ)/n - S| <= delta`` and renormalize them.

    ``epsilon`` is the discarded mass, summed directly over discarded atoms.
    """
    if not delta >= 0:
        raise InvalidParameter(f"delta must be non-negative, got {delta}")
    rate = -s.log2_values / s.n_copies
    keep = np.abs(rate - S) <= delta + 1e-12
    if not keep.any():
        raise EmptyTypicalSet(f"no eigenvalue within {delta} of entropy rate {S}")
    weights = s.log2_values + s.log2_multiplicities
    dropped = weights[~keep]
    epsilon = float(np.exp2(log2_sum(dropped))) if dropped.size else 0.0
    log2_kept_mass = log2_sum(weights[keep])
    kept = ProductSpectrum(s.log2_values[keep] - log2_kept_mass,
                           s.log2_multiplicities[keep], s.n_copies)
    return TypicalTruncation(kept, min(max(epsilon, 0.0), 1.0), float(delta), float(S))


def _typical(phi_spectrum, n, delta, cap):
    S = shannon_entropy(phi_spectrum)
    return truncate_typical(n_copy_spectrum(phi_spectrum, n, cap), S, delta)


def _m_formation(trunc: TypicalTruncation) -> int:
    return max(0, math.ceil(trunc.kept.log2_count() - _ROUND_TOL))


def _m_distillation(trunc: TypicalTruncation) -> int:
    return max(0, math.floor(-float(trunc.kept.log2_values.max()) + _ROUND_TOL))


def formation_epr_count(phi_spectrum, n: int, delta: float, cap: int = DEFAULT_CAP):
    """EPR pairs consumed to build the typical part of ``n`` copies.

    Returns ``(m, epsilon)`` with ``m = ceil(log2 #typical eigenvalues)``;
    then ``2^m`` uniform weights are majorized by the truncated spectrum.
    """
    trunc = _typical(phi_spectrum, n, delta, cap)
    return _m_formation(trunc), trunc.epsilon


def distillation_epr_count(phi_spectrum, n: int, delta: float, cap: int = DEFAULT_CAP):
    """EPR pairs extracted from the projected typical part of ``n`` copies.

    Returns ``(m, epsilon)`` with ``m = floor(-log2 max renormalized λ)``,
    so the truncated spectrum is majorized by ``2^m`` uniform weights.
    """
    trunc = _typical(phi_spectrum, n, delta, cap)
    return _m_distillation(trunc), trunc.epsilon


def _expandable(spec: ProductSpectrum, m: int) -> bool:
    return spec.log2_count() <= math.log2(EXPAND_LIMIT) and 2**m <= EXPAND_LIMIT


def formation_certificate(trunc: TypicalTruncation, m: int) -> bool:
    """Check ``uniform(2^m) ≺ truncated`` explicitly when small, else by rank."""
    spec = trunc.kept
    if _expandable(spec, m):
        return majorizes(np.full(2**m, 2.0**-m), spec.expand())
    return spec.log2_count() <= m + _ROUND_TOL


def distillation_certificate(trunc: TypicalTruncation, m: int) -> bool:
    """Check ``truncated ≺ uniform(2^m)`` explicitly when small, else by max value."""
    spec = trunc.kept
    if _expandable(spec, m):
        return majorizes(spec.expand(), np.full(2**m, 2.0**-m))
    return float(spec.log2_values.max()) <= -m + _ROUND_TOL


@dataclass(frozen=True)
class RateRow:
    n: int
    delta: float
    m_formation: int
    m_distillation: int
    epsilon: float
    entropy: float
    formation_certified: bool
    distillation_certified: bool

    @property
    def rate_formation(self) -> float:
        return self.m_formation / self.n

    @property
    def rate_distillation(self) -> float:
        return self.m_distillation / self.n


def rate_row(phi_spectrum, n: int, delta: float, cap: int = DEFAULT_CAP) -> RateRow:
    """Both EPR counts for one ``(n, delta)`` with their majorization certificates."""
    trunc = _typical(phi_spectrum, n, delta, cap)
    m_form, m_dist = _m_formation(trunc), _m_distillation(trunc)
    return RateRow(n, float(delta), m_form, m_dist, trunc.epsilon, trunc.entropy,
                   formation_certificate(trunc, m_form),
                   distillation_certificate(trunc, m_dist))
