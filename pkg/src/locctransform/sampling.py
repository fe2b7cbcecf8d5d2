"""Haar-random bipartite pure states and incomparability statistics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParameter
from .specvec import EPS_MAJ
from .states import PureState


@dataclass(frozen=True)
class FractionEstimate:
    dimension: int
    n_samples: int
    fraction: float
    std_error: float
    seed: int

    def to_row(self) -> tuple:
        return (self.dimension, self.n_samples, self.fraction, self.std_error, self.seed)


def _rng(seed, index=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if index is None:
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _gaussian(rng, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure_state(dim_a: int, dim_b: int, seed=0) -> PureState:
    """Sample from the unitarily invariant measure on ``A ⊗ B``.

    A matrix of i.i.d. standard complex Gaussians is normalized; its law is
    invariant under every fixed global unitary.
    """
    if dim_a < 1 or dim_b < 1:
        raise InvalidParameter("dimensions must be positive")
    amp = _gaussian(_rng(seed), (dim_a, dim_b))
    return PureState._trusted(amp)


def _pair_spectra(d: int, n_samples: int, seed: int):
    """Sorted Schmidt spectra for ``n_samples`` independent ``d×d`` pairs.

    Pair ``k`` draws from its own stream ``SeedSequence(seed, spawn_key=(k,))``
    so any subset of pairs can be regenerated on its own.
    """
    amps = np.empty((n_samples, 2, d, d), dtype=complex)
    for k in range(n_samples):
        amps[k] = _gaussian(_rng(seed, k), (2, d, d))
    sv = np.linalg.svd(amps, compute_uv=False)  # descending per matrix
    lam = sv ** 2
    lam /= lam.sum(axis=-1, keepdims=True)
    return lam[:, 0], lam[:, 1]


def _partial_sums(p, q):
    return np.cumsum(p - q, axis=-1)


def _sign_changes(sums: np.ndarray) -> np.ndarray:
    signs = np.where(sums > EPS_MAJ, 1, np.where(sums < -EPS_MAJ, -1, 0))
    counts = np.zeros(sums.shape[0], dtype=int)
    last = np.zeros(sums.shape[0], dtype=int)
    for col in signs.T:
        flip = (col != 0) & (last != 0) & (col != last)
        counts += flip
        last = np.where(col != 0, col, last)
    return counts


def incomparable_fraction(d: int, n_samples: int, seed: int = 0) -> FractionEstimate:
    """Fraction of Haar pairs of ``d×d`` states whose spectra are incomparable."""
    if d < 2 or n_samples < 1:
        raise InvalidParameter("need d >= 2 and n_samples >= 1")
    p, q = _pair_spectra(d, n_samples, seed)
    sums = _partial_sums(p, q)
    crosses = (sums > EPS_MAJ).any(axis=1) & (sums < -EPS_MAJ).any(axis=1)
    frac = float(crosses.mean())
    return FractionEstimate(d, n_samples, frac, math.sqrt(frac * (1 - frac) / n_samples), seed)


def crossing_profile(d: int, n_samples: int, seed: int = 0) -> dict[int, int]:
    """Histogram of the number of sign changes of ``T_k`` over the sampled pairs.

    Uses the same pairs as :func:`incomparable_fraction` for equal arguments.
    """
    if d < 2 or n_samples < 1:
        raise InvalidParameter("need d >= 2 and n_samples >= 1")
    p, q = _pair_spectra(d, n_samples, seed)
    counts = _sign_changes(_partial_sums(p, q)[:, :-1])
    return dict(sorted(Counter(counts.tolist()).items()))


def mean_purity(dim_a: int, dim_b: int, n_samples: int, seed: int = 0):
    """Monte Carlo mean of ``tr ρ_A²`` and its standard error."""
    rng = _rng(seed)
    amps = _gaussian(rng, (n_samples, dim_a, dim_b))
    lam = np.linalg.svd(amps, compute_uv=False) ** 2
    lam /= lam.sum(axis=-1, keepdims=True)
    purity = (lam ** 2).sum(axis=-1)
    return float(purity.mean()), float(purity.std(ddof=1) / math.sqrt(n_samples))
