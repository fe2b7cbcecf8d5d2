"""Schur-convex functionals of Schmidt spectra and the qubit entropy test."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidParameter, RankTooHigh
from .specvec import EPS_MAJ, EPS_NUM, check_prob_vector
from .states import PureState, schmidt_spectrum


@dataclass
class MonotoneReport:
    entropy_source: float
    entropy_target: float
    power_sums: dict = field(default_factory=dict)  # k -> (source, target)
    consistent: bool = True

    def to_dict(self) -> dict:
        return {
            "entropy_source": self.entropy_source,
            "entropy_target": self.entropy_target,
            "power_sums": {f"{k:g}": list(v) for k, v in self.power_sums.items()},
            "consistent": self.consistent,
        }


def shannon_entropy(p) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    p = check_prob_vector(p)
    nz = p[p > 0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def power_sum(p, k: float) -> float:
    """``Σ p_i^k``, i.e. ``tr ρ^k`` for a state with spectrum ``p``."""
    if not k >= 1:
        raise InvalidParameter(f"power sums are Schur-convex only for k >= 1, got {k}")
    p = check_prob_vector(p)
    return float(np.sum(p ** k))


def qubit_criterion(psi: PureState, phi: PureState) -> bool:
    """For Schmidt rank at most two, ``psi -> phi`` iff entropy does not increase."""
    lam_psi, lam_phi = schmidt_spectrum(psi), schmidt_spectrum(phi)
    for name, lam in (("source", lam_psi), ("target", lam_phi)):
        rank = int(np.count_nonzero(lam >= EPS_NUM))
        if rank > 2:
            raise RankTooHigh(f"{name} state has Schmidt rank {rank}")
    return shannon_entropy(lam_phi) <= shannon_entropy(lam_psi) + EPS_MAJ


def monotone_report(psi: PureState, phi: PureState, ks=(2, 3, 4)) -> MonotoneReport:
    lam_psi, lam_phi = schmidt_spectrum(psi), schmidt_spectrum(phi)
    h_src, h_tgt = shannon_entropy(lam_psi), shannon_entropy(lam_phi)
    sums = {k: (power_sum(lam_psi, k), power_sum(lam_phi, k)) for k in ks}
    consistent = h_tgt <= h_src + EPS_MAJ and all(
        src <= tgt + EPS_MAJ for k, (src, tgt) in sums.items() if k >= 2)
    return MonotoneReport(h_src, h_tgt, sums, bool(consistent))
