import math
from collections import Counter
from functools import reduce

import numpy as np
import pytest

from locctransform.asymptotics import (distillation_certificate, distillation_epr_count,
                                       formation_certificate, formation_epr_count,
                                       log2_sum, n_copy_spectrum, rate_row,
                                       truncate_typical)
from locctransform.exceptions import EmptyTypicalSet, InvalidParameter, TooLarge
from locctransform.monotones import shannon_entropy

S_08 = 0.7219280948873623


def kron_oracle(p, n):
    """Eigenvalues of the n-fold tensor power by brute force, grouped by value."""
    full = reduce(np.kron, [np.asarray(p, float)] * n)
    grouped = Counter(round(float(v), 12) for v in full if v > 0)
    return sorted(grouped.items(), reverse=True)


def as_atoms(spec):
    return [(2.0 ** v, 2.0 ** m) for v, m in spec.atoms]


def test_log2_sum():
    assert log2_sum([0.0, 0.0]) == pytest.approx(1.0)
    assert log2_sum([-1000.0, -1000.0]) == pytest.approx(-999.0)
    assert log2_sum([]) == -math.inf


@pytest.mark.parametrize("p, n, expected", [
    ((1.0,), 5, [(1.0, 1)]),
    ((0.5, 0.5), 3, [(0.125, 8)]),
    ((0.8, 0.2), 2, [(0.64, 1), (0.16, 2), (0.04, 1)]),
])
def test_atom_examples(p, n, expected):
    atoms = as_atoms(n_copy_spectrum(p, n))
    assert len(atoms) == len(expected)
    for (v, m), (ev, em) in zip(atoms, expected):
        assert v == pytest.approx(ev, rel=1e-12)
        assert m == pytest.approx(em, rel=1e-12)


@pytest.mark.parametrize("p, n", [
    ((0.8, 0.2), 7), ((0.5, 0.3, 0.2), 5), ((0.4, 0.3, 0.2, 0.1), 4), ((0.6, 0.4, 0.0), 6),
])
def test_atoms_match_kron_oracle(p, n):
    spec = n_copy_spectrum(p, n)
    got = as_atoms(spec)
    want = kron_oracle(p, n)
    assert len(got) == len(want)
    for (v, m), (ev, em) in zip(got, want):
        assert v == pytest.approx(ev, rel=1e-9)
        assert m == pytest.approx(em, rel=1e-9)
    assert spec.log2_total_mass() == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(np.sort(spec.expand())[::-1],
                               np.sort(reduce(np.kron, [np.array(p)] * n))[::-1][:spec.expand().size],
                               atol=1e-12)


def test_large_n_stays_finite():
    spec = n_copy_spectrum((0.5, 0.5), 1000)
    assert spec.log2_count() == pytest.approx(1000.0)
    assert spec.log2_total_mass() == pytest.approx(0.0, abs=1e-9)


def test_cap_and_bad_n():
    with pytest.raises(TooLarge):
        n_copy_spectrum(np.full(10, 0.1), 50)
    with pytest.raises(InvalidParameter):
        n_copy_spectrum((0.5, 0.5), 0)


def test_truncation_example():
    spec = n_copy_spectrum((0.8, 0.2), 2)
    trunc = truncate_typical(spec, S_08, 1.0)
    assert trunc.epsilon == pytest.approx(0.04, abs=1e-12)
    assert trunc.kept.log2_total_mass() == pytest.approx(0.0, abs=1e-12)
    assert trunc.kept.expand().sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(as_atoms(trunc.kept), [(0.64 / 0.96, 1), (0.16 / 0.96, 2)])


def test_truncation_keeps_everything_and_empty():
    spec = n_copy_spectrum((0.8, 0.2), 5)
    assert truncate_typical(spec, S_08, 10.0).epsilon == 0.0
    with pytest.raises(EmptyTypicalSet):
        truncate_typical(n_copy_spectrum((0.8, 0.2), 1), S_08, 0.05)
    with pytest.raises(InvalidParameter):
        truncate_typical(spec, S_08, -0.1)


def test_truncation_window_respected():
    n, delta = 200, 0.15
    trunc = truncate_typical(n_copy_spectrum((0.7, 0.2, 0.1), n), shannon_entropy((0.7, 0.2, 0.1)), delta)
    # undo renormalization before reading off the per-copy rate
    raw = trunc.kept.log2_values + math.log2(1 - trunc.epsilon)
    assert np.all(np.abs(-raw / n - trunc.entropy) <= delta + 1e-9)


@pytest.mark.parametrize("counter", [formation_epr_count, distillation_epr_count])
def test_epr_copies_are_exact(counter):
    m, eps = counter((0.5, 0.5), 10, 0.0)
    assert (m, eps) == (10, 0.0)


@pytest.mark.parametrize("counter", [formation_epr_count, distillation_epr_count])
def test_product_state_needs_nothing(counter):
    assert counter((1.0, 0.0), 20, 0.0) == (0, 0.0)


@pytest.mark.parametrize("counter", [formation_epr_count, distillation_epr_count])
def test_desk_scale_rates(counter):
    m, eps = counter((0.8, 0.2), 1000, 0.1)
    assert abs(m / 1000 - S_08) <= 0.12
    assert eps <= 0.01


@pytest.mark.parametrize("p", [(0.8, 0.2), (0.6, 0.3, 0.1), (0.9, 0.05, 0.05)])
@pytest.mark.parametrize("n", [20, 60, 150])
@pytest.mark.parametrize("delta", [0.05, 0.1, 0.3])
def test_rate_sandwich_and_certificates(p, n, delta):
    row = rate_row(p, n, delta)
    S = shannon_entropy(p)
    assert row.rate_distillation <= S + delta + 1 / n + 1e-12
    assert row.rate_formation >= S - delta - 1 / n - 1e-12
    assert row.m_distillation <= row.m_formation
    assert row.formation_certified and row.distillation_certified


def test_epsilon_non_increasing_in_delta():
    spec = n_copy_spectrum((0.8, 0.2), 300)
    eps = [truncate_typical(spec, S_08, d).epsilon for d in np.linspace(0.02, 1.0, 40)]
    assert all(b <= a + 1e-15 for a, b in zip(eps, eps[1:]))


def test_certificates_detect_wrong_counts():
    trunc = truncate_typical(n_copy_spectrum((0.8, 0.2), 12), S_08, 0.3)
    row = rate_row((0.8, 0.2), 12, 0.3)
    assert formation_certificate(trunc, row.m_formation)
    assert not formation_certificate(trunc, row.m_formation - 1)
    assert distillation_certificate(trunc, row.m_distillation)
    assert not distillation_certificate(trunc, row.m_distillation + 1)


def test_analytic_certificates_on_large_sets():
    trunc = truncate_typical(n_copy_spectrum((0.8, 0.2), 1000), S_08, 0.1)
    row = rate_row((0.8, 0.2), 1000, 0.1)
    assert formation_certificate(trunc, row.m_formation)
    assert not formation_certificate(trunc, row.m_formation - 1)
    assert distillation_certificate(trunc, row.m_distillation)
    assert not distillation_certificate(trunc, row.m_distillation + 1)


@pytest.mark.parametrize("n, delta", [(50, 0.1), (300, 0.05), (1000, 0.1)])
def test_epsilon_equals_one_minus_kept_mass(n, delta):
    spec = n_copy_spectrum((0.8, 0.2), n)
    trunc = truncate_typical(spec, S_08, delta)
    rate = -spec.log2_values / n
    # for (0.8, 0.2) the rate is linear in the exponent, so some atoms sit on the window edge
    keep = np.abs(rate - S_08) <= delta + 1e-12
    kept_mass = 2.0 ** log2_sum((spec.log2_values + spec.log2_multiplicities)[keep])
    assert trunc.epsilon == pytest.approx(1 - kept_mass, abs=1e-9)
